#pragma once

// Multi-start search over phase settings for the largest F_thr.
//
// Each party uses two settings; every setting has its first phase pinned to
// zero (a common phase offset leaves all statistics unchanged), leaving
// 4 (N - 1) free phases. Every restart runs coordinate ascent on F_thr with a
// golden-section line search over [x - step, x + step]; step starts at pi/2
// and halves after each sweep.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "lhv/errors.hpp"
#include "lhv/multiport.hpp"
#include "lhv/threshold.hpp"

namespace lhv {

struct ScanEntry {
    std::size_t restart = 0;
    std::uint64_t seed = 0;  // derived per-restart seed
    double f_thr = 0.0;      // NaN when the restart failed
    bool ok = true;
    std::string error;
    ExperimentConfig config;
};

struct ScanResult {
    ExperimentConfig best_config;
    double best_f_thr = 0.0;
    std::size_t restarts = 0;
    std::uint64_t seed = 0;
    std::vector<ScanEntry> history;  // restart order
};

struct ScanSchedule {
    double initial_step = std::numbers::pi / 2;
    double final_step = 1e-4;
    double min_sweep_gain = 1e-7;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
    return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(restart));
}

inline ExperimentConfig config_from_free_phases(int n, const std::vector<double>& x) {
    ExperimentConfig c;
    c.dimension = n;
    const std::size_t free = static_cast<std::size_t>(n - 1);
    for (std::size_t s = 0; s < 4; ++s) {
        std::vector<double> ph(n, 0.0);
        for (std::size_t m = 0; m < free; ++m) ph[m + 1] = x[s * free + m];
        (s < 2 ? c.alice : c.bob).emplace_back(std::move(ph));
    }
    return c;
}

class RestartRunner {
public:
    RestartRunner(int n, ThresholdMethod method, ScanSchedule schedule)
        : n_(n), method_(method), schedule_(schedule) {}

    ScanEntry run(std::size_t restart, std::uint64_t base_seed) const {
        ScanEntry entry;
        entry.restart = restart;
        entry.seed = restart_seed(base_seed, restart);

        std::mt19937_64 gen(entry.seed);
        const std::size_t dims = 4 * static_cast<std::size_t>(n_ - 1);
        std::vector<double> x(dims);
        for (auto& v : x) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;

        try {
            double best = objective(x);
            for (double step = schedule_.initial_step; step >= schedule_.final_step; step /= 2) {
                const double sweep_start = best;
                for (std::size_t c = 0; c < dims; ++c) line_search(x, c, step, best);
                if (best - sweep_start < schedule_.min_sweep_gain) break;
            }
            entry.f_thr = best;
            entry.config = config_from_free_phases(n_, x);
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.f_thr = std::nan("");
            entry.error = e.what();
        }
        return entry;
    }

private:
    double objective(const std::vector<double>& x) const {
        return compute_threshold(config_from_free_phases(n_, x), method_).f_thr;
    }

    /// Golden-section maximization of coordinate c over [x_c - step, x_c + step];
    /// the move is kept only when it beats the current value.
    void line_search(std::vector<double>& x, std::size_t c, double step, double& best) const {
        constexpr double inv_phi = 0.6180339887498949;
        const double origin = x[c];
        auto eval = [&](double t) {
            x[c] = t;
            return objective(x);
        };
        double lo = origin - step;
        double hi = origin + step;
        double a = hi - inv_phi * (hi - lo);
        double b = lo + inv_phi * (hi - lo);
        double fa = eval(a);
        double fb = eval(b);
        const double tol = std::max(step * 1e-3, 1e-7);
        while (hi - lo > tol) {
            if (fa >= fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - inv_phi * (hi - lo);
                fa = eval(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + inv_phi * (hi - lo);
                fb = eval(b);
            }
        }
        const double t = fa >= fb ? a : b;
        const double ft = fa >= fb ? fa : fb;
        if (ft > best) {
            best = ft;
            x[c] = t;
        } else {
            x[c] = origin;
        }
    }

    int n_;
    ThresholdMethod method_;
    ScanSchedule schedule_;
};

}  // namespace detail

/// Runs `restarts` independent searches. With threads > 1 restarts are
/// distributed over a worker pool; the reported best is the largest F_thr,
/// ties going to the lowest restart index, so the outcome does not depend on
/// the thread count.
inline ScanResult scan(int n, std::size_t restarts, std::uint64_t seed, ThresholdMethod method,
                       unsigned threads = 1, ScanSchedule schedule = {}) {
    if (n < 2 || n > 6) throw InvalidDimension("scan supports dimensions 2..6, got " + std::to_string(n));
    if (restarts < 1) throw InvalidInput("scan needs at least one restart");

    const detail::RestartRunner runner(n, method, schedule);
    ScanResult result;
    result.restarts = restarts;
    result.seed = seed;
    result.history.resize(restarts);

    if (threads <= 1) {
        for (std::size_t r = 0; r < restarts; ++r) result.history[r] = runner.run(r, seed);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, restarts));
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < restarts; r = next++) result.history[r] = runner.run(r, seed);
            });
        for (auto& t : pool) t.join();
    }

    bool found = false;
    for (const auto& e : result.history) {
        if (!e.ok) continue;
        if (!found || e.f_thr > result.best_f_thr) {
            found = true;
            result.best_f_thr = e.f_thr;
            result.best_config = e.config;
        }
    }
    if (!found) throw SolverFailure("every scan restart failed");
    return result;
}

}  // namespace lhv
