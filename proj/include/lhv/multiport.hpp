#pragma once

// Quantum side of the two-party multiport Bell experiment: the unbiased
// N-port (Fourier) beamsplitter, phase-shifted measurement unitaries, joint
// detection probabilities on the maximally entangled state, and the complex
// correlation function under isotropic noise.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lhv/errors.hpp"
#include "lhv/matrix.hpp"

namespace lhv {

/// gamma^k with gamma = exp(2 pi i / N). The exponent is reduced mod N
/// first so equal exponents give bit-identical values.
inline Complex root_of_unity(int n, long long k) {
    const long long r = ((k % n) + n) % n;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
}

inline void require_dimension(int n) {
    if (n < 2) throw InvalidDimension("dimension must be at least 2, got " + std::to_string(n));
}

/// Local phase shifts placed in front of the input ports of a multiport.
struct PhaseVector {
    std::vector<double> phases;

    PhaseVector() = default;
    PhaseVector(std::initializer_list<double> init) : phases(init) {}
    explicit PhaseVector(std::vector<double> p) : phases(std::move(p)) {}

    [[nodiscard]] std::size_t size() const noexcept { return phases.size(); }
    double operator[](std::size_t i) const { return phases[i]; }

    friend bool operator==(const PhaseVector&, const PhaseVector&) = default;
};

struct ExperimentConfig {
    int dimension = 0;
    std::vector<PhaseVector> alice;
    std::vector<PhaseVector> bob;

    [[nodiscard]] std::size_t alice_settings() const noexcept { return alice.size(); }
    [[nodiscard]] std::size_t bob_settings() const noexcept { return bob.size(); }

    /// Throws InvalidDimension / InvalidInput when the invariants fail.
    void validate() const {
        require_dimension(dimension);
        if (alice.empty() || bob.empty())
            throw InvalidInput("each party needs at least one setting");
        auto check = [this](const std::vector<PhaseVector>& side, const char* who) {
            for (std::size_t s = 0; s < side.size(); ++s) {
                if (side[s].size() != static_cast<std::size_t>(dimension))
                    throw InvalidDimension(std::string(who) + " setting " + std::to_string(s) +
                                           " has " + std::to_string(side[s].size()) +
                                           " phases, expected " + std::to_string(dimension));
                for (double p : side[s].phases)
                    if (!std::isfinite(p))
                        throw InvalidInput(std::string(who) + " setting " + std::to_string(s) +
                                           " contains a non-finite phase");
            }
        };
        check(alice, "alice");
        check(bob, "bob");
    }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Complex correlation values E^F(i, j) for every setting pair.
struct CorrelationMatrix {
    int dimension = 0;
    double noise = 0.0;
    CMatrix values;
};

/// probs(a, b): probability that Alice's detector a and Bob's detector b fire.
struct JointProbabilityTable {
    int dimension = 0;
    std::size_t alice_setting = 0;
    std::size_t bob_setting = 0;
    double noise = 0.0;
    RMatrix probs;
};

inline void require_noise(double noise) {
    if (!(noise >= 0.0 && noise <= 1.0))
        throw InvalidNoise("noise fraction must lie in [0, 1], got " + std::to_string(noise));
}

/// (1/sqrt N) gamma^{k l}, zero-based.
inline CMatrix fourier_matrix(int n) {
    require_dimension(n);
    CMatrix t(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t(k, l) = norm * root_of_unity(n, static_cast<long long>(k) * l);
    return t;
}

/// Multiport preceded by phase shifters: U(k, l) = T(k, l) exp(i phases[l]).
inline CMatrix observable_unitary(const PhaseVector& setting) {
    const int n = static_cast<int>(setting.size());
    CMatrix u = fourier_matrix(n);
    for (int l = 0; l < n; ++l) {
        if (!std::isfinite(setting[l])) throw InvalidInput("non-finite phase");
        const Complex shift = std::polar(1.0, setting[l]);
        for (int k = 0; k < n; ++k) u(k, l) *= shift;
    }
    return u;
}

namespace detail {

inline void require_indices(const ExperimentConfig& config, std::size_t i, std::size_t j) {
    if (i >= config.alice.size() || j >= config.bob.size())
        throw InvalidInput("setting index out of range (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
}

}  // namespace detail

/// Detection statistics for setting pair (i, j) on
/// (1-F)|psi><psi| + F I/N^2, |psi> = N^{-1/2} sum_m |m>|m>.
/// The pure part is evaluated by applying both local unitaries to the state.
inline JointProbabilityTable joint_probabilities(const ExperimentConfig& config, std::size_t i,
                                                 std::size_t j, double noise) {
    config.validate();
    detail::require_indices(config, i, j);
    require_noise(noise);

    const int n = config.dimension;
    const CMatrix ua = observable_unitary(config.alice[i]);
    const CMatrix ub = observable_unitary(config.bob[j]);
    const double amp_norm = 1.0 / std::sqrt(static_cast<double>(n));
    const double uniform = 1.0 / (static_cast<double>(n) * n);

    JointProbabilityTable table{n, i, j, noise, RMatrix(n, n)};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Complex amp{};
            for (int m = 0; m < n; ++m) amp += ua(a, m) * ub(b, m);
            amp *= amp_norm;
            const double p = (1.0 - noise) * std::norm(amp) + noise * uniform;
            table.probs(a, b) = p < 0.0 ? 0.0 : p;
        }
    return table;
}

/// Cyclic closed form (1-F)/N sum_m exp(i[(phi_m - phi_{m+1}) + (theta_m - theta_{m+1})]).
inline Complex correlation_value(const ExperimentConfig& config, std::size_t i, std::size_t j,
                                 double noise) {
    config.validate();
    detail::require_indices(config, i, j);
    require_noise(noise);

    const int n = config.dimension;
    const auto& phi = config.alice[i];
    const auto& theta = config.bob[j];
    Complex sum{};
    for (int m = 0; m < n; ++m) {
        const int next = (m + 1) % n;
        sum += std::polar(1.0, (phi[m] - phi[next]) + (theta[m] - theta[next]));
    }
    return (1.0 - noise) * sum / static_cast<double>(n);
}

/// sum_{a,b} gamma^{a+b} P(a, b): the correlation value read off the
/// detection statistics with detector l carrying the value gamma^l.
inline Complex correlation_from_probabilities(const JointProbabilityTable& table) {
    const int n = table.dimension;
    Complex sum{};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sum += root_of_unity(n, a + b) * table.probs(a, b);
    return sum;
}

inline CorrelationMatrix correlation_matrix(const ExperimentConfig& config, double noise) {
    config.validate();
    require_noise(noise);
    CorrelationMatrix q{config.dimension, noise, CMatrix(config.alice.size(), config.bob.size())};
    for (std::size_t i = 0; i < config.alice.size(); ++i)
        for (std::size_t j = 0; j < config.bob.size(); ++j)
            q.values(i, j) = correlation_value(config, i, j, noise);
    return q;
}

}  // namespace lhv
