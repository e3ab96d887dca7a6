#pragma once

// Critical visibility V_thr (and noise F_thr = 1 - V_thr) for the
// isotropically mixed entangled state: the largest V for which the
// V-scaled quantum statistics lie inside the local-hidden-variable polytope.
//
// Two formulations are provided:
//   correlation  - match the complex correlation matrix V Q with a convex
//                  mixture of the distinct strategy matrices;
//   probability  - match every joint detection probability
//                  V P0 + (1 - V)/N^2 with a mixture of all strategies.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lhv/errors.hpp"
#include "lhv/matrix.hpp"
#include "lhv/multiport.hpp"
#include "lhv/simplex.hpp"
#include "lhv/strategies.hpp"

namespace lhv {

enum class ThresholdMethod { correlation, probability };

inline const char* to_string(ThresholdMethod m) {
    return m == ThresholdMethod::correlation ? "correlation" : "probability";
}

struct WeightedStrategy {
    DeterministicStrategy strategy;
    double p = 0.0;
};

struct ThresholdResult {
    ThresholdMethod method = ThresholdMethod::correlation;
    int dimension = 0;
    double v_thr = 0.0;
    double f_thr = 1.0;
    std::vector<WeightedStrategy> weights;  // one per LP strategy column, LP order
    double residual = 0.0;
    std::size_t lp_iterations = 0;
};

/// Correlation-matching LP. Columns: one p_k per distinct strategy matrix,
/// then V, then the slack of V <= 1. Rows: Re and Im parts of
/// sum_k p_k H_k(i,j) - V Q(i,j) = 0 for every (i, j), then sum p = 1, then the
/// cap. With `pinned_v` the cap row becomes V = pinned_v.
struct CorrelationLP {
    LinearProgram lp;
    std::vector<StrategyMatrix> strategies;
    CMatrix target;  // Q at F = 0
    std::size_t v_column = 0;
};

inline CorrelationLP build_correlation_lp(const ExperimentConfig& config,
                                          std::optional<double> pinned_v = std::nullopt) {
    config.validate();
    const int n = config.dimension;
    const std::size_t sa = config.alice_settings();
    const std::size_t sb = config.bob_settings();

    CorrelationLP out;
    out.target = correlation_matrix(config, 0.0).values;
    out.strategies = distinct_matrices(enumerate_strategies(n, sa, sb), n);

    const std::size_t k = out.strategies.size();
    const std::size_t cols = k + 2;
    const std::size_t rows = 2 * sa * sb + 2;
    out.v_column = k;

    LinearProgram& lp = out.lp;
    lp.objective.assign(cols, 0.0);
    lp.objective[k] = 1.0;
    lp.constraints = RMatrix(rows, cols);
    lp.rhs.assign(rows, 0.0);

    std::vector<CMatrix> values;
    values.reserve(k);
    for (const auto& h : out.strategies) values.push_back(h.values());

    std::size_t row = 0;
    for (std::size_t i = 0; i < sa; ++i)
        for (std::size_t j = 0; j < sb; ++j) {
            for (std::size_t c = 0; c < k; ++c) {
                lp.constraints(row, c) = values[c](i, j).real();
                lp.constraints(row + 1, c) = values[c](i, j).imag();
            }
            lp.constraints(row, k) = -out.target(i, j).real();
            lp.constraints(row + 1, k) = -out.target(i, j).imag();
            row += 2;
        }
    for (std::size_t c = 0; c < k; ++c) lp.constraints(row, c) = 1.0;
    lp.rhs[row] = 1.0;
    ++row;
    lp.constraints(row, k) = 1.0;
    if (pinned_v) {
        lp.rhs[row] = *pinned_v;
    } else {
        lp.constraints(row, k + 1) = 1.0;
        lp.rhs[row] = 1.0;
    }
    return out;
}

/// max over entries of |sum_k p_k H_k - V Q|.
inline double correlation_reconstruction_error(const std::vector<StrategyMatrix>& strategies,
                                               const std::vector<double>& p, const CMatrix& target,
                                               double v) {
    CMatrix mix(target.rows(), target.cols());
    for (std::size_t k = 0; k < strategies.size(); ++k) mix = mix + Complex(p[k], 0.0) * strategies[k].values();
    return max_abs_diff(mix, Complex(v, 0.0) * target);
}

namespace detail {

inline void require_optimal(const LPSolution& sol, const char* what) {
    if (sol.status != LPStatus::optimal)
        throw SolverFailure(std::string(what) + " LP ended with status " + to_string(sol.status) +
                            (sol.diagnostics.empty() ? "" : " (" + sol.diagnostics + ")"));
}

}  // namespace detail

inline ThresholdResult correlation_threshold(const ExperimentConfig& config) {
    const CorrelationLP built = build_correlation_lp(config);
    const LPSolution sol = solve(built.lp);
    detail::require_optimal(sol, "correlation");

    ThresholdResult r;
    r.method = ThresholdMethod::correlation;
    r.dimension = config.dimension;
    r.v_thr = std::clamp(sol.x[built.v_column], 0.0, 1.0);
    r.f_thr = 1.0 - r.v_thr;
    r.lp_iterations = sol.iterations;
    std::vector<double> p(sol.x.begin(), sol.x.begin() + built.strategies.size());
    r.weights.reserve(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) r.weights.push_back({built.strategies[k].strategy, p[k]});
    r.residual = correlation_reconstruction_error(built.strategies, p, built.target, r.v_thr);
    return r;
}

/// Probability-matching LP over all N^(sA+sB) strategies. `targets[i*sB + j]`
/// is the noiseless table P0(a, b | i, j). Columns: p_lambda..., V, slack.
/// Rows: sum_lambda p_lambda [a_i = a][b_j = b] - V (P0 - 1/N^2) = 1/N^2 for
/// every (i, j, a, b), then sum p = 1, then the cap (or V = pinned_v).
struct ProbabilityLP {
    LinearProgram lp;
    std::vector<DeterministicStrategy> strategies;
    std::vector<RMatrix> targets;
    std::size_t v_column = 0;
};

inline ProbabilityLP build_probability_lp(int n, std::size_t sa, std::size_t sb, std::vector<RMatrix> targets,
                                          std::optional<double> pinned_v = std::nullopt) {
    require_dimension(n);
    if (targets.size() != sa * sb) throw InvalidInput("expected one probability table per setting pair");
    for (const auto& t : targets)
        if (t.rows() != static_cast<std::size_t>(n) || t.cols() != static_cast<std::size_t>(n))
            throw InvalidInput("probability table has the wrong shape");

    ProbabilityLP out;
    out.strategies = enumerate_strategies(n, sa, sb);
    out.targets = std::move(targets);

    const std::size_t k = out.strategies.size();
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    const std::size_t cols = k + 2;
    const std::size_t rows = sa * sb * nn + 2;
    const double uniform = 1.0 / static_cast<double>(nn);
    out.v_column = k;

    LinearProgram& lp = out.lp;
    lp.objective.assign(cols, 0.0);
    lp.objective[k] = 1.0;
    lp.constraints = RMatrix(rows, cols);
    lp.rhs.assign(rows, uniform);

    for (std::size_t i = 0; i < sa; ++i)
        for (std::size_t j = 0; j < sb; ++j) {
            const std::size_t base = (i * sb + j) * nn;
            const RMatrix& p0 = out.targets[i * sb + j];
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    lp.constraints(base + a * n + b, k) = -(p0(a, b) - uniform);
            for (std::size_t c = 0; c < k; ++c) {
                const auto& s = out.strategies[c];
                lp.constraints(base + s.alice[i] * n + s.bob[j], c) = 1.0;
            }
        }
    std::size_t row = sa * sb * nn;
    for (std::size_t c = 0; c < k; ++c) lp.constraints(row, c) = 1.0;
    lp.rhs[row] = 1.0;
    ++row;
    lp.constraints(row, k) = 1.0;
    if (pinned_v) {
        lp.rhs[row] = *pinned_v;
    } else {
        lp.constraints(row, k + 1) = 1.0;
        lp.rhs[row] = 1.0;
    }
    return out;
}

/// max over (i, j, a, b) of |sum_lambda p_lambda stat - (V P0 + (1 - V)/N^2)|.
inline double probability_reconstruction_error(const ProbabilityLP& built, int n, std::size_t sa,
                                               std::size_t sb, const std::vector<double>& p, double v) {
    const double uniform = 1.0 / (static_cast<double>(n) * n);
    double worst = 0.0;
    for (std::size_t i = 0; i < sa; ++i)
        for (std::size_t j = 0; j < sb; ++j) {
            RMatrix mix(n, n);
            for (std::size_t c = 0; c < built.strategies.size(); ++c)
                mix(built.strategies[c].alice[i], built.strategies[c].bob[j]) += p[c];
            const RMatrix& p0 = built.targets[i * sb + j];
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    worst = std::max(worst, std::abs(mix(a, b) - (v * p0(a, b) + (1.0 - v) * uniform)));
        }
    return worst;
}

inline ThresholdResult probability_threshold_for_targets(int n, std::size_t sa, std::size_t sb,
                                                         std::vector<RMatrix> targets) {
    const ProbabilityLP built = build_probability_lp(n, sa, sb, std::move(targets));
    const LPSolution sol = solve(built.lp);
    detail::require_optimal(sol, "probability");

    ThresholdResult r;
    r.method = ThresholdMethod::probability;
    r.dimension = n;
    r.v_thr = std::clamp(sol.x[built.v_column], 0.0, 1.0);
    r.f_thr = 1.0 - r.v_thr;
    r.lp_iterations = sol.iterations;
    std::vector<double> p(sol.x.begin(), sol.x.begin() + built.strategies.size());
    r.weights.reserve(p.size());
    for (std::size_t c = 0; c < p.size(); ++c) r.weights.push_back({built.strategies[c], p[c]});
    r.residual = probability_reconstruction_error(built, n, sa, sb, p, r.v_thr);
    return r;
}

/// Noiseless detection tables P0 for every setting pair, in i*sB + j order.
inline std::vector<RMatrix> pure_probability_tables(const ExperimentConfig& config) {
    std::vector<RMatrix> tables;
    tables.reserve(config.alice_settings() * config.bob_settings());
    for (std::size_t i = 0; i < config.alice_settings(); ++i)
        for (std::size_t j = 0; j < config.bob_settings(); ++j)
            tables.push_back(joint_probabilities(config, i, j, 0.0).probs);
    return tables;
}

inline ThresholdResult probability_threshold(const ExperimentConfig& config) {
    config.validate();
    if (strategy_count(config.dimension, config.alice_settings(), config.bob_settings()) >
        kStrategyEnumerationLimit)
        throw SizeLimitExceeded("N^(sA+sB) exceeds the enumeration limit of 1e7");
    return probability_threshold_for_targets(config.dimension, config.alice_settings(), config.bob_settings(),
                                             pure_probability_tables(config));
}

inline ThresholdResult compute_threshold(const ExperimentConfig& config, ThresholdMethod method) {
    return method == ThresholdMethod::correlation ? correlation_threshold(config) : probability_threshold(config);
}

}  // namespace lhv
