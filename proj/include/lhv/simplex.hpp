#pragma once

// Dense two-phase primal simplex for
//
//     maximize c.x   subject to   A x = b,  x >= 0.
//
// Phase 1 adds one artificial per row and drives their sum to zero; phase 2
// optimizes the real objective from the resulting basis. Artificials that
// cannot be pivoted out belong to redundant rows; they stay basic at zero and
// are barred from re-entering. Pricing is Dantzig's rule until the objective
// stalls for 5(m+n) iterations, then Bland's rule for the rest of the phase.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lhv/errors.hpp"
#include "lhv/matrix.hpp"

namespace lhv {

struct LinearProgram {
    std::vector<double> objective;  // c, length n
    RMatrix constraints;            // A, m x n
    std::vector<double> rhs;        // b, length m

    [[nodiscard]] std::size_t num_rows() const noexcept { return constraints.rows(); }
    [[nodiscard]] std::size_t num_vars() const noexcept { return objective.size(); }
};

enum class LPStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(LPStatus s) {
    switch (s) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::infeasible: return "infeasible";
        case LPStatus::unbounded: return "unbounded";
        case LPStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

struct LPSolution {
    LPStatus status = LPStatus::infeasible;
    double objective_value = 0.0;
    std::vector<double> x;
    double max_residual = 0.0;  // ||A x - b||_inf
    std::size_t iterations = 0;
    std::string diagnostics;
};

struct CertificateReport {
    double max_residual = 0.0;
    double min_variable = 0.0;
    double objective = 0.0;      // c.x recomputed
    double objective_gap = 0.0;  // |c.x - reported objective|
    bool residual_ok = false;
    bool nonnegativity_ok = false;
    bool objective_ok = false;

    [[nodiscard]] bool passed() const noexcept { return residual_ok && nonnegativity_ok && objective_ok; }
};

namespace simplex_tol {
inline constexpr double pivot = 1e-9;
inline constexpr double optimality = 1e-9;
inline constexpr double feasibility = 1e-9;
inline constexpr double zero = 1e-13;  // tableau entries below this are flushed to 0
inline constexpr double certificate_residual = 1e-8;
inline constexpr double certificate_nonneg = -1e-10;
inline constexpr double certificate_objective = 1e-10;
inline constexpr std::size_t iteration_cap = 1'000'000;
inline constexpr std::size_t max_rows = 10'000;
inline constexpr std::size_t max_vars = 1'000'000;
inline constexpr double max_tableau_entries = 5e7;
}  // namespace simplex_tol

inline double max_residual(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        double r = -lp.rhs[i];
        for (std::size_t j = 0; j < lp.num_vars(); ++j) r += lp.constraints(i, j) * x[j];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

namespace detail {

class SimplexTableau {
public:
    explicit SimplexTableau(const LinearProgram& lp)
        : m_(lp.num_rows()), n_(lp.num_vars()), width_(n_ + m_ + 1), t_(m_, width_), basis_(m_),
          z_(width_, 0.0), entering_allowed_(n_ + m_, true) {
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) t_(i, j) = sign * lp.constraints(i, j);
            t_(i, n_ + i) = 1.0;
            t_(i, rhs_col()) = sign * lp.rhs[i];
            basis_[i] = n_ + i;
        }
    }

    /// Runs both phases; fills status, x and the iteration count.
    LPSolution run(const std::vector<double>& objective) {
        LPSolution sol;
        sol.x.assign(n_, 0.0);

        // Phase 1: maximize -(sum of artificials).
        std::vector<double> phase1_cost(n_ + m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) phase1_cost[n_ + i] = -1.0;
        const LPStatus p1 = optimize(phase1_cost, sol);
        if (p1 == LPStatus::iteration_limit) {
            sol.status = p1;
            sol.diagnostics = "iteration cap reached in phase 1";
            return sol;
        }
        double infeasibility = 0.0;
        double scale = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            scale = std::max(scale, std::abs(t_(i, rhs_col())));
            if (basis_[i] >= n_) infeasibility += t_(i, rhs_col());
        }
        if (infeasibility > simplex_tol::feasibility * scale) {
            sol.status = LPStatus::infeasible;
            sol.diagnostics = "phase 1 optimum leaves artificial sum " + std::to_string(infeasibility);
            return sol;
        }

        drive_out_artificials();
        for (std::size_t a = n_; a < n_ + m_; ++a) entering_allowed_[a] = false;

        std::vector<double> phase2_cost(n_ + m_, 0.0);
        std::copy(objective.begin(), objective.end(), phase2_cost.begin());
        const LPStatus p2 = optimize(phase2_cost, sol);
        sol.status = p2;
        if (p2 == LPStatus::unbounded) sol.diagnostics = "objective unbounded above";
        if (p2 == LPStatus::iteration_limit) sol.diagnostics = "iteration cap reached in phase 2";

        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.x[basis_[i]] = std::max(0.0, t_(i, rhs_col()));
        return sol;
    }

private:
    [[nodiscard]] std::size_t rhs_col() const noexcept { return n_ + m_; }

    void price(const std::vector<double>& cost) {
        std::fill(z_.begin(), z_.end(), 0.0);
        for (std::size_t j = 0; j < n_ + m_; ++j) z_[j] = -cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) z_[j] += cb * t_(i, j);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const double inv = 1.0 / t_(row, col);
        for (std::size_t j = 0; j < width_; ++j) t_(row, j) *= inv;
        t_(row, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = t_(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) {
                double& v = t_(i, j);
                v -= f * t_(row, j);
                if (std::abs(v) < simplex_tol::zero) v = 0.0;
            }
            t_(i, col) = 0.0;
        }
        const double fz = z_[col];
        if (fz != 0.0) {
            for (std::size_t j = 0; j < width_; ++j) z_[j] -= fz * t_(row, j);
            z_[col] = 0.0;
        }
        basis_[row] = col;
    }

    /// Minimum-ratio row for the entering column. Among rows tied at the
    /// minimum ratio the largest pivot element wins (smallest basic index
    /// under Bland's rule). Returns m_ when the column has no positive entry.
    std::size_t ratio_test(std::size_t enter, bool bland) const {
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = t_(i, enter);
            if (a > simplex_tol::pivot) min_ratio = std::min(min_ratio, std::max(0.0, t_(i, rhs_col())) / a);
        }
        if (!std::isfinite(min_ratio)) return m_;

        const double slack = 1e-12 * std::max(1.0, min_ratio);
        std::size_t leave = m_;
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = t_(i, enter);
            if (a <= simplex_tol::pivot || std::max(0.0, t_(i, rhs_col())) / a > min_ratio + slack) continue;
            if (leave == m_ || (bland ? basis_[i] < basis_[leave] : a > t_(leave, enter))) leave = i;
        }
        return leave;
    }

    LPStatus optimize(const std::vector<double>& cost, LPSolution& sol) {
        price(cost);
        const std::size_t stall_limit = 5 * (m_ + n_);
        std::size_t stalled = 0;
        bool bland = false;
        double best = z_[rhs_col()];

        while (true) {
            if (sol.iterations >= simplex_tol::iteration_cap) return LPStatus::iteration_limit;

            std::size_t enter = width_;
            double most_negative = -simplex_tol::optimality;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (!entering_allowed_[j] || z_[j] >= -simplex_tol::optimality) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (z_[j] < most_negative) {
                    most_negative = z_[j];
                    enter = j;
                }
            }
            if (enter == width_) return LPStatus::optimal;

            const std::size_t leave = ratio_test(enter, bland);
            if (leave == m_) return LPStatus::unbounded;

            pivot(leave, enter);
            ++sol.iterations;

            const double value = z_[rhs_col()];
            if (value > best + 1e-12 * std::max(1.0, std::abs(best))) {
                best = value;
                stalled = 0;
            } else if (!bland && ++stalled > stall_limit) {
                bland = true;
            }
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t col = n_;
            double biggest = simplex_tol::pivot;
            for (std::size_t j = 0; j < n_; ++j)
                if (std::abs(t_(i, j)) > biggest) {
                    biggest = std::abs(t_(i, j));
                    col = j;
                }
            if (col < n_) pivot(i, col);
            // otherwise the row is redundant and its artificial stays basic at zero
        }
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    RMatrix t_;
    std::vector<std::size_t> basis_;
    std::vector<double> z_;
    std::vector<bool> entering_allowed_;
};

inline void validate_lp(const LinearProgram& lp) {
    const std::size_t m = lp.num_rows();
    const std::size_t n = lp.num_vars();
    if (lp.rhs.size() != m) throw InvalidInput("rhs length does not match constraint rows");
    if (m > 0 && lp.constraints.cols() != n)
        throw InvalidInput("constraint columns do not match objective length");
    if (m > simplex_tol::max_rows || n > simplex_tol::max_vars)
        throw SizeLimitExceeded("LP exceeds 1e4 rows or 1e6 variables");
    if (static_cast<double>(m) * static_cast<double>(n + m + 1) > simplex_tol::max_tableau_entries)
        throw SizeLimitExceeded("dense tableau would be too large");
    for (double v : lp.objective)
        if (!std::isfinite(v)) throw InvalidInput("non-finite objective coefficient");
    for (double v : lp.rhs)
        if (!std::isfinite(v)) throw InvalidInput("non-finite right-hand side");
    for (double v : lp.constraints.data())
        if (!std::isfinite(v)) throw InvalidInput("non-finite constraint coefficient");
}

}  // namespace detail

inline LPSolution solve(const LinearProgram& lp) {
    detail::validate_lp(lp);
    detail::SimplexTableau tableau(lp);
    LPSolution sol = tableau.run(lp.objective);
    sol.objective_value = dot(lp.objective, sol.x);
    sol.max_residual = max_residual(lp, sol.x);
    return sol;
}

/// Recomputes A x - b and c.x from scratch for a reported optimum.
inline CertificateReport check_certificate(const LinearProgram& lp, const LPSolution& sol) {
    CertificateReport r;
    if (sol.x.size() != lp.num_vars()) return r;
    r.max_residual = max_residual(lp, sol.x);
    r.min_variable = sol.x.empty() ? 0.0 : *std::min_element(sol.x.begin(), sol.x.end());
    r.objective = dot(lp.objective, sol.x);
    r.objective_gap = std::abs(r.objective - sol.objective_value);
    r.residual_ok = r.max_residual <= simplex_tol::certificate_residual;
    r.nonnegativity_ok = r.min_variable >= simplex_tol::certificate_nonneg;
    r.objective_ok = r.objective_gap <= simplex_tol::certificate_objective;
    return r;
}

}  // namespace lhv
