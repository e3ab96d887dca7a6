#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lhv/builtins.hpp"
#include "lhv/simplex.hpp"
#include "lhv/threshold.hpp"

namespace {

using lhv::LinearProgram;
using lhv::LPStatus;
using lhv::RMatrix;

LinearProgram make(std::vector<double> c, RMatrix a, std::vector<double> b) {
    return LinearProgram{std::move(c), std::move(a), std::move(b)};
}

TEST(Solve, SingleEqualityPicksObjectiveVertex) {
    const auto lp = make({1, 0}, RMatrix{{1, 1}}, {1});
    const auto sol = lhv::solve(lp);
    ASSERT_EQ(sol.status, LPStatus::optimal);
    EXPECT_NEAR(sol.objective_value, 1.0, 1e-12);
    EXPECT_NEAR(sol.x[0], 1.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 0.0, 1e-12);
}

TEST(Solve, ContradictoryEqualitiesAreInfeasible) {
    const auto sol = lhv::solve(make({1}, RMatrix{{1}, {1}}, {2, 3}));
    EXPECT_EQ(sol.status, LPStatus::infeasible);
    EXPECT_FALSE(sol.diagnostics.empty());
}

TEST(Solve, NegativeRightHandSideIsHandled) {
    // -x1 + x2 = -2 with x1 + x2 = 4 gives x = (3, 1).
    const auto sol = lhv::solve(make({0, 1}, RMatrix{{-1, 1}, {1, 1}}, {-2, 4}));
    ASSERT_EQ(sol.status, LPStatus::optimal);
    EXPECT_NEAR(sol.x[0], 3.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 1.0, 1e-12);
}

TEST(Solve, UnboundedDirection) {
    // x1 - x2 = 0, maximize x1.
    EXPECT_EQ(lhv::solve(make({1, 0}, RMatrix{{1, -1}}, {0})).status, LPStatus::unbounded);
}

TEST(Solve, RedundantRowsAreTolerated) {
    const auto sol = lhv::solve(make({1, 2, 0}, RMatrix{{1, 1, 1}, {2, 2, 2}, {1, 1, 1}}, {1, 2, 1}));
    ASSERT_EQ(sol.status, LPStatus::optimal);
    EXPECT_NEAR(sol.objective_value, 2.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 1.0, 1e-12);
    EXPECT_TRUE(lhv::check_certificate(lhv::LinearProgram{{1, 2, 0}, RMatrix{{1, 1, 1}, {2, 2, 2}, {1, 1, 1}}, {1, 2, 1}}, sol).passed());
}

TEST(Solve, NoRowsMeansOriginUnlessUnbounded) {
    auto lp = make({-1, 0}, RMatrix(0, 2), {});
    auto sol = lhv::solve(lp);
    ASSERT_EQ(sol.status, LPStatus::optimal);
    EXPECT_EQ(sol.x, (std::vector<double>{0, 0}));
    EXPECT_EQ(lhv::solve(make({1}, RMatrix(0, 1), {})).status, LPStatus::unbounded);
}

TEST(Solve, RejectsNonFiniteAndMalformedInput) {
    EXPECT_THROW(lhv::solve(make({std::nan("")}, RMatrix{{1}}, {1})), lhv::InvalidInput);
    EXPECT_THROW(lhv::solve(make({1}, RMatrix{{std::numeric_limits<double>::infinity()}}, {1})), lhv::InvalidInput);
    EXPECT_THROW(lhv::solve(make({1}, RMatrix{{1}}, {std::nan("")})), lhv::InvalidInput);
    EXPECT_THROW(lhv::solve(make({1, 1}, RMatrix{{1}}, {1})), lhv::InvalidInput);
    EXPECT_THROW(lhv::solve(make({1}, RMatrix{{1}}, {1, 2})), lhv::InvalidInput);
}

TEST(Solve, SizeGuard) {
    LinearProgram lp;
    lp.objective.assign(10, 0.0);
    lp.constraints = RMatrix(10'001, 10);
    lp.rhs.assign(10'001, 0.0);
    EXPECT_THROW(lhv::solve(lp), lhv::SizeLimitExceeded);
}

TEST(Solve, QutritCorrelationLp) {
    const auto built = lhv::build_correlation_lp(lhv::paper_qutrit_config());
    const auto sol = lhv::solve(built.lp);
    ASSERT_EQ(sol.status, LPStatus::optimal);
    EXPECT_NEAR(sol.objective_value, (6 * std::sqrt(3.0) - 9) / 2, 1e-9);
    const auto cert = lhv::check_certificate(built.lp, sol);
    EXPECT_TRUE(cert.passed()) << cert.max_residual;
}

TEST(Solve, RepeatRunsAreBitIdentical) {
    const auto built = lhv::build_correlation_lp(lhv::paper_qutrit_config());
    const auto a = lhv::solve(built.lp);
    const auto b = lhv::solve(built.lp);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Solve, RowScalingKeepsStatusAndObjective) {
    const auto built = lhv::build_correlation_lp(lhv::chsh_qubit_config());
    const auto base = lhv::solve(built.lp);
    for (std::size_t row = 0; row < built.lp.num_rows(); ++row) {
        auto scaled = built.lp;
        for (std::size_t c = 0; c < scaled.num_vars(); ++c) scaled.constraints(row, c) *= 1e3;
        scaled.rhs[row] *= 1e3;
        const auto sol = lhv::solve(scaled);
        ASSERT_EQ(sol.status, base.status) << "row " << row;
        EXPECT_NEAR(sol.objective_value, base.objective_value, 1e-7) << "row " << row;
    }
}

TEST(CheckCertificate, PerturbationBreaksResidual) {
    const auto built = lhv::build_correlation_lp(lhv::paper_qutrit_config());
    auto sol = lhv::solve(built.lp);
    ASSERT_TRUE(lhv::check_certificate(built.lp, sol).passed());
    std::size_t k = 0;
    while (sol.x[k] < 1e-6) ++k;
    sol.x[k] += 1e-3;
    const auto cert = lhv::check_certificate(built.lp, sol);
    EXPECT_FALSE(cert.residual_ok);
    EXPECT_GT(cert.max_residual, 1e-8);
    EXPECT_FALSE(cert.passed());
}

TEST(CheckCertificate, NegativeEntryAndObjectiveMismatch) {
    const auto lp = make({1, 0}, RMatrix{{1, 1}}, {1});
    lhv::LPSolution sol;
    sol.status = LPStatus::optimal;
    sol.x = {1.5, -0.5};
    sol.objective_value = 1.5;
    auto cert = lhv::check_certificate(lp, sol);
    EXPECT_TRUE(cert.residual_ok);
    EXPECT_FALSE(cert.nonnegativity_ok);
    sol.x = {1.0, 0.0};
    cert = lhv::check_certificate(lp, sol);
    EXPECT_FALSE(cert.objective_ok);
}

TEST(CheckCertificate, EmptyConstraintSet) {
    const auto lp = make({1, 2}, RMatrix(0, 2), {});
    lhv::LPSolution sol;
    sol.status = LPStatus::optimal;
    sol.x = {0.3, 4.0};
    sol.objective_value = 8.3;
    const auto cert = lhv::check_certificate(lp, sol);
    EXPECT_EQ(cert.max_residual, 0.0);
    EXPECT_TRUE(cert.passed());
}

TEST(Solve, SmallRandomFeasibleAgainstEnumeratedVertices) {
    // Oracle: for 2 rows and 4 columns every basic solution is enumerable.
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        RMatrix a(2, 4);
        std::vector<double> c(4), xstar(4);
        for (double& v : xstar) v = (u(gen) + 1) / 2;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 4; ++j) a(i, j) = u(gen);
        for (double& v : c) v = u(gen);
        // bounded: add a row sum x = s
        RMatrix a3(3, 4);
        std::vector<double> b(3, 0.0);
        for (std::size_t j = 0; j < 4; ++j) {
            a3(0, j) = a(0, j);
            a3(1, j) = a(1, j);
            a3(2, j) = 1.0;
        }
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j) b[i] += a3(i, j) * xstar[j];
        const auto lp = make(c, a3, b);

        double best = -std::numeric_limits<double>::infinity();
        for (int skip = 0; skip < 4; ++skip) {
            int cols[3], k = 0;
            for (int j = 0; j < 4; ++j)
                if (j != skip) cols[k++] = j;
            // Cramer's rule on the 3x3 basis.
            auto det3 = [](double m[3][3]) {
                return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            };
            double m[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) m[i][j] = a3(i, cols[j]);
            const double d = det3(m);
            if (std::abs(d) < 1e-9) continue;
            double x[4] = {0, 0, 0, 0};
            bool feasible = true;
            for (int j = 0; j < 3; ++j) {
                double mj[3][3];
                for (int r = 0; r < 3; ++r)
                    for (int s = 0; s < 3; ++s) mj[r][s] = s == j ? b[r] : m[r][s];
                x[cols[j]] = det3(mj) / d;
                if (x[cols[j]] < -1e-9) feasible = false;
            }
            if (feasible) best = std::max(best, c[0] * x[0] + c[1] * x[1] + c[2] * x[2] + c[3] * x[3]);
        }
        const auto sol = lhv::solve(lp);
        ASSERT_EQ(sol.status, LPStatus::optimal) << "trial " << trial;
        EXPECT_NEAR(sol.objective_value, best, 1e-8) << "trial " << trial;
    }
}

}  // namespace
