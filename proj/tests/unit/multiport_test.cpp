#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "lhv/builtins.hpp"
#include "lhv/multiport.hpp"

namespace {

using lhv::Complex;
using lhv::ExperimentConfig;
using lhv::PhaseVector;

constexpr double pi = std::numbers::pi;
const double sqrt3 = std::sqrt(3.0);
const Complex alpha = std::polar(1.0, 2 * pi / 3);
const Complex q1{(2 * sqrt3 + 1) / 6, -(2 - sqrt3) / 6};
const Complex q2 = -Complex(1, 2) / 3.0;

const PhaseVector phi1{0, pi / 3, -pi / 3};
const PhaseVector phi2{0, 0, 0};
const PhaseVector theta1{0, pi / 6, -pi / 6};
const PhaseVector theta2{0, -pi / 6, pi / 6};

ExperimentConfig single(const PhaseVector& a, const PhaseVector& b) {
    return ExperimentConfig{static_cast<int>(a.size()), {a}, {b}};
}

void expect_near(Complex got, Complex want, double tol) {
    EXPECT_NEAR(got.real(), want.real(), tol);
    EXPECT_NEAR(got.imag(), want.imag(), tol);
}

TEST(FourierMatrix, QutritEntries) {
    const auto t = lhv::fourier_matrix(3);
    expect_near(t(0, 0), 1 / sqrt3, 1e-15);
    expect_near(t(1, 1), alpha / sqrt3, 1e-15);
    EXPECT_NEAR(std::abs(t(1, 1) - Complex(-0.5, 0.8660254037844386) * 0.5773502691896258), 0.0, 1e-15);
}

TEST(FourierMatrix, QubitIsHadamard) {
    const auto t = lhv::fourier_matrix(2);
    const double h = 1 / std::sqrt(2.0);
    expect_near(t(0, 0), h, 1e-15);
    expect_near(t(0, 1), h, 1e-15);
    expect_near(t(1, 0), h, 1e-15);
    expect_near(t(1, 1), -h, 1e-15);
}

TEST(FourierMatrix, RejectsDegenerateDimension) {
    EXPECT_THROW(lhv::fourier_matrix(1), lhv::InvalidDimension);
    EXPECT_THROW(lhv::fourier_matrix(0), lhv::InvalidDimension);
    EXPECT_LE(lhv::unitarity_defect(lhv::fourier_matrix(7)), 1e-12);
}

TEST(ObservableUnitary, ZeroPhasesGiveFourierMatrix) {
    EXPECT_EQ(lhv::observable_unitary(phi2), lhv::fourier_matrix(3));
}

TEST(ObservableUnitary, PhaseMultipliesColumn) {
    const auto u = lhv::observable_unitary(phi1);
    expect_near(u(0, 1), std::polar(1.0, pi / 3) / sqrt3, 1e-15);
    for (std::size_t col = 0; col < 3; ++col) {
        double norm = 0;
        for (std::size_t row = 0; row < 3; ++row) norm += std::norm(u(row, col));
        EXPECT_NEAR(norm, 1.0, 1e-12);
    }
}

TEST(JointProbabilities, ZeroPhasesArePerfectlyCorrelated) {
    const auto t = lhv::joint_probabilities(single(phi2, phi2), 0, 0, 0.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_NEAR(t.probs(a, b), (a + b) % 3 == 0 ? 1.0 / 3 : 0.0, 1e-15);
}

TEST(JointProbabilities, FullNoiseIsUniform) {
    const auto t = lhv::joint_probabilities(single(phi1, theta2), 0, 0, 1.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_NEAR(t.probs(a, b), 1.0 / 9, 1e-15);
}

TEST(JointProbabilities, MatchesClosedFormAmplitude) {
    // P0(a,b) = N^-3 |sum_m gamma^{m(a+b)} exp(i(phi_m + theta_m))|^2
    const auto cfg = single(phi1, theta1);
    const auto t = lhv::joint_probabilities(cfg, 0, 0, 0.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            Complex s{};
            for (int m = 0; m < 3; ++m) s += lhv::root_of_unity(3, m * (a + b)) * std::polar(1.0, phi1[m] + theta1[m]);
            EXPECT_NEAR(t.probs(a, b), std::norm(s) / 27.0, 1e-14);
        }
}

TEST(JointProbabilities, RejectsBadNoiseAndIndices) {
    const auto cfg = single(phi1, theta1);
    EXPECT_THROW(lhv::joint_probabilities(cfg, 0, 0, -0.1), lhv::InvalidNoise);
    EXPECT_THROW(lhv::joint_probabilities(cfg, 0, 0, 1.5), lhv::InvalidNoise);
    EXPECT_THROW(lhv::joint_probabilities(cfg, 0, 0, std::nan("")), lhv::InvalidNoise);
    EXPECT_THROW(lhv::joint_probabilities(cfg, 1, 0, 0.0), lhv::InvalidInput);
}

TEST(CorrelationValue, ZeroPhasesGiveOne) {
    expect_near(lhv::correlation_value(single(phi2, phi2), 0, 0, 0.0), 1.0, 1e-15);
}

TEST(CorrelationValue, ClosedFormQutritValues) {
    // The cyclic sum gives Q2 for (phi1, theta1), Q1 for (phi2, theta1) and
    // (phi1, theta2), and Q1* for (phi2, theta2).
    expect_near(lhv::correlation_value(single(phi1, theta1), 0, 0, 0.0), q2, 1e-12);
    expect_near(lhv::correlation_value(single(phi2, theta1), 0, 0, 0.0), q1, 1e-12);
    expect_near(lhv::correlation_value(single(phi1, theta2), 0, 0, 0.0), q1, 1e-12);
    expect_near(lhv::correlation_value(single(phi2, theta2), 0, 0, 0.0), std::conj(q1), 1e-12);
}

TEST(CorrelationValue, ProbabilityRouteAgreesAtQutritSettings) {
    for (const auto& a : {phi1, phi2})
        for (const auto& b : {theta1, theta2}) {
            const auto cfg = single(a, b);
            expect_near(lhv::correlation_from_probabilities(lhv::joint_probabilities(cfg, 0, 0, 0.0)),
                        lhv::correlation_value(cfg, 0, 0, 0.0), 1e-12);
        }
}

TEST(CorrelationMatrix, BuiltinMatchesClosedFormMatrix) {
    const auto q = lhv::correlation_matrix(lhv::paper_qutrit_config(), 0.0).values;
    expect_near(q(0, 0), q1, 1e-12);
    expect_near(q(0, 1), std::conj(q1), 1e-12);
    expect_near(q(1, 0), q2, 1e-12);
    expect_near(q(1, 1), q1, 1e-12);
}

TEST(CorrelationMatrix, NoiseScalesLinearly) {
    const auto cfg = lhv::paper_qutrit_config();
    const auto q0 = lhv::correlation_matrix(cfg, 0.0).values;
    const auto half = lhv::correlation_matrix(cfg, 0.5).values;
    const auto full = lhv::correlation_matrix(cfg, 1.0).values;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_EQ(half(i, j), 0.5 * q0(i, j));
            EXPECT_EQ(full(i, j), Complex(0.0, 0.0));
        }
}

TEST(ExperimentConfig, ValidationErrors) {
    EXPECT_THROW((ExperimentConfig{1, {PhaseVector{0}}, {PhaseVector{0}}}.validate()), lhv::InvalidDimension);
    EXPECT_THROW((ExperimentConfig{3, {PhaseVector{0, 0}}, {phi1}}.validate()), lhv::InvalidDimension);
    EXPECT_THROW((ExperimentConfig{3, {}, {phi1}}.validate()), lhv::InvalidInput);
    EXPECT_THROW((ExperimentConfig{3, {PhaseVector{0, std::nan(""), 0}}, {phi1}}.validate()), lhv::InvalidInput);
    EXPECT_NO_THROW((ExperimentConfig{3, {PhaseVector{0, 7.5, -12.0}}, {phi1}}.validate()));
}

}  // namespace
