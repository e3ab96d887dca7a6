#pragma once

// Deterministic local-hidden-variable strategies and their factorizable
// correlation matrices H(i, j) = gamma^{a_i + b_j}.

#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "lhv/errors.hpp"
#include "lhv/matrix.hpp"
#include "lhv/multiport.hpp"

namespace lhv {

/// Conjugation sent a strategy matrix outside the distinct set.
class OrbitMismatch : public Error {
public:
    using Error::Error;
};

/// Predetermined outcome (mod N) for each local setting of each party.
struct DeterministicStrategy {
    std::vector<int> alice;
    std::vector<int> bob;

    friend auto operator<=>(const DeterministicStrategy&, const DeterministicStrategy&) = default;
    friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// Factorizable matrix of a strategy, stored as exact exponents of gamma.
struct StrategyMatrix {
    int dimension = 0;
    DeterministicStrategy strategy;  // canonical representative
    Matrix<int> exponents;

    [[nodiscard]] CMatrix values() const {
        CMatrix out(exponents.rows(), exponents.cols());
        for (std::size_t i = 0; i < exponents.rows(); ++i)
            for (std::size_t j = 0; j < exponents.cols(); ++j)
                out(i, j) = root_of_unity(dimension, exponents(i, j));
        return out;
    }
};

inline constexpr double kStrategyEnumerationLimit = 1e7;

/// N^(sA + sB) as a double, for size guards.
inline double strategy_count(int n, std::size_t alice_settings, std::size_t bob_settings) {
    return std::pow(static_cast<double>(n), static_cast<double>(alice_settings + bob_settings));
}

/// All N^(sA+sB) strategies in lexicographic (alice, bob) order.
inline std::vector<DeterministicStrategy> enumerate_strategies(int n, std::size_t alice_settings,
                                                               std::size_t bob_settings) {
    require_dimension(n);
    if (alice_settings == 0 || bob_settings == 0)
        throw InvalidInput("each party needs at least one setting");
    if (strategy_count(n, alice_settings, bob_settings) > kStrategyEnumerationLimit)
        throw SizeLimitExceeded("N^(sA+sB) exceeds the enumeration limit of 1e7");

    const std::size_t width = alice_settings + bob_settings;
    const auto total = static_cast<std::size_t>(strategy_count(n, alice_settings, bob_settings));
    std::vector<DeterministicStrategy> out;
    out.reserve(total);

    std::vector<int> digits(width, 0);
    for (std::size_t count = 0; count < total; ++count) {
        out.push_back({std::vector<int>(digits.begin(), digits.begin() + alice_settings),
                       std::vector<int>(digits.begin() + alice_settings, digits.end())});
        for (std::size_t pos = width; pos-- > 0;) {
            if (++digits[pos] < n) break;
            digits[pos] = 0;
        }
    }
    return out;
}

/// Gauge-fixes Alice's first outcome to 0; the matrix is unchanged.
inline DeterministicStrategy canonicalize(const DeterministicStrategy& s, int n) {
    const int shift = s.alice.empty() ? 0 : s.alice.front();
    DeterministicStrategy c = s;
    for (int& a : c.alice) a = ((a - shift) % n + n) % n;
    for (int& b : c.bob) b = ((b + shift) % n + n) % n;
    return c;
}

inline StrategyMatrix strategy_matrix(const DeterministicStrategy& s, int n) {
    StrategyMatrix h{n, canonicalize(s, n), Matrix<int>(s.alice.size(), s.bob.size())};
    for (std::size_t i = 0; i < s.alice.size(); ++i)
        for (std::size_t j = 0; j < s.bob.size(); ++j)
            h.exponents(i, j) = (s.alice[i] + s.bob[j]) % n;
    return h;
}

/// Pairwise-distinct strategy matrices, ordered by canonical representative.
inline std::vector<StrategyMatrix> distinct_matrices(const std::vector<DeterministicStrategy>& strategies,
                                                     int n) {
    require_dimension(n);
    std::map<DeterministicStrategy, StrategyMatrix> unique;
    for (const auto& s : strategies) {
        for (int v : s.alice)
            if (v < 0 || v >= n) throw InvalidInput("strategy outcome out of range");
        for (int v : s.bob)
            if (v < 0 || v >= n) throw InvalidInput("strategy outcome out of range");
        auto canon = canonicalize(s, n);
        unique.try_emplace(canon, strategy_matrix(canon, n));
    }
    std::vector<StrategyMatrix> out;
    out.reserve(unique.size());
    for (auto& [key, h] : unique) out.push_back(std::move(h));
    return out;
}

/// U H U (U applied on both sides).
inline CMatrix conjugate(const CMatrix& h, const CMatrix& u) {
    if (h.rows() != 2 || h.cols() != 2 || u.rows() != 2 || u.cols() != 2)
        throw InvalidInput("conjugate: both matrices must be 2x2");
    return u * h * u;
}

inline CMatrix conjugate(const StrategyMatrix& h, const CMatrix& u) { return conjugate(h.values(), u); }

/// Reads an arbitrary complex matrix back as a strategy matrix, if every
/// entry is an N-th root of unity (within `tol`) and the exponents factorize.
inline bool as_strategy(const CMatrix& m, int n, DeterministicStrategy& out, double tol = 1e-9) {
    Matrix<int> e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double turns = std::arg(m(i, j)) * n / (2.0 * std::numbers::pi);
            const int k = ((static_cast<int>(std::lround(turns)) % n) + n) % n;
            if (std::abs(m(i, j) - root_of_unity(n, k)) > tol) return false;
            e(i, j) = k;
        }
    DeterministicStrategy s;
    s.alice.assign(m.rows(), 0);
    s.bob.assign(m.cols(), 0);
    for (std::size_t j = 0; j < m.cols(); ++j) s.bob[j] = e(0, j);
    for (std::size_t i = 0; i < m.rows(); ++i) s.alice[i] = ((e(i, 0) - s.bob[0]) % n + n) % n;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if ((s.alice[i] + s.bob[j]) % n != e(i, j)) return false;
    out = canonicalize(s, n);
    return true;
}

/// perm[n] = m such that U H_n U = H_m. Throws OrbitMismatch if the image is
/// not in `matrices` or the map is not an involution.
inline std::vector<std::size_t> orbit_map(const std::vector<StrategyMatrix>& matrices, const CMatrix& u) {
    std::map<DeterministicStrategy, std::size_t> index;
    for (std::size_t k = 0; k < matrices.size(); ++k) index.emplace(matrices[k].strategy, k);

    std::vector<std::size_t> perm(matrices.size());
    for (std::size_t k = 0; k < matrices.size(); ++k) {
        const int n = matrices[k].dimension;
        DeterministicStrategy image;
        if (!as_strategy(conjugate(matrices[k], u), n, image))
            throw OrbitMismatch("conjugate of matrix " + std::to_string(k) + " is not a strategy matrix");
        auto it = index.find(image);
        if (it == index.end())
            throw OrbitMismatch("conjugate of matrix " + std::to_string(k) + " is outside the distinct set");
        perm[k] = it->second;
    }
    for (std::size_t k = 0; k < perm.size(); ++k)
        if (perm[perm[k]] != k) throw OrbitMismatch("conjugation is not an involution on the distinct set");
    return perm;
}

}  // namespace lhv
