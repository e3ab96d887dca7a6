#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lhv/multiport.hpp"

namespace lhv {

/// Two qutrits through tritters. Alice's settings are listed as
/// (0,0,0) then (0,pi/3,-pi/3), so that Q = [[Q1, Q1*], [Q2, Q1]] with
/// Q1 = (2 sqrt3 + 1)/6 - i (2 - sqrt3)/6 and Q2 = -(1 + 2i)/3; in this order
/// Q commutes with the involution [[0, a^2], [a, 0]], a = exp(2 pi i / 3).
inline ExperimentConfig paper_qutrit_config() {
    constexpr double pi = std::numbers::pi;
    return ExperimentConfig{
        3,
        {PhaseVector{0.0, 0.0, 0.0}, PhaseVector{0.0, pi / 3, -pi / 3}},
        {PhaseVector{0.0, pi / 6, -pi / 6}, PhaseVector{0.0, -pi / 6, pi / 6}},
    };
}

/// Two qubits at the CHSH-optimal settings: E = cos(psi_0 - psi_1), giving
/// correlations (1, 1, 1, -1)/sqrt2.
inline ExperimentConfig chsh_qubit_config() {
    constexpr double pi = std::numbers::pi;
    return ExperimentConfig{
        2,
        {PhaseVector{0.0, 0.0}, PhaseVector{0.0, -pi / 2}},
        {PhaseVector{0.0, pi / 4}, PhaseVector{0.0, -pi / 4}},
    };
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"paper-qutrit", "chsh-qubit"};
    return names;
}

inline std::optional<ExperimentConfig> builtin_config(std::string_view name) {
    if (name == "paper-qutrit") return paper_qutrit_config();
    if (name == "chsh-qubit") return chsh_qubit_config();
    return std::nullopt;
}

}  // namespace lhv
