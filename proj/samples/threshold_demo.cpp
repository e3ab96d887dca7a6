// Minimal use of the library: the qutrit threshold by both LP formulations,
// next to the qubit (CHSH) baseline.

#include <iostream>

#include "lhv/builtins.hpp"
#include "lhv/threshold.hpp"

int main() {
    const auto qutrit = lhv::paper_qutrit_config();
    const auto qubit = lhv::chsh_qubit_config();

    const auto corr = lhv::correlation_threshold(qutrit);
    const auto prob = lhv::probability_threshold(qutrit);
    const auto chsh = lhv::correlation_threshold(qubit);

    std::cout.precision(12);
    std::cout << "qutrit F_thr (correlation LP): " << corr.f_thr << '\n'
              << "qutrit F_thr (probability LP): " << prob.f_thr << '\n'
              << "qubit  F_thr (CHSH settings):  " << chsh.f_thr << '\n';
}
