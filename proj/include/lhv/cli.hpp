#pragma once

// Command dispatch for the lhv-threshold tool. Kept in a header so tests can
// drive it in-process with string streams.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lhv/builtins.hpp"
#include "lhv/config_io.hpp"
#include "lhv/errors.hpp"
#include "lhv/proof_replay.hpp"
#include "lhv/scan.hpp"
#include "lhv/threshold.hpp"

namespace lhv::cli {

enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kInvalidInput = 2,
    kSolverFailure = 3,
};

namespace detail {

inline std::string format_strategy(const DeterministicStrategy& s) {
    std::ostringstream os;
    auto list = [&os](const std::vector<int>& v) {
        os << '(';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ')';
    };
    os << "alice=";
    list(s.alice);
    os << " bob=";
    list(s.bob);
    return os.str();
}

inline void print_threshold_text(std::ostream& out, const ThresholdResult& r) {
    out << std::setprecision(17);
    out << std::left << std::setw(12) << "method" << to_string(r.method) << '\n'
        << std::setw(12) << "dimension" << r.dimension << '\n'
        << std::setw(12) << "V_thr" << r.v_thr << '\n'
        << std::setw(12) << "F_thr" << r.f_thr << '\n'
        << std::setw(12) << "residual" << r.residual << '\n'
        << std::setw(12) << "iterations" << r.lp_iterations << '\n'
        << "weights:\n";
    for (const auto& w : reported_weights(r))
        out << "  " << std::setw(28) << format_strategy(w.strategy) << "p=" << w.p << '\n';
    out << std::right;
}

inline ThresholdMethod parse_method(const std::string& m) {
    return m == "prob" ? ThresholdMethod::probability : ThresholdMethod::correlation;
}

}  // namespace detail

/// Runs the tool. Results go to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local-hidden-variable noise thresholds for multiport Bell experiments", "lhv-threshold"};
    app.require_subcommand(1);

    auto* threshold = app.add_subcommand("threshold", "Critical noise fraction for one configuration");
    std::string config_path, builtin, method = "corr";
    bool json = false;
    auto* cfg_opt = threshold->add_option("--config", config_path, "Config file (JSON)");
    auto* builtin_opt = threshold->add_option("--builtin", builtin, "Built-in configuration")
                            ->check(CLI::IsMember(builtin_names()));
    cfg_opt->excludes(builtin_opt);
    threshold->add_option("--method", method, "LP formulation")->check(CLI::IsMember({"corr", "prob", "both"}));
    threshold->add_flag("--json", json, "Emit JSON");

    auto* scan_cmd = app.add_subcommand("scan", "Multi-start search for the phase settings maximizing F_thr");
    int dimension = 3;
    std::size_t restarts = 20;
    std::uint64_t seed = 7;
    unsigned threads = 1;
    std::string scan_method = "corr", csv_path;
    scan_cmd->add_option("--dimension", dimension, "Dimension N (2..6)")->required();
    scan_cmd->add_option("--restarts", restarts, "Number of restarts")->required();
    scan_cmd->add_option("--seed", seed, "Base seed")->required();
    scan_cmd->add_option("--method", scan_method, "LP formulation")->check(CLI::IsMember({"corr", "prob"}));
    scan_cmd->add_option("--csv", csv_path, "Write per-restart history as CSV");
    scan_cmd->add_option("--threads", threads, "Worker threads for restarts");

    auto* verify = app.add_subcommand("verify-proof", "Replay the analytic qutrit threshold derivation");
    bool verify_json = false;
    verify->add_flag("--json", verify_json, "Emit JSON");

    auto* probs = app.add_subcommand("probabilities", "Joint detection probabilities for one setting pair");
    std::string probs_config;
    std::size_t alice_index = 0, bob_index = 0;
    double noise = 0.0;
    probs->add_option("--config", probs_config, "Config file (JSON)")->required();
    probs->add_option("--alice", alice_index, "Alice setting index (zero-based)")->required();
    probs->add_option("--bob", bob_index, "Bob setting index (zero-based)")->required();
    probs->add_option("--noise", noise, "Noise fraction F in [0, 1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (*threshold) {
            if (config_path.empty() && builtin.empty()) {
                err << "error: threshold needs --config or --builtin\n";
                return kInvalidInput;
            }
            const ExperimentConfig config = config_path.empty() ? *builtin_config(builtin) : load_config(config_path);
            std::vector<ThresholdResult> results;
            if (method != "prob") results.push_back(correlation_threshold(config));
            if (method != "corr") results.push_back(probability_threshold(config));
            if (json) {
                if (results.size() == 1) {
                    out << to_json(results.front()).dump(2) << '\n';
                } else {
                    Json arr = Json::array();
                    for (const auto& r : results) arr.push_back(to_json(r));
                    out << arr.dump(2) << '\n';
                }
            } else {
                for (std::size_t i = 0; i < results.size(); ++i) {
                    if (i) out << '\n';
                    detail::print_threshold_text(out, results[i]);
                }
            }
            return kSuccess;
        }

        if (*scan_cmd) {
            const ScanResult result = scan(dimension, restarts, seed, detail::parse_method(scan_method), threads);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv) {
                    err << "error: cannot write '" << csv_path << "'\n";
                    return kInvalidInput;
                }
                write_scan_csv(csv, result);
            }
            out << std::setprecision(17);
            for (const auto& e : result.history) {
                out << "restart " << e.restart << ": ";
                if (e.ok) out << "F_thr = " << e.f_thr << '\n';
                else out << "failed (" << e.error << ")\n";
            }
            out << "best F_thr = " << result.best_f_thr << '\n'
                << "best config = " << to_json(result.best_config).dump() << '\n';
            return kSuccess;
        }

        if (*verify) {
            const ProofReport report = run_proof();
            if (verify_json) {
                out << to_json(report).dump(2) << '\n';
            } else {
                for (std::size_t i = 0; i < report.checks.size(); ++i) {
                    const auto& c = report.checks[i];
                    out << (c.passed ? "[PASS] " : "[FAIL] ") << i + 1 << ". " << c.name << ": " << c.detail << '\n';
                }
                out << std::setprecision(17) << "analytic V = " << report.analytic_v << ", LP V = " << report.lp_v
                    << (report.passed() ? " -> all checks passed" : " -> FAILED") << '\n';
            }
            return report.passed() ? kSuccess : kCheckFailed;
        }

        if (*probs) {
            const ExperimentConfig config = load_config(probs_config);
            const JointProbabilityTable t = joint_probabilities(config, alice_index, bob_index, noise);
            out << "P(a,b) for alice setting " << alice_index << ", bob setting " << bob_index << ", F = " << noise
                << '\n';
            out << std::setprecision(12) << std::fixed;
            out << "a\\b";
            for (int b = 0; b < t.dimension; ++b) out << std::setw(16) << b;
            out << '\n';
            for (int a = 0; a < t.dimension; ++a) {
                out << std::setw(3) << a;
                for (int b = 0; b < t.dimension; ++b) out << std::setw(16) << t.probs(a, b);
                out << '\n';
            }
            const Complex e = correlation_from_probabilities(t);
            out << std::defaultfloat << std::setprecision(17) << "E = " << e.real() << (e.imag() < 0 ? " - " : " + ")
                << std::abs(e.imag()) << "i\n";
            return kSuccess;
        }
    } catch (const SolverFailure& e) {
        err << "error: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kInvalidInput;
}

}  // namespace lhv::cli
