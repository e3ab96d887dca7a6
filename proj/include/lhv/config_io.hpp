#pragma once

// Config file parsing and result serialization.
//
// Config files are JSON:
//   {"dimension": 3,
//    "alice": [["0", "pi/3", "-pi/3"], ["0", "0", "0"]],
//    "bob":   [["0", "pi/6", "-pi/6"], ["0", "-pi/6", "pi/6"]]}
// Each phase is a JSON number (radians) or a string holding a phase
// expression (see phase_expr.hpp).

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lhv/errors.hpp"
#include "lhv/multiport.hpp"
#include "lhv/phase_expr.hpp"
#include "lhv/proof_replay.hpp"
#include "lhv/scan.hpp"
#include "lhv/threshold.hpp"

namespace lhv {

using Json = nlohmann::json;

/// Weights at or below this probability are left out of serialized results.
inline constexpr double kReportedWeightFloor = 1e-12;

namespace detail {

struct LineColumn {
    std::size_t line = 1;
    std::size_t column = 1;
};

inline LineColumn line_column(std::string_view text, std::size_t offset) {
    LineColumn lc;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++lc.line;
            lc.column = 1;
        } else {
            ++lc.column;
        }
    }
    return lc;
}

inline std::string where(std::string_view text, std::size_t offset) {
    const auto lc = line_column(text, offset);
    return "line " + std::to_string(lc.line) + ", column " + std::to_string(lc.column);
}

inline double parse_phase_entry(const Json& entry, const std::string& path, std::string_view source) {
    if (entry.is_number()) {
        const double v = entry.get<double>();
        if (!std::isfinite(v)) throw ParseError(path + ": phase is not finite", 0);
        return v;
    }
    if (!entry.is_string()) throw ParseError(path + ": phase must be a number or an expression string", 0);
    const auto text = entry.get<std::string>();
    try {
        return parse_phase_expr(text);
    } catch (const ParseError& e) {
        // Anchor the fault in the file when the literal can be found verbatim.
        std::string anchor;
        const auto at = source.find('"' + text + '"');
        if (at != std::string_view::npos) anchor = " (" + where(source, at + 1 + e.offset()) + ")";
        throw ParseError(path + ": \"" + text + "\": " + e.what() + anchor, e.offset());
    }
}

inline std::vector<PhaseVector> parse_side(const Json& doc, const char* key, std::string_view source) {
    if (!doc.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"", 0);
    const Json& side = doc.at(key);
    if (!side.is_array() || side.empty())
        throw ParseError(std::string("\"") + key + "\" must be a non-empty array of phase lists", 0);
    std::vector<PhaseVector> out;
    for (std::size_t s = 0; s < side.size(); ++s) {
        const std::string path = std::string(key) + "[" + std::to_string(s) + "]";
        if (!side[s].is_array()) throw ParseError(path + " must be an array of phases", 0);
        std::vector<double> phases;
        for (std::size_t m = 0; m < side[s].size(); ++m)
            phases.push_back(parse_phase_entry(side[s][m], path + "[" + std::to_string(m) + "]", source));
        out.emplace_back(std::move(phases));
    }
    return out;
}

}  // namespace detail

/// Parses config JSON text. Every failure is a ParseError or one of the
/// config validation errors (InvalidDimension, InvalidInput).
inline ExperimentConfig parse_config(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        const std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
        throw ParseError("invalid JSON at " + detail::where(text, at), at);
    }
    if (!doc.is_object()) throw ParseError("config must be a JSON object", 0);
    if (!doc.contains("dimension") || !doc.at("dimension").is_number_integer())
        throw ParseError("\"dimension\" must be an integer", 0);

    ExperimentConfig config;
    config.dimension = doc.at("dimension").get<int>();
    config.alice = detail::parse_side(doc, "alice", text);
    config.bob = detail::parse_side(doc, "bob", text);
    config.validate();
    return config;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.offset());
    }
}

/// Phases written back as plain numbers.
inline Json to_json(const ExperimentConfig& config) {
    auto side = [](const std::vector<PhaseVector>& s) {
        Json arr = Json::array();
        for (const auto& pv : s) arr.push_back(pv.phases);
        return arr;
    };
    return Json{{"dimension", config.dimension}, {"alice", side(config.alice)}, {"bob", side(config.bob)}};
}

/// Weights with p > 1e-12, descending by p, ties by strategy.
inline std::vector<WeightedStrategy> reported_weights(const ThresholdResult& r) {
    std::vector<WeightedStrategy> w;
    for (const auto& ws : r.weights)
        if (ws.p > kReportedWeightFloor) w.push_back(ws);
    std::sort(w.begin(), w.end(), [](const WeightedStrategy& a, const WeightedStrategy& b) {
        if (a.p != b.p) return a.p > b.p;
        return a.strategy < b.strategy;
    });
    return w;
}

inline Json to_json(const ThresholdResult& r) {
    Json weights = Json::array();
    for (const auto& w : reported_weights(r))
        weights.push_back({{"alice", w.strategy.alice}, {"bob", w.strategy.bob}, {"p", w.p}});
    return Json{{"method", to_string(r.method)}, {"dimension", r.dimension}, {"V_thr", r.v_thr},
                {"F_thr", r.f_thr},          {"weights", weights},       {"residual", r.residual},
                {"iterations", r.lp_iterations}};
}

inline Json to_json(const ProofReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json item{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
        item["deviation"] = c.deviation ? Json(*c.deviation) : Json(nullptr);
        checks.push_back(std::move(item));
    }
    auto finite_or_null = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    return Json{{"passed", report.passed()},
                {"analytic_V", finite_or_null(report.analytic_v)},
                {"lp_V", finite_or_null(report.lp_v)},
                {"checks", checks}};
}

/// CSV with columns restart,seed,F_thr,best_so_far; failed restarts carry an
/// empty F_thr and repeat the previous best.
inline void write_scan_csv(std::ostream& out, const ScanResult& scan) {
    out << "restart,seed,F_thr,best_so_far\n";
    out.precision(17);
    bool any = false;
    double best = 0.0;
    for (const auto& e : scan.history) {
        if (e.ok && (!any || e.f_thr > best)) {
            best = e.f_thr;
            any = true;
        }
        out << e.restart << ',' << e.seed << ',';
        if (e.ok) out << e.f_thr;
        out << ',';
        if (any) out << best;
        out << '\n';
    }
}

}  // namespace lhv
