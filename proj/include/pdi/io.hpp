#pragma once

/// @file io.hpp
/// @brief JSON reports, JSON-lines witness streams and CSV traces.
///
/// Every artifact carries the tool name, version and the effective config.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pdi/gamma.hpp"
#include "pdi/kernel.hpp"
#include "pdi/min_sum.hpp"
#include "pdi/params.hpp"
#include "pdi/sieve.hpp"
#include "pdi/version.hpp"

namespace pdi {

using json = nlohmann::ordered_json;

inline json artifact_stamp(const json& config) {
    return json{{"tool", tool_name}, {"version", tool_version}, {"config", config}};
}

inline json to_json(const RationalExponent& e) { return json{{"rational", e.str()}, {"value", e.value()}}; }

inline json to_json(const TheoremParams& p) {
    return json{{"c", p.c},
                {"N", p.N},
                {"A", p.A},
                {"s", p.s},
                {"X", p.X},
                {"tau", p.tau},
                {"tau_exponent", {{"rational", tau_exponent_base.str() + " - c"}, {"value", tau_exponent_base.value() - p.c}}},
                {"vartheta", p.vartheta},
                {"K", p.K},
                {"D", p.D},
                {"D_exponent", to_json(D_exponent)},
                {"eta", p.eta},
                {"beta", p.beta},
                {"z", p.z},
                {"h", p.h},
                {"beta_exceeds_one_33rd", p.beta_exceeds_one_33rd()}};
}

inline json to_json(const SieveQualityScan& s) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({{"s", p.s}, {"objective", p.objective}});
    return json{{"coefficient", s.coefficient}, {"all_negative", s.all_negative}, {"best_s", s.best_s},
                {"best_objective", s.best_objective}, {"best_beta", s.best_beta}, {"best_h", s.best_h},
                {"points", pts}};
}

inline json to_json(const RoughnessVerdict& v) {
    json j{{"n", v.n}, {"omega", v.omega}, {"omega_distinct", v.omega_distinct}};
    j["least_odd_prime_factor"] = v.least_odd_prime_factor ? json(*v.least_odd_prime_factor) : json(nullptr);
    j["coprime_to_Pz"] = v.is_coprime_to_Pz;
    return j;
}

inline json to_json(const Witness& w) {
    json shifted = json::array();
    for (const auto& v : w.shifted) shifted.push_back(to_json(v));
    return json{{"p1", w.p[0]},           {"p2", w.p[1]},         {"p3", w.p[2]},
                {"p4", w.p[3]},           {"form_value", w.form_value}, {"distance", w.distance},
                {"multiplicity", w.multiplicity}, {"shifted", shifted}};
}

inline json to_json(const SearchVolume& v) {
    return json{{"primes", v.primes}, {"admissible", v.admissible}, {"left_pairs", v.left_pairs},
                {"right_pairs", v.right_pairs}, {"window_probes", v.window_probes}};
}

inline json to_json(const FourierResult& f) {
    auto c = [](cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; };
    return json{{"value", c(f.value)},
                {"near", c(f.regions.near)},
                {"intermediate", c(f.regions.intermediate)},
                {"far", c(f.regions.far)},
                {"tail_bound", f.tail_bound},
                {"step", f.step},
                {"points", f.points}};
}

inline json to_json(const Prediction& p) {
    return json{{"coefficient", p.coefficient}, {"W", p.W}, {"value", p.value}, {"negative", p.negative}};
}

inline json to_json(const GammaReport& g) {
    json j{{"gamma_direct", g.gamma_direct}, {"gamma_smoothed", g.gamma_smoothed}, {"gamma1", g.gamma1},
           {"gamma5", g.gamma5},             {"gamma0", g.gamma0},                 {"B", g.B},
           {"B_error", g.B_error},           {"G_plus", g.G_plus},                 {"G_minus", g.G_minus},
           {"prediction", to_json(g.prediction)}};
    if (g.fourier) j["gamma1_fourier"] = to_json(*g.fourier);
    return j;
}

inline json to_json(const MinSumResult& r) {
    return json{{"X", r.X},         {"c", r.c},         {"pairs", r.pairs},
                {"near_count", r.near_count}, {"lower", r.lower}, {"upper", r.upper},
                {"reference", r.reference},   {"upper_ratio", r.upper_ratio()}};
}

// ---------------------------------------------------------------------------
// JSON lines

/// One compact JSON object per line.
inline void write_json_line(std::ostream& os, const json& j) { os << j.dump() << '\n'; }

inline void write_witness_stream(std::ostream& os, const json& config, const std::vector<Witness>& ws,
                                 const json& summary) {
    json head = artifact_stamp(config);
    head["type"] = "header";
    write_json_line(os, head);
    for (const auto& w : ws) {
        json line = to_json(w);
        line["type"] = "witness";
        write_json_line(os, line);
    }
    json tail = summary;
    tail["type"] = "summary";
    write_json_line(os, tail);
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest-exact decimal for a double.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV with `# key: value` comment lines carrying the stamp and config.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const json& config, std::vector<std::string> columns)
        : os_(os), width_(columns.size()) {
        os_ << "# tool: " << tool_name << '\n' << "# version: " << tool_version << '\n';
        os_ << "# config: " << config.dump() << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
        os_ << '\n';
    }

    void row(const std::vector<double>& values) {
        require(values.size() == width_, "CsvWriter: row width mismatch");
        for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_number(values[i]);
        os_ << '\n';
        ++rows_;
    }

    std::size_t rows() const { return rows_; }

private:
    std::ostream& os_;
    std::size_t width_;
    std::size_t rows_ = 0;
};

/// d, its factorization as "3*5*7", lambda^+(d), lambda^-(d) over the union
/// of both tables.
inline void write_weights_csv(std::ostream& os, const json& config, const RosserWeights& plus,
                              const RosserWeights& minus) {
    os << "# tool: " << tool_name << '\n' << "# version: " << tool_version << '\n';
    os << "# config: " << config.dump() << '\n';
    os << "d,factorization,lambda_plus,lambda_minus\n";
    std::vector<const WeightEntry*> all;
    for (const auto& e : plus.entries()) all.push_back(&e);
    for (const auto& e : minus.entries())
        if (plus.lambda(e.d) == 0) all.push_back(&e);
    std::sort(all.begin(), all.end(), [](auto a, auto b) { return a->d < b->d; });
    for (const auto* e : all) {
        std::string f;
        for (auto it = e->primes.rbegin(); it != e->primes.rend(); ++it) f += (f.empty() ? "" : "*") + std::to_string(*it);
        if (f.empty()) f = "1";
        os << e->d << ',' << f << ',' << plus.lambda(e->d) << ',' << minus.lambda(e->d) << '\n';
    }
}

} // namespace pdi
