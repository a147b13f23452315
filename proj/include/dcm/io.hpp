#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/dynamics.hpp"
#include "dcm/error.hpp"
#include "dcm/estimators.hpp"
#include "dcm/topology.hpp"
#include "dcm/walk.hpp"

namespace dcm {

using json = nlohmann::ordered_json;

inline constexpr const char* version_string = "dcmlab 1.0.0";

/// Shortest round-trip decimal form; "NA" for NaN.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

/// RFC 4180 quoting: fields with commas, quotes or line breaks are quoted, quotes doubled.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

/// Provenance carried by every emitted file.
struct Provenance {
    std::string version = version_string;
    std::string command;
    std::uint64_t seed = 0;
    std::optional<double> alpha_effective;
    std::optional<std::size_t> k;
    std::string degree_digest;
    std::size_t n = 0;
    std::size_t ell = 0;
    std::string engine;
    std::string timestamp;  // empty unless requested

    json to_json() const {
        json j;
        j["version"] = version;
        j["command"] = command;
        j["seed"] = seed;
        if (alpha_effective) j["alpha_effective"] = *alpha_effective;
        if (k) j["k"] = *k;
        j["degree_digest"] = degree_digest;
        j["n"] = n;
        j["ell"] = ell;
        if (!engine.empty()) j["engine"] = engine;
        if (!timestamp.empty()) j["timestamp"] = timestamp;
        return j;
    }
};

inline Provenance make_provenance(const std::string& command, const DegreeSequence& seq, std::uint64_t seed) {
    Provenance p;
    p.command = command;
    p.seed = seed;
    p.degree_digest = seq.digest();
    p.n = seq.n();
    p.ell = seq.ell();
    return p;
}

/// "# key: value" comment lines ahead of the CSV header.
inline void write_csv_provenance(std::ostream& os, const Provenance& p) {
    const json j = p.to_json();
    for (const auto& [key, value] : j.items()) {
        os << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\r\n";
    }
}

inline json configuration_to_json(const Configuration& c) { return json(c.pairing()); }

/// Accepts a bare pairing array or an object with a "pairing" member.
inline Configuration configuration_from_json(const json& j) {
    const json* arr = &j;
    if (j.is_object()) {
        if (!j.contains("pairing")) throw validation_error("configuration JSON lacks a \"pairing\" array");
        arr = &j.at("pairing");
    }
    if (!arr->is_array()) throw validation_error("configuration JSON must be an array of half-edge indices");
    std::vector<half_edge> pairing;
    pairing.reserve(arr->size());
    for (const auto& v : *arr) {
        if (!v.is_number_unsigned()) throw validation_error("configuration entries must be non-negative integers");
        pairing.push_back(v.get<half_edge>());
    }
    return Configuration(std::move(pairing));
}

inline json configuration_document(const Configuration& c, const Provenance& p) {
    json j;
    j["provenance"] = p.to_json();
    j["pairing"] = configuration_to_json(c);
    return j;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw validation_error(path + ": " + e.what());
    }
}

inline DegreeSequence read_degree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    return load_degrees(in);
}

/// One JSON object per line: provenance first, then {"t": t, "R_t": [...]}.
inline void write_trace_jsonl(std::ostream& os, const RewiringTrace& trace, const Provenance& p) {
    os << json{{"provenance", p.to_json()}}.dump() << '\n';
    for (std::size_t t = 1; t <= trace.steps(); ++t) {
        json line;
        line["t"] = t;
        line["R_t"] = trace.per_step[t - 1];
        os << line.dump() << '\n';
    }
}

/// One line per time: {"t", "X_t", "tau_if_hit"}; tau_if_hit stays null until the walk is stopped.
inline void write_trajectory_jsonl(std::ostream& os, const JointTrajectory& traj, const Provenance& p) {
    os << json{{"provenance", p.to_json()}}.dump() << '\n';
    for (std::size_t t = 0; t < traj.positions.size(); ++t) {
        json line;
        line["t"] = t;
        line["X_t"] = traj.positions[t];
        if (traj.tau && *traj.tau <= t) {
            line["tau_if_hit"] = *traj.tau;
        } else {
            line["tau_if_hit"] = nullptr;
        }
        os << line.dump() << '\n';
    }
}

inline const std::vector<std::string>& result_csv_header() {
    static const std::vector<std::string> h{"t",        "tv_plugin",   "tv_plugin_se", "tv_struct",   "tau_tail",
                                            "tau_tail_se", "tau_theory", "tv_stopped",   "tv_unstopped"};
    return h;
}

inline void write_result_csv(std::ostream& os, const ResultTable& table, const Provenance& p) {
    write_csv_provenance(os, p);
    write_csv_row(os, result_csv_header());
    for (const auto& r : table.rows) {
        write_csv_row(os, {std::to_string(r.t), format_optional(r.tv_plugin),
                           r.tv_plugin ? format_number(r.tv_plugin_se) : "NA", format_number(r.tv_struct),
                           format_number(r.tau_tail), format_number(r.tau_tail_se), format_number(r.tau_theory),
                           format_optional(r.tv_stopped), format_optional(r.tv_unstopped)});
    }
}

/// Scalar sidecar; t_mix_hat is an integer, or the string "> horizon" when the curve never crossed.
inline json result_sidecar(const ResultTable& table, const Provenance& p) {
    json j;
    j["provenance"] = p.to_json();
    if (table.t_mix_hat) {
        j["t_mix_hat"] = *table.t_mix_hat;
    } else {
        j["t_mix_hat"] = "> " + std::to_string(table.horizon);
    }
    j["t_mix_method"] = table.t_mix_method;
    j["t_mix_theory"] = table.t_mix_theory;
    j["theory_degenerate"] = table.theory_degenerate;
    j["alpha_requested"] = table.alpha_requested;
    j["alpha_effective"] = table.alpha_effective;
    j["alpha_adjusted"] = table.alpha_adjusted;
    j["k"] = table.k;
    j["epsilon"] = table.epsilon;
    j["horizon"] = table.horizon;
    j["replicas"] = table.replicas;
    j["seed"] = table.seed;
    j["repetition"] = table.repetition;
    j["x0"] = table.x0;
    j["engine"] = table.engine;
    json beyond = json::array();
    json methods = json::array();
    json lower = json::array();
    json upper = json::array();
    for (const auto& r : table.rows) {
        if (r.beyond_log_n) beyond.push_back(r.t);
        methods.push_back({{"t", r.t}, {"stopped", r.stopped_method}, {"unstopped", r.unstopped_method}});
        lower.push_back(r.tv_lower);
        upper.push_back(r.tv_upper);
    }
    j["rows_beyond_log_n"] = beyond;
    j["conditional_methods"] = methods;
    j["tv_lower"] = lower;
    j["tv_upper"] = upper;
    j["warnings"] = table.warnings;
    return j;
}

/// Full table as JSON (used for --format json).
inline json result_json(const ResultTable& table, const Provenance& p) {
    json j = result_sidecar(table, p);
    json rows = json::array();
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    for (const auto& r : table.rows) {
        rows.push_back({{"t", r.t},
                        {"tv_plugin", opt(r.tv_plugin)},
                        {"tv_plugin_se", r.tv_plugin ? json(r.tv_plugin_se) : json(nullptr)},
                        {"tv_struct", r.tv_struct},
                        {"tau_tail", r.tau_tail},
                        {"tau_tail_se", r.tau_tail_se},
                        {"tau_theory", r.tau_theory},
                        {"tv_stopped", opt(r.tv_stopped)},
                        {"tv_unstopped", opt(r.tv_unstopped)}});
    }
    j["rows"] = rows;
    return j;
}

inline void write_topology_csv(std::ostream& os, const std::vector<TopologyRow>& rows, const Provenance& p) {
    write_csv_provenance(os, p);
    write_csv_row(os, {"t", "mean_ball_size", "nu_power_prediction", "tree_fraction", "good_density"});
    for (const auto& r : rows) {
        write_csv_row(os, {std::to_string(r.t), format_number(r.mean_ball_size), format_number(r.nu_power_prediction),
                           format_number(r.tree_fraction), format_number(r.good_density)});
    }
}

/*
 * Exact reference values for one tiny instance. Any of the value arrays may
 * be empty when the corresponding oracle was not run.
 */
struct OracleFixture {
    std::vector<std::uint32_t> degrees;
    std::vector<half_edge> eta;
    half_edge x0 = 0;
    std::size_t k = 2;
    std::size_t t = 0;
    std::vector<std::vector<double>> distributions;  // law of X_s, s = 0..t
    std::vector<double> tv;                          // exact TV, s = 0..t
    std::vector<double> tau_tail;                    // P(tau > s), s = 0..t
    double tolerance = 1e-12;
};

inline json fixture_to_json(const OracleFixture& f) {
    json j;
    j["seq"] = f.degrees;
    j["eta"] = f.eta;
    j["x0"] = f.x0;
    j["k"] = f.k;
    j["t"] = f.t;
    j["tolerance"] = f.tolerance;
    if (!f.distributions.empty()) j["distributions"] = f.distributions;
    if (!f.tv.empty()) j["tv"] = f.tv;
    if (!f.tau_tail.empty()) j["tau_tail"] = f.tau_tail;
    return j;
}

inline OracleFixture fixture_from_json(const json& j) {
    try {
        OracleFixture f;
        f.degrees = j.at("seq").get<std::vector<std::uint32_t>>();
        f.eta = j.at("eta").get<std::vector<half_edge>>();
        f.x0 = j.at("x0").get<half_edge>();
        f.k = j.at("k").get<std::size_t>();
        f.t = j.at("t").get<std::size_t>();
        f.tolerance = j.value("tolerance", 1e-12);
        if (j.contains("distributions")) f.distributions = j["distributions"].get<std::vector<std::vector<double>>>();
        if (j.contains("tv")) f.tv = j["tv"].get<std::vector<double>>();
        if (j.contains("tau_tail")) f.tau_tail = j["tau_tail"].get<std::vector<double>>();
        return f;
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed oracle fixture: ") + e.what());
    }
}

inline OracleFixture load_fixture(const std::string& path) { return fixture_from_json(read_json_file(path)); }

/// Output sink: a file when a path is given, standard output otherwise.
class OutputFile {
public:
    explicit OutputFile(const std::string& path) : path_(path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw io_error("cannot open " + path + " for writing");
        }
    }

    std::ostream& stream() { return path_.empty() ? std::cout : file_; }

    void close() {
        if (path_.empty()) {
            std::cout.flush();
            return;
        }
        file_.close();
        if (!file_) throw io_error("failed writing " + path_);
    }

private:
    std::string path_;
    std::ofstream file_;
};

/// Sidecar path: "run.csv" -> "run.json"; other names get ".json" appended.
inline std::string sidecar_path(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot) + ".json";
    return path + ".json";
}

}  // namespace dcm
