#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/dynamics.hpp"
#include "dcm/error.hpp"
#include "dcm/estimators.hpp"
#include "dcm/exact_oracle.hpp"
#include "dcm/io.hpp"
#include "dcm/topology.hpp"
#include "dcm/walk.hpp"

namespace dcm {

inline const std::vector<std::string>& run_commands() {
    static const std::vector<std::string> c{"generate", "dynamics", "walk", "tau", "mixing", "oracle", "topology"};
    return c;
}

/// Everything one invocation needs. Mirrors the command-line flags and the --config JSON document.
struct RunConfig {
    std::string command;
    std::optional<std::pair<std::size_t, std::uint32_t>> regular;  // n, d
    std::string degrees_path;
    std::optional<double> alpha;
    std::optional<std::size_t> k;
    double epsilon = 0.1;
    std::size_t t = 0;        // steps (dynamics, walk, oracle) or largest radius (topology)
    std::size_t horizon = 0;  // 0: ceil(3 * theory mixing time)
    std::uint64_t replicas = 10'000;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::string engine = "auto";
    std::size_t repetitions = 1;
    std::string output;  // empty: standard output
    std::string format = "csv";
    std::string eta_path;
    std::optional<half_edge> x0;
    std::size_t samples = 10'000;
    std::size_t segments = 2;
    bool timestamp = false;
};

inline constexpr double default_alpha = 0.05;

inline RunConfig run_config_from_json(const json& j) {
    static const std::set<std::string> known{"command",  "regular",     "degrees", "alpha",   "k",       "epsilon",
                                             "t",        "horizon",     "replicas", "seed",   "threads", "engine",
                                             "repetitions", "output",   "format",  "eta",     "x0",      "samples",
                                             "segments", "timestamp"};
    if (!j.is_object()) throw validation_error("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw validation_error("config: unknown key \"" + key + "\"");
    }
    RunConfig c;
    try {
        c.command = j.at("command").get<std::string>();
        if (j.contains("regular")) {
            const auto r = j["regular"].get<std::vector<std::uint64_t>>();
            if (r.size() != 2) throw validation_error("config: \"regular\" must be [n, d]");
            c.regular = std::pair{static_cast<std::size_t>(r[0]), static_cast<std::uint32_t>(r[1])};
        }
        c.degrees_path = j.value("degrees", "");
        if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
        if (j.contains("k")) c.k = j["k"].get<std::size_t>();
        c.epsilon = j.value("epsilon", c.epsilon);
        c.t = j.value("t", c.t);
        c.horizon = j.value("horizon", c.horizon);
        c.replicas = j.value("replicas", c.replicas);
        c.seed = j.value("seed", c.seed);
        c.threads = j.value("threads", c.threads);
        c.engine = j.value("engine", c.engine);
        c.repetitions = j.value("repetitions", c.repetitions);
        c.output = j.value("output", c.output);
        c.format = j.value("format", c.format);
        c.eta_path = j.value("eta", c.eta_path);
        if (j.contains("x0")) c.x0 = j["x0"].get<half_edge>();
        c.samples = j.value("samples", c.samples);
        c.segments = j.value("segments", c.segments);
        c.timestamp = j.value("timestamp", c.timestamp);
    } catch (const json::exception& e) {
        throw validation_error(std::string("config: ") + e.what());
    }
    return c;
}

inline Engine parse_engine(const std::string& s) {
    if (s == "auto") return Engine::automatic;
    if (s == "full") return Engine::full;
    if (s == "local") return Engine::local;
    throw validation_error("engine must be auto, full or local (got \"" + s + "\")");
}

/// Checks that do not need the degree sequence; run before any computation.
inline void validate_run_config(const RunConfig& c) {
    bool known = false;
    for (const auto& name : run_commands()) known = known || name == c.command;
    if (!known) throw validation_error("unknown command \"" + c.command + "\"");
    if (c.regular.has_value() == !c.degrees_path.empty()) {
        throw validation_error("give exactly one of --regular n d and --degrees FILE");
    }
    if (c.alpha && (!(*c.alpha > 0.0) || *c.alpha > 1.0)) {
        throw validation_error("alpha = " + std::to_string(*c.alpha) + " must lie in (0, 1]");
    }
    if (!(c.epsilon > 0.0) || !(c.epsilon < 1.0)) {
        throw validation_error("epsilon = " + std::to_string(c.epsilon) + " must lie in (0, 1)");
    }
    if (c.alpha && c.k) throw validation_error("give at most one of --alpha and --k");
    if (c.format != "csv" && c.format != "json") throw validation_error("format must be csv or json");
    if (c.replicas == 0) throw validation_error("replicas must be at least 1");
    if (c.repetitions == 0) throw validation_error("repetitions must be at least 1");
    if (c.samples == 0) throw validation_error("samples must be at least 1");
    parse_engine(c.engine);
}

namespace detail {

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string repetition_path(const std::string& path, std::size_t rep, std::size_t total) {
    if (total == 1 || path.empty()) return path;
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of("/\\");
    const std::string tag = "_rep" + std::to_string(rep);
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        return path.substr(0, dot) + tag + path.substr(dot);
    }
    return path + tag;
}

class Runner {
public:
    Runner(const RunConfig& c, std::ostream& log) : c_(c), log_(log) {
        seq_ = c.regular ? make_regular(c.regular->first, c.regular->second) : read_degree_file(c.degrees_path);
    }

    void dispatch() {
        if (c_.command == "generate") return generate();
        if (c_.command == "dynamics") return dynamics();
        if (c_.command == "walk") return walk();
        if (c_.command == "tau" || c_.command == "mixing") return experiment();
        if (c_.command == "oracle") return oracle();
        if (c_.command == "topology") return topology();
    }

private:
    RewiringRate rate() const {
        if (c_.k) {
            check_k(*c_.k, seq_.m());
            return {*c_.k, static_cast<double>(*c_.k) / static_cast<double>(seq_.m()), false};
        }
        return alpha_to_k(seq_.m(), c_.alpha.value_or(default_alpha));
    }

    Provenance provenance(std::optional<RewiringRate> r = std::nullopt) const {
        auto p = make_provenance(c_.command, seq_, c_.seed);
        if (r) {
            p.alpha_effective = r->effective_alpha;
            p.k = r->k;
        }
        if (c_.timestamp) p.timestamp = utc_timestamp();
        return p;
    }

    ExperimentSpec base_spec() const {
        ExperimentSpec s;
        s.seq = seq_;
        if (c_.k) {
            s.k = c_.k;
        } else {
            s.alpha = c_.alpha.value_or(default_alpha);
        }
        s.epsilon = c_.epsilon;
        s.horizon = c_.horizon;
        s.replicas = c_.replicas;
        s.master_seed = c_.seed;
        s.threads = c_.threads;
        s.engine = parse_engine(c_.engine);
        if (!c_.eta_path.empty()) s.eta = configuration_from_json(read_json_file(c_.eta_path));
        s.x0 = c_.x0;
        return s;
    }

    void report_rate(const RewiringRate& r) const {
        log_ << "k = " << r.k << ", effective alpha = " << format_number(r.effective_alpha);
        if (r.adjusted) log_ << " (adjusted from the requested alpha)";
        log_ << '\n';
    }

    void generate() {
        auto gen = make_stream(c_.seed, 0, stream_purpose::initial_condition);
        const auto c = sample_configuration(seq_, gen);
        const auto stats = multigraph_stats(c, seq_);
        log_ << "self-loops = " << stats.self_loops << ", multi-edge excess = " << stats.multi_edge_excess << '\n';
        OutputFile out(c_.output);
        if (c_.format == "json") {
            auto doc = configuration_document(c, provenance());
            doc["self_loops"] = stats.self_loops;
            doc["multi_edge_excess"] = stats.multi_edge_excess;
            out.stream() << doc.dump() << '\n';
        } else {
            write_csv_provenance(out.stream(), provenance());
            write_csv_row(out.stream(), {"half_edge", "partner", "vertex"});
            for (half_edge x = 0; x < c.ell(); ++x) {
                write_csv_row(out.stream(),
                              {std::to_string(x), std::to_string(c[x]), std::to_string(seq_.owner(x))});
            }
        }
        out.close();
    }

    InitialCondition initial_condition() const {
        auto spec = base_spec();
        return draw_initial_condition(spec);
    }

    void dynamics() {
        const auto r = rate();
        report_rate(r);
        const auto ic = initial_condition();
        auto gen = make_stream(c_.seed, 0);
        const std::size_t steps = c_.t != 0 ? c_.t : 1;
        auto [final_conf, trace] = evolve(ic.eta, r.k, steps, gen);
        log_ << "hamming(eta, C_T) = " << hamming(ic.eta, final_conf) << ", |R_<=T| = " << trace.cumulative_size()
             << '\n';
        OutputFile out(c_.output);
        write_trace_jsonl(out.stream(), trace, provenance(r));
        out.close();
    }

    void walk() {
        const auto r = rate();
        report_rate(r);
        const auto ic = initial_condition();
        auto gen = make_stream(c_.seed, 0);
        const std::size_t steps = c_.t != 0 ? c_.t : default_horizon(c_.epsilon, r.effective_alpha);
        const auto traj = run_joint(ic.eta, seq_, ic.x0, r.k, steps, gen);
        OutputFile out(c_.output);
        write_trajectory_jsonl(out.stream(), traj, provenance(r));
        out.close();
    }

    void experiment() {
        const auto r = rate();
        report_rate(r);
        for (std::size_t rep = 0; rep < c_.repetitions; ++rep) {
            auto spec = base_spec();
            spec.repetition = rep;
            const auto table = run_experiment(spec);
            for (const auto& w : table.warnings) log_ << "warning: " << w << '\n';
            auto p = provenance(r);
            p.engine = table.engine;
            const std::string path = repetition_path(c_.output, rep, c_.repetitions);
            if (c_.format == "json") {
                OutputFile out(path);
                out.stream() << result_json(table, p).dump(2) << '\n';
                out.close();
            } else {
                OutputFile out(path);
                write_result_csv(out.stream(), table, p);
                out.close();
                if (path.empty()) {
                    std::cout << result_sidecar(table, p).dump(2) << '\n';
                } else {
                    OutputFile side(sidecar_path(path));
                    side.stream() << result_sidecar(table, p).dump(2) << '\n';
                    side.close();
                }
            }
            if (table.t_mix_hat) {
                log_ << "t_mix_hat = " << *table.t_mix_hat;
            } else {
                log_ << "t_mix_hat > " << table.horizon;
            }
            log_ << " (" << table.t_mix_method << "), theory = " << format_number(table.t_mix_theory) << '\n';
        }
    }

    void oracle() {
        const auto r = rate();
        report_rate(r);
        const auto ic = initial_condition();
        const std::size_t t = c_.t;
        const auto space = enumerate_configurations(seq_);
        const auto laws = exact_walk_laws(space, ic.eta, ic.x0, r.k, t);
        std::vector<double> tv;
        for (const auto& law : laws) tv.push_back(tv_to_uniform(law));
        std::vector<double> tail;
        if (seq_.m() <= tau_oracle_max_edges && t <= tau_oracle_max_steps) {
            tail = exact_tau_tail_curve(seq_, ic.eta, ic.x0, r.k, t);
        }
        OutputFile out(c_.output);
        if (c_.format == "json") {
            OracleFixture f;
            f.degrees = seq_.degrees();
            f.eta = ic.eta.pairing();
            f.x0 = ic.x0;
            f.k = r.k;
            f.t = t;
            f.distributions = laws;
            f.tv = tv;
            f.tau_tail = tail;
            auto doc = fixture_to_json(f);
            doc["provenance"] = provenance(r).to_json();
            out.stream() << doc.dump(2) << '\n';
        } else {
            write_csv_provenance(out.stream(), provenance(r));
            write_csv_row(out.stream(), {"t", "exact_tv", "exact_tau_tail"});
            for (std::size_t s = 0; s <= t; ++s) {
                write_csv_row(out.stream(), {std::to_string(s), format_number(tv[s]),
                                             tail.empty() ? "NA" : format_number(tail[s])});
            }
        }
        out.close();
    }

    void topology() {
        TopologyOptions opt;
        opt.t_max = c_.t != 0 ? c_.t : 8;
        opt.samples = c_.samples;
        opt.segments = c_.segments;
        opt.seed = c_.seed;
        const auto rows = topology_report(seq_, opt);
        OutputFile out(c_.output);
        if (c_.format == "json") {
            json j;
            j["provenance"] = provenance().to_json();
            json arr = json::array();
            for (const auto& r : rows) {
                arr.push_back({{"t", r.t},
                               {"mean_ball_size", r.mean_ball_size},
                               {"nu_power_prediction", r.nu_power_prediction},
                               {"tree_fraction", r.tree_fraction},
                               {"good_density", std::isnan(r.good_density) ? json(nullptr) : json(r.good_density)}});
            }
            j["rows"] = arr;
            out.stream() << j.dump(2) << '\n';
        } else {
            write_topology_csv(out.stream(), rows, provenance());
        }
        out.close();
    }

    const RunConfig& c_;
    std::ostream& log_;
    DegreeSequence seq_;
};

}  // namespace detail

/// Exit status: 0 success, 1 invalid input or refused scale, 2 I/O failure.
inline int run(const RunConfig& config, std::ostream& log = std::cerr) {
    try {
        validate_run_config(config);
        detail::Runner runner(config, log);
        runner.dispatch();
        return 0;
    } catch (const io_error& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    } catch (const validation_error& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    } catch (const scale_error& e) {
        log << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace dcm
