#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/dynamics.hpp"
#include "dcm/error.hpp"
#include "dcm/local_dynamics.hpp"
#include "dcm/random.hpp"
#include "dcm/stats.hpp"
#include "dcm/topology.hpp"
#include "dcm/walk.hpp"

namespace dcm {

struct TheoryMixingTime {
    double value = 0.0;
    bool degenerate = false;  // alpha == 1: every edge is resampled at once
};

/// sqrt(2 ln(1/eps) / ln(1/(1-alpha))).
inline TheoryMixingTime theory_mixing_time(double epsilon, double alpha) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw validation_error("epsilon = " + std::to_string(epsilon) + " must lie in (0, 1)");
    }
    if (!(alpha > 0.0) || alpha > 1.0) throw validation_error("alpha = " + std::to_string(alpha) + " must lie in (0, 1]");
    if (alpha == 1.0) return {0.0, true};
    return {std::sqrt(2.0 * std::log(1.0 / epsilon) / -std::log1p(-alpha)), false};
}

/// (1-alpha)^(t(t+1)/2).
inline double theory_tau_tail(std::size_t t, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw validation_error("alpha = " + std::to_string(alpha) + " must lie in (0, 1]");
    if (t == 0) return 1.0;
    if (alpha == 1.0) return 0.0;
    const double exponent = 0.5 * static_cast<double>(t) * static_cast<double>(t + 1);
    return std::exp(exponent * std::log1p(-alpha));
}

/// ceil(3 * theory mixing time), at least 1.
inline std::size_t default_horizon(double epsilon, double alpha) {
    const auto theory = theory_mixing_time(epsilon, alpha);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(3.0 * theory.value)));
}

enum class Engine { automatic, full, local };

inline constexpr std::size_t local_engine_threshold = 1000;  // ell at which automatic switches to local

inline Engine resolve_engine(Engine e, std::size_t ell) {
    if (e != Engine::automatic) return e;
    return ell >= local_engine_threshold ? Engine::local : Engine::full;
}

inline const char* engine_name(Engine e) {
    switch (e) {
        case Engine::full: return "full";
        case Engine::local: return "local";
        default: return "auto";
    }
}

struct ExperimentSpec {
    DegreeSequence seq;
    double alpha = 0.05;
    std::optional<std::size_t> k;  // overrides alpha when set
    double epsilon = 0.1;
    std::size_t horizon = 0;  // 0 picks default_horizon
    std::uint64_t replicas = 10'000;
    std::uint64_t master_seed = 1;
    std::size_t threads = 1;  // 0 uses every hardware thread
    Engine engine = Engine::automatic;
    std::size_t repetition = 0;
    std::optional<Configuration> eta;  // drawn from the initial-condition stream when absent
    std::optional<half_edge> x0;
    std::uint64_t plugin_factor = 20;        // plug-in TV needs N >= plugin_factor * ell
    std::uint64_t min_conditional = 100;     // smaller conditional samples are reported as NA
};

inline RewiringRate resolve_rate(const ExperimentSpec& spec) {
    if (spec.k) {
        check_k(*spec.k, spec.seq.m());
        const double a = static_cast<double>(*spec.k) / static_cast<double>(spec.seq.m());
        return {*spec.k, a, false};
    }
    return alpha_to_k(spec.seq.m(), spec.alpha);
}

inline void validate(const ExperimentSpec& spec) {
    if (!(spec.epsilon > 0.0) || !(spec.epsilon < 1.0)) {
        throw validation_error("epsilon = " + std::to_string(spec.epsilon) + " must lie in (0, 1)");
    }
    if (spec.replicas == 0) throw validation_error("replicas must be at least 1");
    if (spec.replicas > UINT32_MAX) throw validation_error("replicas must fit the 32-bit histogram counters");
    resolve_rate(spec);
    if (spec.eta && spec.eta->ell() != spec.seq.ell()) {
        throw validation_error("initial configuration does not match the degree sequence");
    }
    if (spec.x0 && *spec.x0 >= spec.seq.ell()) throw validation_error("start half-edge out of range");
}

struct InitialCondition {
    Configuration eta;
    half_edge x0 = 0;
};

/// One (eta, x0) per repetition, from its own stream.
inline InitialCondition draw_initial_condition(const ExperimentSpec& spec) {
    auto gen = make_stream(spec.master_seed, spec.repetition, stream_purpose::initial_condition);
    InitialCondition ic{spec.eta ? *spec.eta : sample_configuration(spec.seq, gen), 0};
    ic.x0 = spec.x0 ? *spec.x0 : static_cast<half_edge>(uniform_below(gen, spec.seq.ell()));
    return ic;
}

/*
 * Raw replica tallies. Row t of `all` counts X_t over all replicas, row t of
 * `stopped` only replicas with tau <= t. tau_counts[s] counts tau == s for
 * s in 1..horizon, and tau_counts[horizon + 1] counts tau > horizon.
 */
struct SimulationCounts {
    std::size_t ell = 0;
    std::size_t horizon = 0;
    std::uint64_t replicas = 0;
    std::vector<std::uint32_t> all;
    std::vector<std::uint32_t> stopped;
    std::vector<std::uint64_t> tau_counts;
    std::vector<std::uint64_t> unstopped_in_ball;  // tau > t and X_t in B_t(x0)
    std::vector<std::size_t> ball_sizes;           // |B_t(x0)| in eta

    explicit SimulationCounts(std::size_t ell_ = 0, std::size_t horizon_ = 0)
        : ell(ell_),
          horizon(horizon_),
          all((horizon_ + 1) * ell_, 0),
          stopped((horizon_ + 1) * ell_, 0),
          tau_counts(horizon_ + 2, 0),
          unstopped_in_ball(horizon_ + 1, 0) {}

    std::span<const std::uint32_t> all_row(std::size_t t) const { return {all.data() + t * ell, ell}; }
    std::span<const std::uint32_t> stopped_row(std::size_t t) const { return {stopped.data() + t * ell, ell}; }

    /// Number of replicas with tau > t.
    std::uint64_t survivors(std::size_t t) const {
        std::uint64_t hit = 0;
        for (std::size_t s = 1; s <= std::min(t, horizon); ++s) hit += tau_counts[s];
        return replicas - hit;
    }

    void merge(const SimulationCounts& o) {
        replicas += o.replicas;
        for (std::size_t i = 0; i < all.size(); ++i) all[i] += o.all[i];
        for (std::size_t i = 0; i < stopped.size(); ++i) stopped[i] += o.stopped[i];
        for (std::size_t i = 0; i < tau_counts.size(); ++i) tau_counts[i] += o.tau_counts[i];
        for (std::size_t i = 0; i < unstopped_in_ball.size(); ++i) unstopped_in_ball[i] += o.unstopped_in_ball[i];
    }
};

namespace detail {

template <class Sampler>
void run_block(Sampler& sampler, half_edge x0, std::size_t horizon, std::uint64_t seed, std::uint64_t stream_base,
               std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& dist, SimulationCounts& out) {
    std::vector<half_edge> positions;
    const std::size_t ell = out.ell;
    for (std::uint64_t r = lo; r < hi; ++r) {
        auto gen = make_stream(seed, stream_base + r);
        const auto tau = sampler.run(x0, horizon, gen, positions);
        ++out.replicas;
        out.tau_counts[tau ? *tau : horizon + 1] += 1;
        for (std::size_t t = 0; t <= horizon; ++t) {
            const half_edge x = positions[t];
            ++out.all[t * ell + x];
            if (tau && *tau <= t) {
                ++out.stopped[t * ell + x];
            } else if (dist[x] <= t) {
                ++out.unstopped_in_ball[t];
            }
        }
    }
}

}  // namespace detail

inline std::size_t resolve_threads(std::size_t requested) {
    if (requested != 0) return requested;
    return std::max(1U, std::thread::hardware_concurrency());
}

/*
 * Runs `replicas` independent joint chains from (eta, x0) for `horizon` steps.
 * Replica r always uses the same stream, and per-thread tallies are integer
 * sums, so the result does not depend on the thread count.
 */
inline SimulationCounts simulate(const Configuration& eta, const DegreeSequence& seq, half_edge x0, std::size_t k,
                                 std::size_t horizon, std::uint64_t replicas, std::uint64_t seed,
                                 std::size_t threads = 1, Engine engine = Engine::automatic,
                                 std::size_t repetition = 0) {
    if (eta.ell() != seq.ell()) throw validation_error("simulate: configuration does not match degrees");
    if (x0 >= seq.ell()) throw validation_error("simulate: start half-edge out of range");
    check_k(k, eta.m());
    if (horizon == 0) throw validation_error("horizon must be at least 1");
    const std::uint64_t stream_base = static_cast<std::uint64_t>(repetition) << 40;
    const auto dist = nb_distances(eta, seq, x0, horizon);
    engine = resolve_engine(engine, seq.ell());
    threads = std::min<std::uint64_t>(resolve_threads(threads), replicas);

    std::vector<SimulationCounts> parts;
    parts.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) parts.emplace_back(seq.ell(), horizon);
    auto work = [&](std::size_t i) {
        const std::uint64_t lo = replicas * i / threads;
        const std::uint64_t hi = replicas * (i + 1) / threads;
        if (engine == Engine::local) {
            LocalJointSampler sampler(eta, seq, k);
            detail::run_block(sampler, x0, horizon, seed, stream_base, lo, hi, dist, parts[i]);
        } else {
            FullJointSampler sampler(eta, seq, k);
            detail::run_block(sampler, x0, horizon, seed, stream_base, lo, hi, dist, parts[i]);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work, i);
        for (auto& th : pool) th.join();
    }
    SimulationCounts total = std::move(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) total.merge(parts[i]);
    total.ball_sizes.resize(horizon + 1, 0);
    for (auto d : dist) {
        if (d != unreachable) ++total.ball_sizes[d];
    }
    for (std::size_t t = 1; t <= horizon; ++t) total.ball_sizes[t] += total.ball_sizes[t - 1];
    return total;
}

struct ResultRow {
    std::size_t t = 0;
    std::optional<double> tv_plugin;
    double tv_plugin_se = 0.0;
    double tv_struct = 0.0;
    double tv_struct_se = 0.0;
    double tau_tail = 0.0;
    double tau_tail_se = 0.0;
    double tau_tail_lo = 0.0;  // Wilson 95%
    double tau_tail_hi = 0.0;
    double tau_theory = 0.0;
    std::optional<double> tv_stopped;
    double tv_stopped_se = 0.0;
    std::string stopped_method;  // plugin | collision_bound | unavailable
    std::optional<double> tv_unstopped;
    double tv_unstopped_se = 0.0;
    std::string unstopped_method;  // plugin | ball_lower_bound | unavailable
    double tv_lower = 0.0;         // bracket on the unconditional TV
    double tv_upper = 1.0;
    std::size_t ball_size = 0;
    bool beyond_log_n = false;  // t > ln n, outside the range where the tail formula is expected to hold
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::optional<std::size_t> t_mix_hat;  // empty: no crossing within the horizon
    std::string t_mix_method;              // plugin | structural
    double t_mix_theory = 0.0;
    bool theory_degenerate = false;
    double alpha_requested = 0.0;
    double alpha_effective = 0.0;
    bool alpha_adjusted = false;
    std::size_t k = 0;
    double epsilon = 0.1;
    std::size_t horizon = 0;
    std::uint64_t replicas = 0;
    std::uint64_t seed = 0;
    std::size_t repetition = 0;
    half_edge x0 = 0;
    std::string engine;
    std::vector<std::string> warnings;
};

struct MixingMeasurement {
    std::optional<std::size_t> t_mix;
    std::string note;
};

/*
 * Smallest t with estimate + 2 se <= epsilon, scanning every row without
 * assuming the curve is monotone. Uses the plug-in column when every row has
 * it and the structural column otherwise.
 */
inline MixingMeasurement measure_mixing_time(const std::vector<ResultRow>& rows, double epsilon, std::size_t ell) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw validation_error("epsilon must lie in (0, 1)");
    MixingMeasurement out;
    if (epsilon >= 1.0 - 1.0 / static_cast<double>(ell)) {
        out.t_mix = 0;
        out.note = "epsilon >= 1 - 1/ell";
        return out;
    }
    const bool plugin = !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) {
        return r.tv_plugin.has_value();
    });
    out.note = plugin ? "plugin" : "structural";
    for (const auto& r : rows) {
        const double upper = plugin ? *r.tv_plugin + 2.0 * r.tv_plugin_se : r.tv_struct + 2.0 * r.tv_struct_se;
        if (upper <= epsilon) {
            out.t_mix = r.t;
            return out;
        }
    }
    return out;
}

/// Turns raw tallies into the per-t table.
inline ResultTable summarize(const SimulationCounts& counts, const ExperimentSpec& spec, const RewiringRate& rate,
                             half_edge x0) {
    ResultTable table;
    const std::size_t ell = counts.ell;
    const std::uint64_t n = counts.replicas;
    const double cells = static_cast<double>(ell);
    const bool plugin_ok = n >= spec.plugin_factor * ell;
    const std::uint64_t conditional_plugin = spec.plugin_factor * ell;
    const double log_n = std::log(static_cast<double>(spec.seq.n()));
    if (!plugin_ok) {
        table.warnings.push_back("replicas = " + std::to_string(n) + " < " + std::to_string(spec.plugin_factor) +
                                 " * ell = " + std::to_string(spec.plugin_factor * ell) +
                                 ": plug-in TV omitted, mixing time read from the structural estimate");
    }
    std::vector<std::uint32_t> unstopped(ell);
    for (std::size_t t = 0; t <= counts.horizon; ++t) {
        ResultRow row;
        row.t = t;
        row.ball_size = counts.ball_sizes[t];
        row.beyond_log_n = static_cast<double>(t) > log_n;
        const std::uint64_t surv = counts.survivors(t);
        const std::uint64_t hit = n - surv;
        const auto tail = proportion(surv, n);
        row.tau_tail = tail.value;
        row.tau_tail_se = tail.se;
        std::tie(row.tau_tail_lo, row.tau_tail_hi) = wilson_interval(surv, n);
        row.tau_theory = theory_tau_tail(t, rate.effective_alpha);
        const double outside = std::max(0.0, 1.0 - static_cast<double>(row.ball_size) / cells);
        row.tv_struct = row.tau_tail * outside;
        row.tv_struct_se = row.tau_tail_se * outside;

        if (plugin_ok) {
            const auto e = plugin_tv(counts.all_row(t), n);
            row.tv_plugin = e.value;
            row.tv_plugin_se = e.se;
        }

        const auto stopped = counts.stopped_row(t);
        double stopped_upper = 1.0;
        if (hit >= conditional_plugin) {
            const auto e = plugin_tv(stopped, hit);
            row.tv_stopped = e.value;
            row.tv_stopped_se = e.se;
            row.stopped_method = "plugin";
            stopped_upper = std::min(1.0, e.value + 2.0 * e.se);
        } else if (hit >= std::max<std::uint64_t>(spec.min_conditional, 3)) {
            const auto e = collision_tv_bound(stopped, hit);
            row.tv_stopped = e.value;
            row.tv_stopped_se = e.se;
            row.stopped_method = "collision_bound";
            stopped_upper = std::min(1.0, e.value + 2.0 * e.se);
        } else {
            row.stopped_method = "unavailable";
        }

        const double ball_share = static_cast<double>(row.ball_size) / cells;
        if (surv >= conditional_plugin) {
            const auto all = counts.all_row(t);
            for (std::size_t y = 0; y < ell; ++y) unstopped[y] = all[y] - stopped[y];
            const auto e = plugin_tv(std::span<const std::uint32_t>(unstopped), surv);
            row.tv_unstopped = e.value;
            row.tv_unstopped_se = e.se;
            row.unstopped_method = "plugin";
        } else if (surv >= std::max<std::uint64_t>(spec.min_conditional, 1)) {
            const auto in_ball = proportion(counts.unstopped_in_ball[t], surv);
            row.tv_unstopped = std::clamp(in_ball.value - ball_share, 0.0, 1.0);
            row.tv_unstopped_se = in_ball.se;
            row.unstopped_method = "ball_lower_bound";
        } else {
            row.unstopped_method = "unavailable";
        }

        const double joint_in_ball = static_cast<double>(counts.unstopped_in_ball[t]) / static_cast<double>(n);
        row.tv_lower = std::max(0.0, joint_in_ball - ball_share);
        if (row.tv_plugin) row.tv_lower = std::max(row.tv_lower, *row.tv_plugin - 2.0 * row.tv_plugin_se);
        row.tv_upper = std::min(1.0, (1.0 - row.tau_tail) * stopped_upper + row.tau_tail);
        if (row.tv_plugin) row.tv_upper = std::min(row.tv_upper, *row.tv_plugin + 2.0 * row.tv_plugin_se);
        table.rows.push_back(std::move(row));
    }

    const auto theory = theory_mixing_time(spec.epsilon, rate.effective_alpha);
    const auto mix = measure_mixing_time(table.rows, spec.epsilon, ell);
    table.t_mix_hat = mix.t_mix;
    table.t_mix_method = mix.note;
    table.t_mix_theory = theory.value;
    table.theory_degenerate = theory.degenerate;
    table.alpha_requested = spec.k ? rate.effective_alpha : spec.alpha;
    table.alpha_effective = rate.effective_alpha;
    table.alpha_adjusted = rate.adjusted;
    table.k = rate.k;
    table.epsilon = spec.epsilon;
    table.horizon = counts.horizon;
    table.replicas = n;
    table.seed = spec.master_seed;
    table.repetition = spec.repetition;
    table.x0 = x0;
    table.engine = engine_name(resolve_engine(spec.engine, ell));
    if (rate.adjusted) {
        table.warnings.push_back("alpha adjusted to k/m = " + std::to_string(rate.effective_alpha));
    }
    return table;
}

inline std::size_t resolve_horizon(const ExperimentSpec& spec, const RewiringRate& rate) {
    return spec.horizon != 0 ? spec.horizon : default_horizon(spec.epsilon, rate.effective_alpha);
}

/// Full pipeline for one repetition: initial condition, simulation, summary.
inline ResultTable run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    const auto rate = resolve_rate(spec);
    const std::size_t horizon = resolve_horizon(spec, rate);
    const auto ic = draw_initial_condition(spec);
    const auto counts = simulate(ic.eta, spec.seq, ic.x0, rate.k, horizon, spec.replicas, spec.master_seed,
                                 spec.threads, spec.engine, spec.repetition);
    return summarize(counts, spec, rate, ic.x0);
}

/// Runs the experiment and reads the mixing time off its table.
inline MixingMeasurement measure_mixing_time(const ExperimentSpec& spec) {
    const auto table = run_experiment(spec);
    return {table.t_mix_hat, table.t_mix_method};
}

inline std::vector<ResultRow> estimate_tv_curve(const ExperimentSpec& spec) { return run_experiment(spec).rows; }

struct TailPoint {
    std::size_t t = 0;
    double value = 0.0;
    double se = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double theory = 0.0;
};

inline std::vector<TailPoint> estimate_tau_tail(const ExperimentSpec& spec) {
    std::vector<TailPoint> out;
    for (const auto& r : run_experiment(spec).rows) {
        out.push_back({r.t, r.tau_tail, r.tau_tail_se, r.tau_tail_lo, r.tau_tail_hi, r.tau_theory});
    }
    return out;
}

struct ConditionalPoint {
    std::size_t t = 0;
    std::optional<double> stopped;
    double stopped_se = 0.0;
    std::optional<double> unstopped;
    double unstopped_se = 0.0;
};

inline std::vector<ConditionalPoint> estimate_conditional_tv(const ExperimentSpec& spec) {
    std::vector<ConditionalPoint> out;
    for (const auto& r : run_experiment(spec).rows) {
        out.push_back({r.t, r.tv_stopped, r.tv_stopped_se, r.tv_unstopped, r.tv_unstopped_se});
    }
    return out;
}

}  // namespace dcm
