#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcm/configuration.hpp"
#include "dcm/degrees.hpp"
#include "dcm/error.hpp"
#include "dcm/local_dynamics.hpp"
#include "dcm/random.hpp"
#include "dcm/stats.hpp"

namespace dcm {

/*
 * A uniform configuration revealed one pair at a time: the partner of an
 * unpaired half-edge is drawn uniformly from the other unpaired ones by
 * rejection. Any query order yields the configuration-model law.
 */
class LazyConfiguration {
public:
    explicit LazyConfiguration(std::size_t ell) : partner_(ell), stamp_(ell, 0) {
        if (ell == 0 || ell % 2 != 0) throw validation_error("lazy configuration needs a positive even ell");
    }

    void reset() {
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        paired_ = 0;
    }

    std::size_t ell() const noexcept { return partner_.size(); }
    bool paired(half_edge h) const noexcept { return stamp_[h] == epoch_; }
    std::size_t revealed_edges() const noexcept { return paired_ / 2; }

    template <class URBG>
    half_edge partner(half_edge h, URBG& gen) {
        if (paired(h)) return partner_[h];
        half_edge z;
        do {
            z = static_cast<half_edge>(uniform_below(gen, ell()));
        } while (z == h || paired(z));
        partner_[h] = z;
        partner_[z] = h;
        stamp_[h] = stamp_[z] = epoch_;
        paired_ += 2;
        return z;
    }

private:
    std::vector<half_edge> partner_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 1;
    std::size_t paired_ = 0;
};

/*
 * Reusable workspace for non-backtracking neighbourhoods.
 *
 * A step from y goes to a sibling of eta(y) other than eta(y), so B_t(x)
 * collects the half-edges reachable from x by non-backtracking paths of
 * length at most t. `pair` maps a half-edge to its partner and may reveal it.
 */
class BallScanner {
public:
    explicit BallScanner(const DegreeSequence& seq)
        : seq_(seq), seen_(seq.ell(), 0), vertex_seen_(seq.n(), 0), claimed_(seq.ell(), 0) {}

    /// Half-edges of B_t(x) in breadth-first order; level_ends()[s] = |B_s(x)|.
    template <class PairFn>
    const std::vector<half_edge>& ball(half_edge x, std::size_t t, PairFn&& pair) {
        bump(epoch_, seen_);
        order_.clear();
        level_ends_.clear();
        order_.push_back(x);
        seen_[x] = epoch_;
        level_ends_.push_back(1);
        std::size_t begin = 0;
        for (std::size_t s = 1; s <= t; ++s) {
            const std::size_t end = order_.size();
            for (std::size_t i = begin; i < end; ++i) {
                const half_edge z = pair(order_[i]);
                const auto range = seq_.siblings_range_of(z);
                for (half_edge w = range.first; w < range.last; ++w) {
                    if (w == z || seen_[w] == epoch_) continue;
                    seen_[w] = epoch_;
                    order_.push_back(w);
                }
            }
            begin = end;
            level_ends_.push_back(order_.size());
        }
        return order_;
    }

    const std::vector<std::size_t>& level_ends() const noexcept { return level_ends_; }

    /// False as soon as the expansion of B_t(x) meets an already seen vertex (cycles and self-loops included).
    template <class PairFn>
    bool is_tree(half_edge x, std::size_t t, PairFn&& pair) {
        bump(vertex_epoch_, vertex_seen_);
        frontier_.assign(1, x);
        vertex_seen_[seq_.owner(x)] = vertex_epoch_;
        for (std::size_t s = 0; s < t; ++s) {
            next_.clear();
            for (half_edge y : frontier_) {
                const half_edge z = pair(y);
                const vertex w = seq_.owner(z);
                if (vertex_seen_[w] == vertex_epoch_) return false;
                vertex_seen_[w] = vertex_epoch_;
                const auto range = seq_.siblings_range(w);
                for (half_edge u = range.first; u < range.last; ++u) {
                    if (u != z) next_.push_back(u);
                }
            }
            frontier_.swap(next_);
        }
        return true;
    }

    /// Starts a new group of half-edge sets that must stay disjoint.
    void begin_disjoint_group() { bump(claim_epoch_, claimed_); }

    /// Claims the given half-edges for the current group; false if any was already claimed.
    bool claim(const std::vector<half_edge>& items) {
        for (half_edge h : items) {
            if (claimed_[h] == claim_epoch_) return false;
        }
        for (half_edge h : items) claimed_[h] = claim_epoch_;
        return true;
    }

    const DegreeSequence& degrees() const noexcept { return seq_; }

private:
    static void bump(std::uint32_t& epoch, std::vector<std::uint32_t>& stamps) {
        if (++epoch == 0) {
            std::fill(stamps.begin(), stamps.end(), 0);
            epoch = 1;
        }
    }

    const DegreeSequence& seq_;
    std::vector<std::uint32_t> seen_;
    std::vector<std::uint32_t> vertex_seen_;
    std::vector<std::uint32_t> claimed_;
    std::uint32_t epoch_ = 0;
    std::uint32_t vertex_epoch_ = 0;
    std::uint32_t claim_epoch_ = 0;
    std::vector<half_edge> order_;
    std::vector<std::size_t> level_ends_;
    std::vector<half_edge> frontier_;
    std::vector<half_edge> next_;
};

inline auto pairing_of(const Configuration& c) {
    return [&c](half_edge h) { return c[h]; };
}

inline void check_half_edge(const Configuration& c, half_edge x) {
    if (x >= c.ell()) throw validation_error("half-edge " + std::to_string(x) + " is out of range");
}

/// B_t(x), sorted ascending.
inline std::vector<half_edge> ball(const Configuration& c, const DegreeSequence& seq, half_edge x, std::size_t t) {
    check_half_edge(c, x);
    BallScanner scanner(seq);
    auto out = scanner.ball(x, t, pairing_of(c));
    std::sort(out.begin(), out.end());
    return out;
}

/// |B_s(x)| for s = 0..t_max.
inline std::vector<std::size_t> ball_sizes(const Configuration& c, const DegreeSequence& seq, half_edge x,
                                           std::size_t t_max) {
    check_half_edge(c, x);
    BallScanner scanner(seq);
    scanner.ball(x, t_max, pairing_of(c));
    return scanner.level_ends();
}

inline bool is_tree_ball(const Configuration& c, const DegreeSequence& seq, half_edge x, std::size_t t) {
    check_half_edge(c, x);
    BallScanner scanner(seq);
    return scanner.is_tree(x, t, pairing_of(c));
}

inline constexpr std::uint32_t unreachable = UINT32_MAX;

/// Non-backtracking distance from x to every half-edge, up to max_radius.
inline std::vector<std::uint32_t> nb_distances(const Configuration& c, const DegreeSequence& seq, half_edge x,
                                               std::size_t max_radius) {
    check_half_edge(c, x);
    std::vector<std::uint32_t> dist(c.ell(), unreachable);
    std::vector<half_edge> queue{x};
    dist[x] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const half_edge y = queue[head];
        if (dist[y] >= max_radius) continue;
        const half_edge z = c[y];
        const auto range = seq.siblings_range_of(z);
        for (half_edge w = range.first; w < range.last; ++w) {
            if (w == z || dist[w] != unreachable) continue;
            dist[w] = dist[y] + 1;
            queue.push_back(w);
        }
    }
    return dist;
}

/*
 * Partially paired graph grown by the breadth-first exploration.
 * `paired` marks U(s)'s complement; `active` is the FIFO queue A(s), which
 * may hold stale entries that were paired from the other side.
 */
struct ThornyGraph {
    std::vector<std::pair<half_edge, half_edge>> paired_edges;
    std::vector<half_edge> dangling;  // unpaired half-edges of vertices in the graph, ascending
    std::deque<half_edge> active;
    std::vector<bool> paired;
    std::vector<vertex> vertices;  // in order of discovery
    std::size_t rejections = 0;

    std::size_t pairings() const noexcept { return paired_edges.size(); }
    std::size_t vertex_count() const noexcept { return vertices.size(); }
};

/*
 * Explores the configuration-model neighbourhood of x: pair the next active
 * half-edge y with a uniform z from H, rejecting z already paired or z == y;
 * then activate the unpaired siblings of z.
 */
template <class URBG>
ThornyGraph explore(const DegreeSequence& seq, half_edge x, std::size_t s_max, URBG& gen) {
    if (x >= seq.ell()) throw validation_error("explore: start half-edge out of range");
    ThornyGraph g;
    g.paired.assign(seq.ell(), false);
    std::vector<bool> present(seq.n(), false);
    std::vector<bool> queued(seq.ell(), false);
    auto add_vertex = [&](vertex v) {
        if (present[v]) return;
        present[v] = true;
        g.vertices.push_back(v);
    };
    add_vertex(seq.owner(x));
    g.active.push_back(x);
    queued[x] = true;
    while (g.pairings() < s_max) {
        while (!g.active.empty() && g.paired[g.active.front()]) g.active.pop_front();
        if (g.active.empty()) break;
        const half_edge y = g.active.front();
        g.active.pop_front();
        half_edge z;
        for (;;) {
            z = static_cast<half_edge>(uniform_below(gen, seq.ell()));
            if (z != y && !g.paired[z]) break;
            ++g.rejections;
        }
        g.paired[y] = g.paired[z] = true;
        g.paired_edges.emplace_back(y, z);
        add_vertex(seq.owner(z));
        const auto range = seq.siblings_range_of(z);
        for (half_edge w = range.first; w < range.last; ++w) {
            if (w == z || g.paired[w] || queued[w]) continue;
            queued[w] = true;
            g.active.push_back(w);
        }
    }
    while (!g.active.empty() && g.paired[g.active.front()]) g.active.pop_front();
    std::deque<half_edge> live;
    for (half_edge h : g.active) {
        if (!g.paired[h]) live.push_back(h);
    }
    g.active.swap(live);
    for (vertex v : g.vertices) {
        const auto range = seq.siblings_range(v);
        for (half_edge h = range.first; h < range.last; ++h) {
            if (!g.paired[h]) g.dangling.push_back(h);
        }
    }
    std::sort(g.dangling.begin(), g.dangling.end());
    return g;
}

template <class URBG>
ThornyGraph explore(const DegreeSequence& seq, std::size_t s_max, URBG& gen) {
    const auto x = static_cast<half_edge>(uniform_below(gen, seq.ell()));
    return explore(seq, x, s_max, gen);
}

/// Segment boundaries T as a sorted, duplicate-free subset of [1, t].
inline std::vector<std::size_t> normalize_segment_ends(std::vector<std::size_t> ends, std::size_t t) {
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    for (auto e : ends) {
        if (e < 1 || e > t) {
            throw validation_error("segment end " + std::to_string(e) + " lies outside [1, " + std::to_string(t) +
                                   "]");
        }
    }
    return ends;
}

/*
 * x_0..x_t where every step i outside T is a non-backtracking move in eta
 * (x_i a sibling of eta(x_{i-1})) and every step in T is an arbitrary jump.
 */
struct SegmentedPath {
    std::vector<half_edge> half_edges;
    std::vector<std::size_t> segment_ends;

    std::size_t length() const noexcept { return half_edges.empty() ? 0 : half_edges.size() - 1; }
    friend bool operator==(const SegmentedPath&, const SegmentedPath&) = default;
};

inline bool is_segmented_path(const Configuration& c, const DegreeSequence& seq, const SegmentedPath& p) {
    if (p.half_edges.empty()) return false;
    for (half_edge h : p.half_edges) {
        if (h >= c.ell()) return false;
    }
    const std::size_t t = p.length();
    std::vector<bool> jump(t + 1, false);
    for (auto e : p.segment_ends) {
        if (e < 1 || e > t) return false;
        jump[e] = true;
    }
    for (std::size_t i = 1; i <= t; ++i) {
        if (!jump[i] && !seq.are_siblings(c[p.half_edges[i - 1]], p.half_edges[i])) return false;
    }
    return true;
}

inline bool is_self_avoiding(const DegreeSequence& seq, const SegmentedPath& p) {
    std::vector<vertex> seen;
    for (half_edge h : p.half_edges) seen.push_back(seq.owner(h));
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

inline constexpr std::uint64_t segmented_path_work_limit = 20'000'000;

/// Every self-avoiding segmented path from x to y of length t with jumps exactly at T.
inline std::vector<SegmentedPath> enumerate_segmented_paths(const Configuration& c, const DegreeSequence& seq,
                                                            half_edge x, half_edge y, std::vector<std::size_t> T,
                                                            std::size_t t) {
    check_half_edge(c, x);
    check_half_edge(c, y);
    T = normalize_segment_ends(std::move(T), t);
    if (c.ell() > 20 && t > 6) {
        throw scale_error("segmented path enumeration needs ell <= 20 or t <= 6");
    }
    // branching is at most ell per jump and max_degree per ordinary step
    const double estimate = std::pow(static_cast<double>(c.ell()), static_cast<double>(T.size())) *
                            std::pow(static_cast<double>(seq.max_degree()), static_cast<double>(t - T.size()));
    if (estimate > static_cast<double>(segmented_path_work_limit)) {
        throw scale_error("segmented path enumeration would visit about " + std::to_string(estimate) + " prefixes");
    }

    std::vector<bool> jump(t + 1, false);
    for (auto e : T) jump[e] = true;
    std::vector<SegmentedPath> out;
    std::vector<half_edge> prefix{x};
    std::vector<bool> used(seq.n(), false);
    used[seq.owner(x)] = true;

    std::function<void(std::size_t)> extend = [&](std::size_t i) {
        if (i > t) {
            if (prefix.back() == y) out.push_back({prefix, T});
            return;
        }
        auto try_next = [&](half_edge next) {
            if (i == t && next != y) return;
            const vertex v = seq.owner(next);
            if (used[v]) return;
            used[v] = true;
            prefix.push_back(next);
            extend(i + 1);
            prefix.pop_back();
            used[v] = false;
        };
        if (jump[i]) {
            for (half_edge next = 0; next < c.ell(); ++next) try_next(next);
        } else {
            const half_edge z = c[prefix.back()];
            const auto range = seq.siblings_range_of(z);
            for (half_edge next = range.first; next < range.last; ++next) {
                if (next != z) try_next(next);
            }
        }
    };
    if (t == 0) {
        if (x == y) out.push_back({prefix, T});
        return out;
    }
    extend(1);
    return out;
}

/// Largest radius accepted by good-tuple sampling: ceil(log2 n).
inline std::size_t good_tuple_radius_limit(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
}

/*
 * Whether (x_0, ..., x_r) is good for T = {t_1 < ... < t_r}: the balls of
 * radius t_i - t_{i-1} around x_{i-1} (t_0 = 0) and of radius t - t_r around
 * x_r are trees with pairwise disjoint half-edge sets.
 */
template <class PairFn>
bool is_good_tuple(BallScanner& scanner, const std::vector<half_edge>& tuple, const std::vector<std::size_t>& T,
                   std::size_t t, PairFn&& pair) {
    if (tuple.size() != T.size() + 1) throw validation_error("tuple size must be |T| + 1");
    scanner.begin_disjoint_group();
    std::size_t previous = 0;
    for (std::size_t i = 0; i <= T.size(); ++i) {
        const std::size_t radius = (i < T.size() ? T[i] : t) - previous;
        if (i < T.size()) previous = T[i];
        if (!scanner.is_tree(tuple[i], radius, pair)) return false;
        if (!scanner.claim(scanner.ball(tuple[i], radius, pair))) return false;
    }
    return true;
}

/// Fraction of uniformly drawn (|T|+1)-tuples that are good for T in c.
template <class URBG>
double good_tuple_density(const Configuration& c, const DegreeSequence& seq, std::vector<std::size_t> T,
                          std::size_t t, std::size_t samples, URBG& gen) {
    if (c.ell() != seq.ell()) throw validation_error("good_tuple_density: configuration does not match degrees");
    if (samples == 0) throw validation_error("good_tuple_density: samples must be positive");
    if (t > good_tuple_radius_limit(seq.n())) {
        throw validation_error("good_tuple_density: t = " + std::to_string(t) + " exceeds ceil(log2 n) = " +
                               std::to_string(good_tuple_radius_limit(seq.n())));
    }
    T = normalize_segment_ends(std::move(T), std::max<std::size_t>(t, 1));
    if (t == 0 && !T.empty()) throw validation_error("good_tuple_density: T must be empty when t = 0");
    BallScanner scanner(seq);
    std::vector<half_edge> tuple(T.size() + 1);
    std::size_t good = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& h : tuple) h = static_cast<half_edge>(uniform_below(gen, c.ell()));
        if (is_good_tuple(scanner, tuple, T, t, pairing_of(c))) ++good;
    }
    return static_cast<double>(good) / static_cast<double>(samples);
}

/// Number of distinct half-edges in p[s..s'].
inline std::size_t distinct_in_window(const std::vector<half_edge>& p, std::size_t s, std::size_t s_end) {
    std::vector<half_edge> w(p.begin() + static_cast<std::ptrdiff_t>(s),
                             p.begin() + static_cast<std::ptrdiff_t>(s_end) + 1);
    std::sort(w.begin(), w.end());
    return static_cast<std::size_t>(std::unique(w.begin(), w.end()) - w.begin());
}

/// Whether the two sequences have equal distinct counts on every window [s, s'].
inline bool windows_match(const std::vector<half_edge>& a, const std::vector<half_edge>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t s = 0; s < a.size(); ++s) {
        for (std::size_t e = s + 1; e < a.size(); ++e) {
            if (distinct_in_window(a, s, e) != distinct_in_window(b, s, e)) return false;
        }
    }
    return true;
}

struct PathEventComparison {
    double p_a = 0.0;
    double p_b = 0.0;
    std::uint64_t hits_a = 0;
    std::uint64_t hits_b = 0;
    std::uint64_t only_a = 0;  // replicas where A(path a) held and A(path b) did not
    std::uint64_t only_b = 0;
    std::uint64_t replicas = 0;
    double z_score = 0.0;       // paired (McNemar)
    double z_unpaired = 0.0;    // pooled two-proportion
};

/// Whether x_{i-1} in R_{<=i} holds exactly for the steps i in T, for one realisation.
template <class URBG>
bool path_event(LocalRewiringProcess& process, const std::vector<half_edge>& path, const std::vector<bool>& jump,
                URBG& gen) {
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (process.rewired_by(path[i - 1], i, gen) != jump[i]) return false;
    }
    return true;
}

/*
 * Monte Carlo estimate of P(A(path; T)) for two segmented paths. Both events
 * are read off the same rewiring realisation in every replica, and the
 * difference is tested with the paired McNemar statistic.
 */
inline PathEventComparison isomorphic_path_event_check(const Configuration& eta, const DegreeSequence& seq,
                                                       const SegmentedPath& a, const SegmentedPath& b,
                                                       std::size_t k, std::uint64_t replicas,
                                                       std::uint64_t master_seed) {
    if (a.half_edges.size() != b.half_edges.size()) throw validation_error("paths have different lengths");
    if (a.segment_ends != b.segment_ends) throw validation_error("paths use different segment ends");
    const std::size_t t = a.length();
    const auto T = normalize_segment_ends(a.segment_ends, std::max<std::size_t>(t, 1));
    if (!is_segmented_path(eta, seq, a) || !is_segmented_path(eta, seq, b)) {
        throw validation_error("both paths must be segmented paths in eta for T");
    }
    if (!windows_match(a.half_edges, b.half_edges)) {
        throw validation_error("paths are not isomorphic: distinct half-edge counts differ on some window");
    }
    if (replicas == 0) throw validation_error("replicas must be positive");
    std::vector<bool> jump(t + 1, false);
    for (auto e : T) jump[e] = true;

    LocalRewiringProcess process(eta, k);
    PathEventComparison out;
    out.replicas = replicas;
    for (std::uint64_t r = 0; r < replicas; ++r) {
        auto gen = make_stream(master_seed, r);
        process.reset();
        const bool ea = path_event(process, a.half_edges, jump, gen);
        const bool eb = path_event(process, b.half_edges, jump, gen);
        out.hits_a += ea;
        out.hits_b += eb;
        out.only_a += ea && !eb;
        out.only_b += eb && !ea;
    }
    out.p_a = static_cast<double>(out.hits_a) / static_cast<double>(replicas);
    out.p_b = static_cast<double>(out.hits_b) / static_cast<double>(replicas);
    out.z_score = mcnemar_z(out.only_a, out.only_b);
    out.z_unpaired = two_proportion_z(out.hits_a, replicas, out.hits_b, replicas);
    return out;
}

struct TopologyRow {
    std::size_t t = 0;
    double mean_ball_size = 0.0;
    double nu_power_prediction = 0.0;  // nu^(t+1)
    double tree_fraction = 0.0;
    double good_density = 0.0;
};

struct TopologyOptions {
    std::size_t t_max = 8;
    std::size_t samples = 10'000;
    std::size_t segments = 2;  // |T| for the good-tuple column
    std::uint64_t seed = 1;
};

/// Evenly spread segment ends: T = {round(i t / (r+1))}, i = 1..r, deduplicated.
inline std::vector<std::size_t> spread_segment_ends(std::size_t t, std::size_t r) {
    std::vector<std::size_t> T;
    for (std::size_t i = 1; i <= r; ++i) {
        const auto e = static_cast<std::size_t>(std::llround(static_cast<double>(i * t) / static_cast<double>(r + 1)));
        if (e >= 1 && e <= t) T.push_back(e);
    }
    std::sort(T.begin(), T.end());
    T.erase(std::unique(T.begin(), T.end()), T.end());
    return T;
}

/*
 * Per-radius diagnostics over fresh uniform (eta, x) draws. Each draw reveals
 * only the neighbourhood it inspects, through a LazyConfiguration, so the
 * cost does not grow with n.
 */
inline std::vector<TopologyRow> topology_report(const DegreeSequence& seq, const TopologyOptions& opt) {
    if (opt.samples == 0) throw validation_error("topology: samples must be positive");
    const double nu = regularity(seq).nu;
    const std::size_t radius_limit = good_tuple_radius_limit(seq.n());
    LazyConfiguration lazy(seq.ell());
    BallScanner scanner(seq);
    std::vector<TopologyRow> rows(opt.t_max + 1);
    std::vector<double> ball_sum(opt.t_max + 1, 0.0);
    std::vector<std::uint64_t> trees(opt.t_max + 1, 0);
    std::vector<std::uint64_t> good(opt.t_max + 1, 0);
    for (std::size_t s = 0; s < opt.samples; ++s) {
        auto gen = make_stream(opt.seed, s, stream_purpose::diagnostics);
        auto pair = [&](half_edge h) { return lazy.partner(h, gen); };
        lazy.reset();
        const auto x = static_cast<half_edge>(uniform_below(gen, seq.ell()));
        scanner.ball(x, opt.t_max, pair);
        const auto sizes = scanner.level_ends();
        for (std::size_t t = 0; t <= opt.t_max; ++t) {
            ball_sum[t] += static_cast<double>(sizes[t]);
            trees[t] += scanner.is_tree(x, t, pair);
        }
        // good tuples reuse the same configuration draw with fresh uniform tuples
        for (std::size_t t = 0; t <= std::min(opt.t_max, radius_limit); ++t) {
            const auto T = spread_segment_ends(t, t == 0 ? 0 : opt.segments);
            std::vector<half_edge> tuple(T.size() + 1);
            for (auto& h : tuple) h = static_cast<half_edge>(uniform_below(gen, seq.ell()));
            good[t] += is_good_tuple(scanner, tuple, T, t, pair);
        }
    }
    const double n = static_cast<double>(opt.samples);
    for (std::size_t t = 0; t <= opt.t_max; ++t) {
        rows[t].t = t;
        rows[t].mean_ball_size = ball_sum[t] / n;
        rows[t].nu_power_prediction = std::pow(nu, static_cast<double>(t + 1));
        rows[t].tree_fraction = static_cast<double>(trees[t]) / n;
        rows[t].good_density = t <= radius_limit ? static_cast<double>(good[t]) / n : std::nan("");
    }
    return rows;
}

}  // namespace dcm
