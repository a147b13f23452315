#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <set>

#include "dcm/exact_oracle.hpp"
#include "dcm/stats.hpp"
#include "dcm/topology.hpp"

using namespace dcm;

namespace {

// K4 as a 3-regular configuration.
Configuration k4() { return Configuration({3, 6, 9, 0, 7, 10, 1, 4, 11, 2, 5, 8}); }

// Every half-edge reachable by a non-backtracking path of length <= t, by plain recursion.
std::set<half_edge> brute_ball(const Configuration& c, const DegreeSequence& seq, half_edge x, std::size_t t) {
    std::set<half_edge> out{x};
    std::function<void(half_edge, std::size_t)> go = [&](half_edge y, std::size_t left) {
        if (left == 0) return;
        const half_edge z = c[y];
        const auto r = seq.siblings_range_of(z);
        for (half_edge w = r.first; w < r.last; ++w) {
            if (w == z) continue;
            out.insert(w);
            go(w, left - 1);
        }
    };
    go(x, t);
    return out;
}

// The exploration's revealed edge set when every pairing is read from a fixed configuration.
std::vector<std::pair<half_edge, half_edge>> deterministic_explore(const Configuration& c, const DegreeSequence& seq,
                                                                   half_edge x, std::size_t s_max) {
    std::vector<bool> paired(c.ell(), false), queued(c.ell(), false);
    std::deque<half_edge> active{x};
    queued[x] = true;
    std::vector<std::pair<half_edge, half_edge>> edges;
    while (edges.size() < s_max) {
        while (!active.empty() && paired[active.front()]) active.pop_front();
        if (active.empty()) break;
        const half_edge y = active.front();
        active.pop_front();
        const half_edge z = c[y];
        paired[y] = paired[z] = true;
        edges.emplace_back(std::min(y, z), std::max(y, z));
        const auto r = seq.siblings_range_of(z);
        for (half_edge w = r.first; w < r.last; ++w) {
            if (w == z || paired[w] || queued[w]) continue;
            queued[w] = true;
            active.push_back(w);
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace

TEST(Ball, KnownGraph) {
    const auto seq = make_regular(4, 3);
    const auto c = k4();
    ASSERT_TRUE(c.valid());
    EXPECT_EQ(ball(c, seq, 0, 0), std::vector<half_edge>{0});
    EXPECT_EQ(ball(c, seq, 0, 1), (std::vector<half_edge>{0, 4, 5}));
    EXPECT_EQ(ball(c, seq, 0, 2), (std::vector<half_edge>{0, 4, 5, 6, 8, 9, 11}));
    EXPECT_EQ(ball_sizes(c, seq, 0, 3), (std::vector<std::size_t>{1, 3, 7, 11}));
    EXPECT_TRUE(is_tree_ball(c, seq, 0, 2));
    EXPECT_FALSE(is_tree_ball(c, seq, 0, 3));
    EXPECT_THROW(ball(c, seq, 12, 1), validation_error);
}

TEST(Ball, SelfLoopIsNotATree) {
    const DegreeSequence seq({3, 3});
    const Configuration c({1, 0, 3, 2, 5, 4});
    EXPECT_TRUE(is_tree_ball(c, seq, 0, 0));
    EXPECT_FALSE(is_tree_ball(c, seq, 0, 1));
    EXPECT_TRUE(is_tree_ball(c, seq, 2, 1));
    EXPECT_FALSE(is_tree_ball(c, seq, 2, 2));
    EXPECT_EQ(ball(c, seq, 0, 1), (std::vector<half_edge>{0, 2}));
}

TEST(Ball, MatchesBruteForceAndDistances) {
    const DegreeSequence seq({3, 2, 4, 3, 2, 3, 3, 2, 2, 4});
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto gen = make_stream(s, 0);
        const auto c = sample_configuration(seq, gen);
        for (half_edge x = 0; x < c.ell(); ++x) {
            const auto dist = nb_distances(c, seq, x, 5);
            for (std::size_t t = 0; t <= 5; ++t) {
                const auto b = ball(c, seq, x, t);
                const auto brute = brute_ball(c, seq, x, t);
                ASSERT_EQ(std::set<half_edge>(b.begin(), b.end()), brute);
                std::size_t within = 0;
                for (auto d : dist) within += d <= t;
                ASSERT_EQ(within, b.size());
            }
        }
    }
}

TEST(Ball, TreeBallHasGeometricSize) {
    const auto seq = make_regular(100'000, 3);
    auto gen = make_stream(2, 0);
    const auto c = sample_configuration(seq, gen);
    std::size_t checked = 0;
    for (half_edge x = 0; x < 3000; x += 7) {
        if (!is_tree_ball(c, seq, x, 6)) continue;
        ++checked;
        const auto sizes = ball_sizes(c, seq, x, 6);
        for (std::size_t t = 0; t <= 6; ++t) ASSERT_EQ(sizes[t], (std::size_t{2} << t) - 1);
    }
    EXPECT_GT(checked, 400u);
}

TEST(LazyConfiguration, AnyQueryOrderIsUniform) {
    const auto seq = make_regular(3, 2);
    const auto space = enumerate_configurations(seq);
    LazyConfiguration lazy(6);
    auto gen = make_stream(3, 0);
    std::vector<std::uint64_t> counts(space.size(), 0);
    std::vector<half_edge> order{0, 1, 2, 3, 4, 5};
    for (int i = 0; i < 60'000; ++i) {
        lazy.reset();
        std::shuffle(order.begin(), order.end(), gen);
        std::vector<half_edge> p(6);
        for (auto h : order) p[h] = lazy.partner(h, gen);
        ASSERT_EQ(lazy.revealed_edges(), 3u);
        ++counts[space.index_of(Configuration(p))];
    }
    const std::vector<double> uniform(space.size(), 1.0 / 15.0);
    EXPECT_GT(chi_square_gof(counts, uniform).p_value, 0.001);
    EXPECT_THROW(LazyConfiguration(5), validation_error);
}

TEST(Explore, RevealedGraphHasConfigurationModelLaw) {
    const DegreeSequence seq({3, 3, 2});
    const auto space = enumerate_configurations(seq);
    for (std::size_t s_max : {2u, 4u}) {
        std::map<std::vector<std::pair<half_edge, half_edge>>, double> exact;
        for (const auto& c : space.configurations) {
            exact[deterministic_explore(c, seq, 0, s_max)] += 1.0 / static_cast<double>(space.size());
        }
        std::map<std::vector<std::pair<half_edge, half_edge>>, std::uint64_t> seen;
        auto gen = make_stream(4, s_max);
        for (int i = 0; i < 60'000; ++i) {
            const auto g = explore(seq, 0, s_max, gen);
            auto edges = g.paired_edges;
            for (auto& e : edges) e = {std::min(e.first, e.second), std::max(e.first, e.second)};
            std::sort(edges.begin(), edges.end());
            ++seen[edges];
            std::size_t dangling = 0;
            for (vertex v : g.vertices) {
                const auto r = seq.siblings_range(v);
                for (half_edge h = r.first; h < r.last; ++h) dangling += !g.paired[h];
            }
            ASSERT_EQ(dangling, g.dangling.size());
            for (half_edge h : g.active) ASSERT_FALSE(g.paired[h]);
        }
        std::vector<std::uint64_t> observed;
        std::vector<double> expected;
        for (const auto& [key, p] : exact) {
            observed.push_back(seen.count(key) ? seen[key] : 0);
            expected.push_back(p);
        }
        for (const auto& [key, n] : seen) ASSERT_TRUE(exact.count(key));
        EXPECT_GT(chi_square_gof(observed, expected).p_value, 0.001) << "s_max " << s_max;
    }
}

TEST(Explore, StopsAtSMaxOrWhenExhausted) {
    const auto seq = make_regular(1000, 3);
    auto gen = make_stream(5, 0);
    const auto g = explore(seq, 30, gen);
    EXPECT_EQ(g.pairings(), 30u);
    EXPECT_LE(g.vertex_count(), 31u);
    const DegreeSequence tiny({2});
    const auto h = explore(tiny, 0, 10, gen);
    EXPECT_EQ(h.pairings(), 1u);
    EXPECT_TRUE(h.active.empty());
}

TEST(SegmentedPaths, MatchBruteForce) {
    const DegreeSequence seq({3, 3, 2, 2, 2});
    auto gen = make_stream(6, 0);
    const auto c = sample_configuration(seq, gen);
    const std::size_t ell = c.ell();
    for (const auto& T : std::vector<std::vector<std::size_t>>{{}, {1}, {2}, {1, 3}}) {
        const std::size_t t = 3;
        for (half_edge x = 0; x < ell; x += 3) {
            for (half_edge y = 0; y < ell; y += 2) {
                std::set<std::vector<half_edge>> brute;
                std::vector<half_edge> p(t + 1);
                p[0] = x;
                p[t] = y;
                for (half_edge a = 0; a < ell; ++a) {
                    for (half_edge b = 0; b < ell; ++b) {
                        p[1] = a;
                        p[2] = b;
                        const SegmentedPath sp{p, T};
                        if (is_segmented_path(c, seq, sp) && is_self_avoiding(seq, sp)) brute.insert(p);
                    }
                }
                std::set<std::vector<half_edge>> found;
                for (const auto& sp : enumerate_segmented_paths(c, seq, x, y, T, t)) {
                    ASSERT_TRUE(is_segmented_path(c, seq, sp));
                    found.insert(sp.half_edges);
                }
                ASSERT_EQ(found, brute);
            }
        }
    }
}

TEST(SegmentedPaths, Validation) {
    const auto seq = make_regular(4, 3);
    const auto c = k4();
    EXPECT_THROW(enumerate_segmented_paths(c, seq, 0, 1, {0}, 3), validation_error);
    EXPECT_THROW(enumerate_segmented_paths(c, seq, 0, 1, {4}, 3), validation_error);
    EXPECT_EQ(normalize_segment_ends({3, 1, 3}, 4), (std::vector<std::size_t>{1, 3}));
    EXPECT_FALSE(is_segmented_path(c, seq, {{0, 3}, {}}));  // 3 is the partner, not a sibling of it
    EXPECT_TRUE(is_segmented_path(c, seq, {{0, 4}, {}}));
    EXPECT_TRUE(is_segmented_path(c, seq, {{0, 1}, {1}}));
    EXPECT_FALSE(is_self_avoiding(seq, {{0, 1}, {1}}));
    const auto big = make_regular(100, 3);
    auto gen = make_stream(7, 0);
    const auto cb = sample_configuration(big, gen);
    EXPECT_THROW(enumerate_segmented_paths(cb, big, 0, 1, {2, 4, 6}, 8), scale_error);
}

TEST(GoodTuples, EmptyTIsTheTreeFraction) {
    const auto seq = make_regular(200, 3);
    auto gen = make_stream(8, 0);
    const auto c = sample_configuration(seq, gen);
    const std::size_t t = 6;
    double trees = 0.0;
    for (half_edge x = 0; x < c.ell(); ++x) trees += is_tree_ball(c, seq, x, t);
    trees /= static_cast<double>(c.ell());
    const std::size_t samples = 40'000;
    const double d = good_tuple_density(c, seq, {}, t, samples, gen);
    EXPECT_NEAR(d, trees, 5 * std::sqrt(trees * (1 - trees) / samples) + 1e-9);
}

TEST(GoodTuples, OverlapAndCyclesAreRejected) {
    const auto seq = make_regular(10'000, 3);
    auto gen = make_stream(9, 0);
    const auto c = sample_configuration(seq, gen);
    BallScanner scanner(seq);
    half_edge x = 0;
    while (!is_tree_ball(c, seq, x, 4)) ++x;
    EXPECT_TRUE(is_good_tuple(scanner, {x}, {}, 4, pairing_of(c)));
    EXPECT_FALSE(is_good_tuple(scanner, {x, x}, {2}, 4, pairing_of(c)));
    // first ball has radius t_1 = 2, second radius t - t_1 = 2; a far-away second point is fine
    const auto near = ball(c, seq, x, 2);
    auto overlaps = [&](half_edge y) {
        for (auto h : ball(c, seq, y, 2)) {
            if (std::binary_search(near.begin(), near.end(), h)) return true;
        }
        return false;
    };
    half_edge far = x + 3000;
    while (!is_tree_ball(c, seq, far, 2) || overlaps(far)) ++far;
    EXPECT_TRUE(is_good_tuple(scanner, {x, far}, {2}, 4, pairing_of(c)));
    EXPECT_THROW(is_good_tuple(scanner, {x}, {2}, 4, pairing_of(c)), validation_error);
    EXPECT_THROW(good_tuple_density(c, seq, {2}, 15, 10, gen), validation_error);
    const auto k = k4();
    const auto s4 = make_regular(4, 3);
    EXPECT_EQ(good_tuple_density(k, s4, {}, 2, 100, gen), 1.0);
}

TEST(Windows, IsomorphismInvariant) {
    EXPECT_EQ(distinct_in_window({1, 2, 1, 3}, 0, 2), 2u);
    EXPECT_TRUE(windows_match({1, 2, 3}, {7, 8, 9}));
    EXPECT_TRUE(windows_match({1, 2, 1}, {5, 6, 5}));
    EXPECT_FALSE(windows_match({1, 2, 1}, {5, 6, 7}));
    EXPECT_FALSE(windows_match({1, 2}, {1, 2, 3}));
}

TEST(PathEvents, IdenticalPathsGiveZeroStatistic) {
    const auto seq = make_regular(500, 3);
    auto gen = make_stream(10, 0);
    const auto eta = sample_configuration(seq, gen);
    const half_edge x0 = 0;
    const half_edge x1 = seq.siblings_range_of(eta[x0]).first == eta[x0] ? eta[x0] + 1 : seq.siblings_range_of(eta[x0]).first;
    const SegmentedPath a{{x0, x1, 77}, {2}};
    ASSERT_TRUE(is_segmented_path(eta, seq, a));
    const auto r = isomorphic_path_event_check(eta, seq, a, a, 50, 5000, 3);
    EXPECT_EQ(r.hits_a, r.hits_b);
    EXPECT_EQ(r.only_a + r.only_b, 0u);
    EXPECT_EQ(r.z_score, 0.0);
    EXPECT_GT(r.hits_a, 0u);
}

TEST(PathEvents, RejectsMismatchedInputs) {
    const auto seq = make_regular(500, 3);
    auto gen = make_stream(11, 0);
    const auto eta = sample_configuration(seq, gen);
    const SegmentedPath a{{0, 10, 20}, {1, 2}};
    const SegmentedPath repeated{{0, 10, 0}, {1, 2}};
    const SegmentedPath other_T{{0, 10, 20}, {2}};
    const SegmentedPath shorter{{0, 10}, {1}};
    EXPECT_THROW(isomorphic_path_event_check(eta, seq, a, repeated, 50, 10, 1), validation_error);
    EXPECT_THROW(isomorphic_path_event_check(eta, seq, a, other_T, 50, 10, 1), validation_error);
    EXPECT_THROW(isomorphic_path_event_check(eta, seq, a, shorter, 50, 10, 1), validation_error);
    EXPECT_NO_THROW(isomorphic_path_event_check(eta, seq, a, {{5, 15, 25}, {1, 2}}, 50, 10, 1));
}

TEST(Topology, SpreadSegmentEnds) {
    EXPECT_EQ(spread_segment_ends(8, 2), (std::vector<std::size_t>{3, 5}));
    EXPECT_EQ(spread_segment_ends(1, 2), (std::vector<std::size_t>{1}));
    EXPECT_TRUE(spread_segment_ends(0, 2).empty());
    EXPECT_EQ(spread_segment_ends(6, 1), (std::vector<std::size_t>{3}));
}

TEST(Topology, ReportOnLargeCubicGraph) {
    TopologyOptions opt;
    opt.t_max = 5;
    opt.samples = 3000;
    opt.seed = 4;
    const auto rows = topology_report(make_regular(1'000'000, 3), opt);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].mean_ball_size, 1.0);
    EXPECT_EQ(rows[0].tree_fraction, 1.0);
    for (const auto& r : rows) {
        EXPECT_NEAR(r.mean_ball_size, double((std::size_t{2} << r.t) - 1), 0.01);
        EXPECT_GT(r.tree_fraction, 0.99);
        EXPECT_GT(r.good_density, 0.99);
        EXPECT_NEAR(r.nu_power_prediction, std::pow(2.0, double(r.t + 1)), 1e-12);
    }
}
