#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dcm/dynamics.hpp"
#include "dcm/exact_oracle.hpp"
#include "dcm/stats.hpp"

using namespace dcm;

TEST(RewireStep, FreesExactlyTwoKHalfEdges) {
    const auto seq = make_regular(50, 3);
    auto gen = make_stream(3, 0);
    const auto c = sample_configuration(seq, gen);
    for (std::size_t k : {2u, 5u, 30u, 75u}) {
        const auto res = rewire_step(c, k, gen);
        EXPECT_EQ(res.rewired.size(), 2 * k);
        EXPECT_TRUE(std::is_sorted(res.rewired.begin(), res.rewired.end()));
        EXPECT_EQ(std::set<half_edge>(res.rewired.begin(), res.rewired.end()).size(), 2 * k);
        EXPECT_TRUE(res.next.valid());
        EXPECT_LE(hamming(c, res.next), k);
    }
}

TEST(RewireStep, OnlyTouchesFreedHalfEdgesAndKeepsThemTogether) {
    const auto seq = make_regular(40, 4);
    auto gen = make_stream(4, 0);
    const auto c = sample_configuration(seq, gen);
    const auto res = rewire_step(c, 7, gen);
    std::vector<bool> freed(c.ell(), false);
    for (auto x : res.rewired) freed[x] = true;
    for (half_edge x = 0; x < c.ell(); ++x) {
        if (!freed[x]) {
            EXPECT_EQ(res.next[x], c[x]);
        } else {
            EXPECT_TRUE(freed[c[x]]);           // whole edges are selected
            EXPECT_TRUE(freed[res.next[x]]);    // and re-paired among themselves
        }
    }
}

TEST(RewireStep, RejectsKOutsideRange) {
    const Configuration c({1, 0, 3, 2, 5, 4});
    auto gen = make_stream(1, 0);
    EXPECT_THROW(rewire_step(c, 1, gen), validation_error);
    EXPECT_THROW(rewire_step(c, 4, gen), validation_error);
    EXPECT_NO_THROW(rewire_step(c, 3, gen));
}

TEST(RewireStep, KEqualsMResamplesUniformly) {
    const auto seq = DegreeSequence({3, 3, 2});
    const auto space = enumerate_configurations(seq);
    auto gen = make_stream(8, 0);
    std::vector<std::uint64_t> counts(space.size(), 0);
    const auto& start = space.configurations[0];
    for (int i = 0; i < 60'000; ++i) ++counts[space.index_of(rewire_step(start, seq.m(), gen).next)];
    const std::vector<double> expected(space.size(), 1.0 / static_cast<double>(space.size()));
    EXPECT_GT(chi_square_gof(counts, expected).p_value, 0.001);
}

TEST(RewireStep, OneStepLawMatchesExactKernel) {
    for (std::size_t k : {2u, 3u}) {
        const auto seq = make_regular(4, 2);
        const auto space = enumerate_configurations(seq);
        const auto q = exact_q_matrix(space, k);
        const std::size_t from = 7;
        std::vector<std::uint64_t> counts(space.size(), 0);
        auto gen = make_stream(9, k);
        EdgeRewirer rewirer;
        for (int i = 0; i < 200'000; ++i) {
            Configuration c = space.configurations[from];
            rewirer.reset(c);
            rewirer.step(c, k, gen);
            ++counts[space.index_of(c)];
        }
        std::vector<double> expected(space.size());
        for (std::size_t b = 0; b < space.size(); ++b) expected[b] = q(from, b);
        EXPECT_GT(chi_square_gof(counts, expected).p_value, 0.001) << "k = " << k;
    }
}

TEST(Evolve, InvariantsHoldOverManySteps) {
    const DegreeSequence seq({2, 3, 3, 4, 5, 3, 2, 2, 6, 2});
    auto gen = make_stream(10, 0);
    const auto c0 = sample_configuration(seq, gen);
    Configuration c = c0;
    EdgeRewirer rewirer(c);
    RewiringTrace trace(c.ell());
    const std::size_t k = 4;
    for (int t = 0; t < 1000; ++t) {
        const Configuration before = c;
        const auto& r = rewirer.step(c, k, gen);
        ASSERT_EQ(r.size(), 2 * k);
        ASSERT_TRUE(c.valid());
        ASSERT_EQ(c.ell(), seq.ell());
        ASSERT_LE(hamming(before, c), k);
        ASSERT_EQ(rewirer.edge_count(), seq.m());
        trace.record(r);
    }
    EXPECT_EQ(trace.steps(), 1000u);
    EXPECT_EQ(trace.cumulative_size(), seq.ell());
}

TEST(Evolve, TraceRecordsEachStep) {
    const auto seq = make_regular(30, 3);
    auto gen = make_stream(12, 0);
    const auto c0 = sample_configuration(seq, gen);
    auto [c, trace] = evolve(c0, 3, 5, gen);
    EXPECT_TRUE(c.valid());
    ASSERT_EQ(trace.steps(), 5u);
    std::set<half_edge> all;
    for (const auto& r : trace.per_step) {
        EXPECT_EQ(r.size(), 6u);
        all.insert(r.begin(), r.end());
    }
    EXPECT_EQ(trace.cumulative_size(), all.size());
}

TEST(AlphaToK, RoundsAndClamps) {
    EXPECT_EQ(alpha_to_k(150'000, 0.02).k, 3000u);
    EXPECT_FALSE(alpha_to_k(150'000, 0.02).adjusted);
    EXPECT_EQ(alpha_to_k(10, 0.01).k, 2u);
    EXPECT_TRUE(alpha_to_k(10, 0.01).adjusted);
    EXPECT_EQ(alpha_to_k(10, 1.0).k, 10u);
    EXPECT_EQ(alpha_to_k(7, 0.5).k, 4u);
    EXPECT_DOUBLE_EQ(alpha_to_k(7, 0.5).effective_alpha, 4.0 / 7.0);
    EXPECT_THROW(alpha_to_k(10, 0.0), validation_error);
    EXPECT_THROW(alpha_to_k(10, -0.1), validation_error);
    EXPECT_THROW(alpha_to_k(10, 1.5), validation_error);
    EXPECT_EQ(alpha_to_k(make_regular(100, 3), 0.1).k, 15u);
}
