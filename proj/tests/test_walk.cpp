#include <gtest/gtest.h>

#include "dcm/exact_oracle.hpp"
#include "dcm/walk.hpp"

using namespace dcm;

TEST(WalkStep, NeverBacktracks) {
    const DegreeSequence seq({2, 3, 4, 3, 2, 6});
    auto gen = make_stream(1, 0);
    const auto c = sample_configuration(seq, gen);
    for (half_edge x = 0; x < c.ell(); ++x) {
        for (int i = 0; i < 50; ++i) {
            const half_edge y = walk_step(c, seq, x, gen);
            ASSERT_TRUE(is_nonbacktracking_step(c, seq, x, y));
            ASSERT_NE(y, c[x]);
        }
    }
}

TEST(WalkStep, DegreeTwoIsDeterministic) {
    const auto seq = make_regular(3, 2);
    const Configuration c({2, 4, 0, 5, 1, 3});
    auto gen = make_stream(2, 0);
    // c[0] = 2, sibling of 2 is 3
    EXPECT_EQ(walk_step(c, seq, 0, gen), 3u);
}

TEST(TransitionMatrix, IsDoublyStochasticWithReversalSymmetry) {
    for (const auto& degrees : std::vector<std::vector<std::uint32_t>>{{2, 2, 2}, {3, 3, 2}, {2, 2, 2, 2}, {4, 3, 3}, {3, 3, 2, 2}}) {
        const DegreeSequence seq(degrees);
        const auto space = enumerate_configurations(seq);
        for (const auto& c : space.configurations) {
            const auto p = transition_matrix(c, seq);
            for (std::size_t x = 0; x < c.ell(); ++x) {
                double row = 0.0;
                double col = 0.0;
                for (std::size_t y = 0; y < c.ell(); ++y) {
                    row += p(x, y);
                    col += p(y, x);
                    ASSERT_DOUBLE_EQ(p(x, y), p(c[y], c[x]));
                }
                ASSERT_NEAR(row, 1.0, 1e-12);
                ASSERT_NEAR(col, 1.0, 1e-12);
            }
        }
    }
}

TEST(TransitionMatrix, RefusesLargeInstances) {
    const auto seq = make_regular(2000, 3);
    auto gen = make_stream(3, 0);
    const auto c = sample_configuration(seq, gen);
    EXPECT_THROW(transition_matrix(c, seq), scale_error);
    EXPECT_NO_THROW(transition_matrix(c, seq, 6000));
}

TEST(RunJoint, TauMatchesRescanOverManyTrajectories) {
    const DegreeSequence seq({3, 3, 3, 3, 2, 2, 4, 4, 3, 3});
    auto gen = make_stream(4, 0);
    const auto eta = sample_configuration(seq, gen);
    std::size_t stopped = 0;
    for (int i = 0; i < 10'000; ++i) {
        const auto x0 = static_cast<half_edge>(uniform_below(gen, seq.ell()));
        const auto traj = run_joint(eta, seq, x0, 2, 8, gen);
        ASSERT_EQ(traj.positions.size(), 9u);
        ASSERT_EQ(traj.trace.steps(), 8u);
        ASSERT_EQ(traj.tau, rescan_tau(traj.positions, traj.trace));
        stopped += traj.tau.has_value();
    }
    EXPECT_GT(stopped, 0u);
    EXPECT_LT(stopped, 10'000u);
}

TEST(RunJoint, UnstoppedStepsFollowTheInitialConfiguration) {
    const auto seq = make_regular(200, 3);
    auto gen = make_stream(5, 0);
    const auto eta = sample_configuration(seq, gen);
    for (int i = 0; i < 2000; ++i) {
        const auto traj = run_joint(eta, seq, 0, 5, 10, gen);
        const std::size_t until = traj.tau ? *traj.tau : 11;
        for (std::size_t t = 1; t < until; ++t) {
            ASSERT_TRUE(is_nonbacktracking_step(eta, seq, traj.positions[t - 1], traj.positions[t]));
        }
    }
}

TEST(RunJoint, KEqualsMStopsAtOnce) {
    const auto seq = make_regular(10, 3);
    auto gen = make_stream(6, 0);
    const auto eta = sample_configuration(seq, gen);
    const auto traj = run_joint(eta, seq, 3, seq.m(), 4, gen);
    ASSERT_TRUE(traj.tau.has_value());
    EXPECT_EQ(*traj.tau, 1u);
}

TEST(FullJointSampler, ReproducesRunJointDrawForDraw) {
    const auto seq = make_regular(40, 3);
    auto gen = make_stream(7, 0);
    const auto eta = sample_configuration(seq, gen);
    FullJointSampler sampler(eta, seq, 4);
    std::vector<half_edge> positions;
    for (std::uint64_t r = 0; r < 500; ++r) {
        auto g1 = make_stream(99, r);
        auto g2 = make_stream(99, r);
        const auto traj = run_joint(eta, seq, 5, 4, 12, g1);
        const auto tau = sampler.run(5, 12, g2, positions);
        ASSERT_EQ(traj.positions, positions);
        ASSERT_EQ(traj.tau, tau);
    }
}
