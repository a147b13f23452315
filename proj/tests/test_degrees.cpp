#include <gtest/gtest.h>

#include "dcm/degrees.hpp"

using namespace dcm;

TEST(MakeRegular, BuildsEqualDegrees) {
    const auto seq = make_regular(4, 3);
    EXPECT_EQ(seq.n(), 4u);
    EXPECT_EQ(seq.ell(), 12u);
    EXPECT_EQ(seq.m(), 6u);
    for (vertex v = 0; v < 4; ++v) EXPECT_EQ(seq.degree(v), 3u);
}

TEST(MakeRegular, RejectsOddHalfEdgeCount) { EXPECT_THROW(make_regular(3, 3), validation_error); }

TEST(MakeRegular, RejectsDegreeBelowTwo) {
    EXPECT_THROW(make_regular(4, 1), validation_error);
    EXPECT_THROW(make_regular(4, 0), validation_error);
}

TEST(MakeRegular, RejectsSingleVertex) { EXPECT_THROW(make_regular(1, 4), validation_error); }

TEST(LoadDegrees, ParsesWhitespaceAndNewlines) {
    const auto seq = load_degrees("3 3\n2\t2\n\n4 2");
    EXPECT_EQ(seq.degrees(), (std::vector<std::uint32_t>{3, 3, 2, 2, 4, 2}));
    EXPECT_EQ(seq.ell(), 16u);
}

TEST(LoadDegrees, RejectsBadInput) {
    EXPECT_THROW(load_degrees("3 x 3"), validation_error);
    EXPECT_THROW(load_degrees("3 2.5 3"), validation_error);
    EXPECT_THROW(load_degrees("3 -3"), validation_error);
    EXPECT_THROW(load_degrees("3 1 2"), validation_error);
    EXPECT_THROW(load_degrees("3 2 2"), validation_error);
    EXPECT_THROW(load_degrees(""), validation_error);
}

TEST(DegreeSequence, HalfEdgesAreContiguousPerVertex) {
    const DegreeSequence seq({2, 3, 3});
    EXPECT_EQ(seq.owner(0), 0u);
    EXPECT_EQ(seq.owner(1), 0u);
    EXPECT_EQ(seq.owner(2), 1u);
    EXPECT_EQ(seq.owner(4), 1u);
    EXPECT_EQ(seq.owner(5), 2u);
    EXPECT_EQ(seq.owner(7), 2u);
    const auto r = seq.siblings_range(1);
    EXPECT_EQ(r.first, 2u);
    EXPECT_EQ(r.last, 5u);
    EXPECT_EQ(seq.out_degree(3), 2u);
    EXPECT_EQ(seq.out_degree(0), 1u);
    EXPECT_TRUE(seq.are_siblings(2, 4));
    EXPECT_FALSE(seq.are_siblings(2, 2));
    EXPECT_FALSE(seq.are_siblings(1, 2));
}

TEST(Regularity, CubicHasNuTwo) {
    const auto r = regularity(make_regular(10, 3));
    EXPECT_DOUBLE_EQ(r.nu, 2.0);
    EXPECT_EQ(r.max_degree, 3u);
    EXPECT_EQ(r.min_degree, 3u);
    EXPECT_TRUE(r.ell_even);
    EXPECT_TRUE(r.min_degree_ok);
}

TEST(Regularity, MixedDegrees) {
    // sum d(d-1) = 2 + 6 + 12 + 6 = 26, sum d = 12
    const auto r = regularity(DegreeSequence({2, 3, 4, 3}));
    EXPECT_DOUBLE_EQ(r.nu, 26.0 / 12.0);
}

TEST(DegreeSequence, DigestIsStableAndDiscriminating) {
    const auto a = make_regular(6, 2);
    const auto b = make_regular(6, 2);
    const auto c = make_regular(4, 3);
    EXPECT_EQ(a.digest(), b.digest());
    EXPECT_NE(a.digest(), c.digest());
    EXPECT_EQ(a.digest().size(), 16u);
    EXPECT_EQ(a, b);
}
