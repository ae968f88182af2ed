#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "rodeo/harness.hpp"
#include "rodeo/random.hpp"

using namespace rodeo;

// Known-answer vectors for Philox4x32-10 from the reference implementation.
TEST(Philox, KnownAnswers) {
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
              (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                         {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                         {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalQuantile, MatchesErfInverseRelation) {
    for (double p : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999, 1 - 1e-9}) {
        const double x = normal_quantile(p);
        const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
        EXPECT_NEAR(cdf, p, 1e-9 * std::max(1.0, p)) << p;
    }
    EXPECT_DOUBLE_EQ(normal_quantile(0.5), 0.0);
    EXPECT_THROW(normal_quantile(0.0), std::domain_error);
    EXPECT_THROW(normal_quantile(1.0), std::domain_error);
}

TEST(RandomStreamTest, SameAddressSameSequence) {
    RandomStream a(42, 3, 4, 5, 1), b(42, 3, 4, 5, 1);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStreamTest, AddressComponentsSeparateStreams) {
    const auto first = [](RandomStream s) { return s.next_u64(); };
    const auto base = first(RandomStream(42, 3, 4, 5, 1));
    EXPECT_NE(base, first(RandomStream(43, 3, 4, 5, 1)));
    EXPECT_NE(base, first(RandomStream(42, 2, 4, 5, 1)));
    EXPECT_NE(base, first(RandomStream(42, 3, 5, 5, 1)));
    EXPECT_NE(base, first(RandomStream(42, 3, 4, 6, 1)));
    EXPECT_NE(base, first(RandomStream(42, 3, 4, 5, 2)));
}

TEST(RandomStreamTest, UniformIsOpenUnitInterval) {
    RandomStream r(1, 0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 1e5, 0.5, 5 * std::sqrt(1.0 / 12 / 1e5));
}

TEST(SampleTimes, DegenerateWidthCollapsesToMean) {
    RandomStream r(2, 0);
    for (double t : harness::sample_times({3.5, 1e-12}, 100, r)) EXPECT_NEAR(t, 3.5, 1e-9);
}

TEST(SampleTimes, MomentsOfAMillionDraws) {
    const double tau = 10.0, d = 7.0;
    RandomStream r(3, 0);
    const auto t = harness::sample_times({tau, d}, 1000000, r);
    double s = 0.0, s2 = 0.0;
    for (double v : t) s += v;
    const double mean = s / t.size();
    for (double v : t) s2 += (v - mean) * (v - mean);
    const double sd = std::sqrt(s2 / t.size());
    EXPECT_NEAR(mean, tau, 5 * d / 1e3);
    EXPECT_NEAR(sd, d, 0.01 * d);
}

TEST(SampleTimes, IdenticalAcrossThreads) {
    const auto draw = [] {
        RandomStream r(99, 7, 8, 9, harness::kTimesDomain);
        return harness::sample_times({1.0, 2.0}, 64, r);
    };
    const auto here = draw();
    std::vector<double> there;
    std::thread th([&] { there = draw(); });
    th.join();
    EXPECT_EQ(here, there);
}

TEST(SampleTimes, RejectsNonPositiveWidth) {
    RandomStream r(4, 0);
    EXPECT_THROW(harness::sample_times({0.0, 0.0}, 3, r), std::invalid_argument);
}
