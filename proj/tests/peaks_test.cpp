#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rodeo/harness.hpp"
#include "rodeo/oracle.hpp"
#include "rodeo/peaks.hpp"
#include "rodeo/random.hpp"

using namespace rodeo;
using namespace rodeo::harness;

namespace {

constexpr double kPi = std::numbers::pi;

// Noise-free table straight from the closed form.
ScanResult exact_table(const oracle::SpectralWeights& w, double lo, double hi, double de,
                       GaussianTimeParams p) {
    ScanResult r;
    r.time = p;
    const auto n = static_cast<int>(std::round((hi - lo) / de));
    for (int i = 0; i <= n; ++i) {
        const double e = lo + i * de;
        r.energies.push_back(e);
        r.mean_neg_h.push_back(-oracle::mean_score(w, e, p));
        r.std_error.push_back(0.0);
        r.n_rounds.push_back(50);
    }
    return r;
}

}  // namespace

TEST(Peaks, FlatTableHasNone) {
    ScanResult r;
    r.time = {0.0, 10.0};
    for (int i = 0; i <= 100; ++i) {
        r.energies.push_back(-1.0 + 0.02 * i);
        r.mean_neg_h.push_back(0.0);
        r.std_error.push_back(0.0);
        r.n_rounds.push_back(10);
    }
    EXPECT_TRUE(detect_peaks(r).empty());
    EXPECT_TRUE(detect_peaks(ScanResult{{}, {}, {}, {}, {0.0, 1.0}, {}}).empty());
}

TEST(Peaks, ExactEigenstateGivesOnePeak) {
    const auto t = exact_table(oracle::one_spin_weights(0.0, 1.0), -2, 2, 0.02, {10.0, 7.0});
    const auto peaks = detect_peaks(t);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_NEAR(peaks[0].energy, -1.0, 1e-6);
    EXPECT_NEAR(peaks[0].height, 1.0, 1e-6);
    EXPECT_GT(peaks[0].width, 0.0);
}

TEST(Peaks, ExactMixtureHeightsAreLevelWeights) {
    const double theta = 2 * kPi / 5;
    const auto t = exact_table(oracle::one_spin_weights(theta, 1.0), -2, 2, 0.02, {10.0, 7.0});
    const auto peaks = detect_peaks(t);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].height, std::pow(std::cos(theta / 2), 2), 1e-3);
    EXPECT_NEAR(peaks[1].height, std::pow(std::sin(theta / 2), 2), 1e-3);
}

TEST(Peaks, OffGridLevelIsLocated) {
    const oracle::SpectralWeights w({-0.613, 0.877}, {0.4, 0.6});
    const auto peaks = detect_peaks(exact_table(w, -2, 2, 0.02, {0.0, 10.0}));
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].energy, -0.613, 0.005);
    EXPECT_NEAR(peaks[1].energy, 0.877, 0.005);
    EXPECT_NEAR(peaks[0].height, 0.4, 0.005);
    EXPECT_NEAR(peaks[1].height, 0.6, 0.005);
}

TEST(Peaks, ThresholdAndMergeRadius) {
    const oracle::SpectralWeights w({-1.0, -0.65, 1.0}, {0.45, 0.47, 0.08});
    const auto t = exact_table(w, -2, 2, 0.01, {0.0, 10.0});
    // Default radius 3/d = 0.3 keeps the two left levels apart; the 0.08 level
    // is under the default threshold.
    EXPECT_EQ(detect_peaks(t).size(), 2u);
    PeakOptions wide;
    wide.merge_radius = 0.5;
    EXPECT_EQ(detect_peaks(t, wide).size(), 1u);
    PeakOptions low;
    low.threshold = 0.05;
    EXPECT_EQ(detect_peaks(t, low).size(), 3u);
}

TEST(Peaks, SimulatedEqualSplit) {
    RodeoConfig c;
    c.model = ZeemanModel{1, 1.0};
    c.states = {AnglesState{{{kPi / 2, 0.0}}}};
    c.e_min = -2;
    c.e_max = 2;
    c.de = 0.02;
    c.time = {0.0, 10.0};
    c.rounds = 50;
    c.seed = 7919;
    const auto s = run_scan(c).scans[0];
    ASSERT_EQ(s.peaks.size(), 2u);
    double sum = 0.0;
    for (const auto& p : s.peaks) {
        EXPECT_NEAR(std::abs(p.energy), 1.0, 0.02);
        EXPECT_NEAR(p.height, 0.5, 0.05);
        sum += p.height;
    }
    EXPECT_NEAR(sum, 1.0, 0.05);
}

TEST(Peaks, SharpScansMatchTheSpectrum) {
    // Two-spin Zeeman, τ=0, d=10: peaks must sit within ΔE + 1/d of an
    // eigenvalue and every level of weight >= 0.2 must be found.
    RandomStream rng(7919, 0);
    for (int trial = 0; trial < 10; ++trial) {
        RodeoConfig c;
        c.model = ZeemanModel{2, 0.7};
        const double t1 = kPi * rng.uniform(), t2 = kPi * rng.uniform();
        c.states = {AnglesState{{{t1, 0.0}, {t2, 0.0}}}};
        c.e_min = -2;
        c.e_max = 2;
        c.de = 0.02;
        c.time = {0.0, 10.0};
        c.rounds = 60;
        c.seed = 7919 + static_cast<std::uint64_t>(trial);
        const auto s = run_scan(c).scans[0];
        const auto w = oracle::two_spin_weights(t1, t2, 0.7);
        const double levels[] = {-1.4, 0.0, 1.4};
        const double weight[] = {w.weights()[0], w.weights()[1] + w.weights()[2], w.weights()[3]};
        for (const auto& p : s.peaks) {
            double best = 1e9;
            for (double l : levels) best = std::min(best, std::abs(p.energy - l));
            EXPECT_LE(best, 0.02 + 0.1) << "trial " << trial << " peak " << p.energy;
        }
        for (int l = 0; l < 3; ++l) {
            if (weight[l] < 0.2) continue;
            const bool found = std::any_of(s.peaks.begin(), s.peaks.end(), [&](const Peak& p) {
                return std::abs(p.energy - levels[l]) <= 0.12;
            });
            EXPECT_TRUE(found) << "trial " << trial << " level " << levels[l];
        }
    }
}

TEST(MatchedFilterTest, AmplitudeOfExactLevelIsItsWeight) {
    const oracle::SpectralWeights w({0.0}, {1.0});
    const auto t = exact_table(w, -1, 1, 0.01, {3.0, 8.0});
    const auto mf = matched_filter(t);
    EXPECT_NEAR(mf.amplitude[100], 1.0, 1e-12);
    EXPECT_EQ(mf.amplitude_stderr[100], 0.0);
}
