#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rodeo/harness.hpp"
#include "rodeo/oracle.hpp"

using namespace rodeo;
using namespace rodeo::harness;

namespace {

constexpr double kPi = std::numbers::pi;

RodeoConfig one_spin(double theta, int rounds, std::uint64_t seed) {
    RodeoConfig c;
    c.model = ZeemanModel{1, 1.0};
    c.states = {AnglesState{{{theta, 0.0}}}};
    c.e_min = -2.0;
    c.e_max = 2.0;
    c.de = 0.02;
    c.time = {10.0, 7.0};
    c.rounds = rounds;
    c.seed = seed;
    return c;
}

RideRecord exact_record(std::int64_t grid, double score) {
    RideRecord r;
    r.grid_index = grid;
    r.energy = 0.1 * static_cast<double>(grid);
    r.times = {1.0};
    r.zeta = std::vector<double>{score};
    return r;
}

}  // namespace

TEST(Grid, InclusiveEndpoints) {
    const auto c = one_spin(0.0, 1, 0);
    const auto g = energy_grid(c);
    ASSERT_EQ(g.size(), 201u);
    EXPECT_EQ(g.front(), -2.0);
    EXPECT_NEAR(g.back(), 2.0, 1e-12);
    EXPECT_EQ(grid_intervals(c), 200u);
}

TEST(Config, Validation) {
    auto c = one_spin(0.0, 1, 0);
    c.e_max = c.e_min;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = one_spin(0.0, 1, 0);
    c.de = 0.0;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = one_spin(0.0, 1, 0);
    c.de = 10.0;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = one_spin(0.0, 0, 0);
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = one_spin(0.0, 1, 0);
    c.n_psi = 2;
    EXPECT_THROW(validate(c), std::invalid_argument);
    c = one_spin(0.0, 1, 0);
    c.time.d = -1.0;
    EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(States, Builders) {
    const auto psi = build_state(AnglesState{{{kPi, 0.0}, {0.0, 0.0}}}, 2);
    EXPECT_NEAR(std::abs(psi[2] - 1.0), 0.0, 1e-15);
    EXPECT_THROW(build_state(AnglesState{{{0.0, 0.0}}}, 2), std::invalid_argument);
    EXPECT_THROW(build_state(BellStateSpec{}, 1), std::invalid_argument);
    EXPECT_THROW(build_state(AmplitudeState{{1.0, 1.0}}, 1), std::invalid_argument);
    EXPECT_THROW(build_state(AmplitudeState{{1.0}}, 1), std::invalid_argument);
    const auto mix = build_state(MixState{oracle::BellFamily::Phi, kPi / 5}, 2);
    EXPECT_NEAR(std::norm(mix[0]), std::pow(std::cos(kPi / 5), 2), 1e-15);
    EXPECT_NEAR(std::norm(mix[3]), std::pow(std::sin(kPi / 5), 2), 1e-15);
    EXPECT_EQ(parse_bell_name(bell_name(oracle::BellState::PsiMinus)), oracle::BellState::PsiMinus);
    EXPECT_THROW(parse_bell_name("phi"), std::invalid_argument);
}

TEST(States, RandomAnglesAreSeededAndInRange) {
    const auto a = random_angles_state(5, 3, 2);
    EXPECT_EQ(a, random_angles_state(5, 3, 2));
    EXPECT_NE(a, random_angles_state(5, 4, 2));
    for (const auto& [theta, phi] : a.angles) {
        EXPECT_GE(theta, 0.0);
        EXPECT_LE(theta, kPi);
        EXPECT_GE(phi, 0.0);
        EXPECT_LT(phi, 2 * kPi);
    }
}

TEST(Aggregate, SingleRecord) {
    const auto r = aggregate({exact_record(0, -0.4)}, {0.0, 1.0});
    ASSERT_EQ(r.mean_neg_h.size(), 1u);
    EXPECT_DOUBLE_EQ(r.mean_neg_h[0], 0.4);
    EXPECT_EQ(r.std_error[0], 0.0);
    EXPECT_EQ(r.n_rounds[0], 1);
}

TEST(Aggregate, EqualRecordsHaveZeroStderr) {
    const auto r = aggregate({exact_record(0, 0.3), exact_record(0, 0.3), exact_record(0, 0.3)},
                             {0.0, 1.0});
    EXPECT_EQ(r.std_error[0], 0.0);
}

TEST(Aggregate, KnownValues) {
    const auto r = aggregate({exact_record(0, -1.0), exact_record(0, 0.0), exact_record(0, 1.0),
                              exact_record(1, 0.5)},
                             {0.0, 1.0});
    ASSERT_EQ(r.energies.size(), 2u);
    EXPECT_NEAR(r.mean_neg_h[0], 0.0, 1e-15);
    EXPECT_NEAR(r.std_error[0], std::sqrt((2.0 / 3.0) / 3.0), 1e-15);
    EXPECT_EQ(r.n_rounds[0], 3);
    EXPECT_DOUBLE_EQ(r.mean_neg_h[1], -0.5);
}

TEST(Aggregate, ShotRecordsUsePerRideRatio) {
    RideRecord a = exact_record(0, 0.0), b = exact_record(0, 0.0);
    a.zeta = std::vector<engine::ShotCounts>{{75, 25}, {50, 50}};  // 0.5, 0.0
    a.times = {1.0, 2.0};
    b.zeta = std::vector<engine::ShotCounts>{{0, 100}, {10, 90}};  // -1.0, -0.8
    b.times = {1.0, 2.0};
    EXPECT_DOUBLE_EQ(ride_score(a), 0.25);
    EXPECT_DOUBLE_EQ(ride_score(b), -0.9);
    const auto r = aggregate({a, b}, {0.0, 1.0});
    EXPECT_NEAR(r.mean_neg_h[0], 0.325, 1e-15);
}

TEST(RunScan, RideCountAndOrder) {
    auto c = one_spin(0.5, 7, 3);
    c.n_psi = 3;
    c.states.clear();
    c.ancillas = 2;
    std::vector<RideRecord> records;
    const auto out = run_scan(c, [&](const RideRecord& r) { records.push_back(r); });
    const std::int64_t g = static_cast<std::int64_t>(energy_grid(c).size());
    EXPECT_EQ(out.ride_count, g * 7 * 3);
    ASSERT_EQ(static_cast<std::int64_t>(records.size()), out.ride_count);
    ASSERT_EQ(out.scans.size(), 3u);
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        EXPECT_EQ(r.ride_index, static_cast<std::int64_t>(k));
        EXPECT_EQ(r.ride_index, (r.psi_index * g + r.grid_index) * 7 + r.round);
        EXPECT_EQ(r.times.size(), 2u);
    }
    EXPECT_EQ(records.front().psi, StateSpec{random_angles_state(3, 0, 1)});
}

TEST(RunScan, IdenticalAcrossThreadCounts) {
    auto c = one_spin(1.0, 5, 11);
    c.shots = 16;
    std::vector<RideRecord> ref;
    c.threads = 1;
    const auto a = run_scan(c, [&](const RideRecord& r) { ref.push_back(r); });
    for (int threads : {2, 3, 8}) {
        c.threads = threads;
        std::vector<RideRecord> got;
        const auto b = run_scan(c, [&](const RideRecord& r) { got.push_back(r); });
        EXPECT_EQ(got, ref);
        EXPECT_EQ(b.scans[0].mean_neg_h, a.scans[0].mean_neg_h);
        EXPECT_EQ(b.scans[0].std_error, a.scans[0].std_error);
    }
}

TEST(RunScan, ShotModeConservesCounts) {
    auto c = one_spin(1.0, 2, 12);
    c.shots = 1024;
    c.ancillas = 3;
    run_scan(c, [&](const RideRecord& r) {
        ASSERT_TRUE(r.is_shot_mode());
        EXPECT_EQ(r.shots, 1024);
        for (const auto& k : std::get<1>(r.zeta)) EXPECT_EQ(k.n_up + k.n_down, 1024);
    });
}

TEST(RunScan, RejectsOversizedRegister) {
    auto c = one_spin(0.0, 1, 0);
    c.model = ZeemanModel{2, 1.0};
    c.states = {AnglesState{{{0.0, 0.0}, {0.0, 0.0}}}};
    c.ancillas = 19;
    EXPECT_THROW(run_scan(c), std::invalid_argument);
    c.ancillas = 1;
    c.states = {AnglesState{{{0.0, 0.0}}}};
    EXPECT_THROW(run_scan(c), std::invalid_argument);
    c.model = CustomModel{"/nonexistent/matrix.json"};
    EXPECT_THROW(run_scan(c), std::runtime_error);
}

TEST(RunScan, EigenstatePeakReachesMaximum) {
    const auto out = run_scan(one_spin(0.0, 50, 7919));
    const auto& s = out.scans[0];
    const auto it = std::max_element(s.mean_neg_h.begin(), s.mean_neg_h.end());
    const double e_at_max = s.energies[static_cast<std::size_t>(it - s.mean_neg_h.begin())];
    EXPECT_GE(*it, 0.98);
    EXPECT_LE(std::abs(e_at_max - (-1.0)), 0.02 + 1e-12);
    // Away from the occupied level no peak is reported.
    for (const auto& p : s.peaks) EXPECT_LE(std::abs(p.energy + 1.0), 1.0);
}

TEST(RunScan, FarFieldIsSmallOnceNoiseIsAveragedOut) {
    // At 50 rounds a single point's stderr is about 0.1, so the far field is
    // checked at 2000 rounds where it is about 0.016.
    const auto out = run_scan(one_spin(0.0, 2000, 7919));
    const auto& s = out.scans[0];
    for (std::size_t i = 0; i < s.energies.size(); ++i)
        if (std::abs(s.energies[i] + 1.0) > 1.0) EXPECT_LT(s.mean_neg_h[i], 0.2) << s.energies[i];
}

TEST(RunScan, PsiMinusSinglePeakAtZero) {
    RodeoConfig c;
    c.model = ZeemanModel{2, 0.7};
    c.states = {BellStateSpec{oracle::BellState::PsiMinus}};
    c.e_min = -2.0;
    c.e_max = 2.0;
    c.de = 0.01;
    c.time = {0.0, 10.0};
    c.rounds = 60;
    c.seed = 7919;
    const auto s = run_scan(c).scans[0];
    ASSERT_EQ(s.peaks.size(), 1u);
    EXPECT_NEAR(s.peaks[0].energy, 0.0, 0.01 + 0.1);
    EXPECT_GE(s.peaks[0].height, 0.95);
}

TEST(RunScan, ConvergesToClosedForm) {
    for (double theta : {0.0, kPi / 2, 2.0}) {
        const auto c = one_spin(theta, 50, 7919);
        const auto s = run_scan(c).scans[0];
        const auto w = oracle::one_spin_weights(theta, 1.0);
        std::size_t ok = 0;
        for (std::size_t i = 0; i < s.energies.size(); ++i) {
            const double expected = -oracle::mean_score(w, s.energies[i], c.time);
            if (std::abs(s.mean_neg_h[i] - expected) <= 5 * s.std_error[i] + 1e-12) ++ok;
        }
        EXPECT_GE(static_cast<double>(ok) / s.energies.size(), 0.99) << theta;
    }
}

TEST(ScanTable, RoundTripsExactly) {
    const auto s = run_scan(one_spin(1.3, 4, 2)).scans[0];
    std::stringstream ss;
    write_scan_table(ss, s);
    const auto back = read_scan_table(ss, {0.0, 1.0});
    EXPECT_EQ(back.energies, s.energies);
    EXPECT_EQ(back.mean_neg_h, s.mean_neg_h);
    EXPECT_EQ(back.std_error, s.std_error);
    EXPECT_EQ(back.n_rounds, s.n_rounds);
    EXPECT_EQ(back.time.tau, 10.0);
    EXPECT_EQ(back.time.d, 7.0);
}

TEST(ScanTable, ReportsMalformedLine) {
    std::stringstream ss("energy,neg_h_mean,stderr,n_rounds\n0,1,0,3\n0.1,oops,0,3\n");
    try {
        read_scan_table(ss, {0.0, 1.0});
        FAIL() << "expected an error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}
