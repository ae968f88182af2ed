#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rodeo/engine.hpp"
#include "rodeo/hamiltonian.hpp"
#include "rodeo/oracle.hpp"
#include "rodeo/random.hpp"

using namespace rodeo;
using namespace rodeo::engine;
using qcore::Complex;
using qcore::ComplexMatrix;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector angle_state(double theta) {
    return qcore::apply_single_qubit_gate(StateVector(1), qcore::u3(theta, 0, 0), 0);
}

// Final amplitudes written out by hand: ancilla k contributes (1 - e^{iΔt_k})/2
// when it reads 0 and (1 + e^{iΔt_k})/2 when it reads 1, per eigencomponent.
std::vector<Complex> expected_final(const SpectralDecomposition& d, const StateVector& psi,
                                    double e, const std::vector<double>& times) {
    const std::size_t n = times.size();
    const std::size_t dim = d.dim();
    std::vector<Complex> out((std::size_t{1} << n) * dim);
    for (std::size_t x = 0; x < dim; ++x) {
        Complex cx{};
        for (std::size_t r = 0; r < dim; ++r) cx += std::conj(d.eigenvectors(r, x)) * psi[r];
        const double delta = e - d.eigenvalues[x];
        for (std::size_t y = 0; y < (std::size_t{1} << n); ++y) {
            Complex amp = cx;
            for (std::size_t k = 0; k < n; ++k) {
                const bool one = (y >> (n - 1 - k)) & 1U;
                const Complex ph = std::exp(Complex(0, delta * times[k]));
                amp *= one ? (1.0 + ph) / 2.0 : (1.0 - ph) / 2.0;
            }
            for (std::size_t s = 0; s < dim; ++s) out[y * dim + s] += amp * d.eigenvectors(s, x);
        }
    }
    return out;
}

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// |<a|b>| for normalized states; 1 means equal up to global phase.
double fidelity(const StateVector& a, const StateVector& b) {
    Complex ip{};
    for (std::size_t i = 0; i < a.dim(); ++i) ip += std::conj(a[i]) * b[i];
    return std::abs(ip);
}

}  // namespace

TEST(PrepareRider, SingleAncillaGround) {
    const auto s = prepare_rider(StateVector(1), 1);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(s[0].real(), r, 1e-15);
    EXPECT_NEAR(std::abs(s[1]), 0.0, 1e-15);
    EXPECT_NEAR(s[2].real(), -r, 1e-15);
    EXPECT_NEAR(std::abs(s[3]), 0.0, 1e-15);
}

TEST(PrepareRider, TwoSpinProductAmplitudes) {
    const double t1 = 0.8, t2 = 2.1, r = 1.0 / std::sqrt(2.0);
    const auto psi = qcore::tensor(angle_state(t1), angle_state(t2));
    const auto s = prepare_rider(psi, 1);
    const double a1[] = {std::cos(t1 / 2), std::sin(t1 / 2)};
    const double a2[] = {std::cos(t2 / 2), std::sin(t2 / 2)};
    for (int y = 0; y < 2; ++y)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                EXPECT_NEAR(s[y * 4 + i * 2 + j].real(), (y ? -r : r) * a1[i] * a2[j], 1e-15);
}

TEST(PrepareRider, EachAncillaIsMinus) {
    const auto psi = qcore::tensor(angle_state(0.3), angle_state(1.7));
    auto s = prepare_rider(psi, 3);
    for (int k = 0; k < 3; ++k) s = qcore::apply_single_qubit_gate(s, qcore::hadamard(), k);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(qcore::expect_pauli_z(s, k), -1.0, 1e-12);
}

TEST(PrepareRider, EnforcesQubitCap) {
    EXPECT_THROW(prepare_rider(StateVector(2), 19), std::invalid_argument);
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({2, 1.0}));
    EXPECT_THROW(RidePlan(d, StateVector(2), 0.0, std::vector<double>(19, 1.0)),
                 std::invalid_argument);
    EXPECT_THROW(RidePlan(d, StateVector(2), 0.0, {}), std::invalid_argument);
    EXPECT_THROW(RidePlan(d, StateVector(1), 0.0, {1.0}), std::invalid_argument);
    EXPECT_THROW(RidePlan(d, StateVector(2, std::vector<Complex>(4, 1.0)), 0.0, {1.0}),
                 std::invalid_argument);
}

TEST(BullCycle, ResonantEigenstateLeavesAncillaUnchanged) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({2, 0.7}));
    const auto psi = StateVector::basis(2, 0);  // eigenvalue -1.4
    const RidePlan plan(d, psi, -1.4, {2.7, -0.4});
    const auto before = prepare_rider(psi, 2);
    const auto after = bull_cycle(bull_cycle(before, plan, 0), plan, 1);
    EXPECT_NEAR(fidelity(before, after), 1.0, 1e-12);
}

TEST(BullCycle, ZeroTimeIsIdentity) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    const RidePlan plan(d, angle_state(1.0), 0.37, {0.0});
    const auto before = prepare_rider(plan.initial_state(), 1);
    EXPECT_LT(max_diff(before.amplitudes(), bull_cycle(before, plan, 0).amplitudes()), 1e-15);
    EXPECT_THROW(bull_cycle(before, plan, 1), std::out_of_range);
}

TEST(BullCycle, OneSpinHandAmplitudes) {
    const double theta = 1.3, b = 1.0, e = 0.25, t = 2.2, r = 1.0 / std::sqrt(2.0);
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, b}));
    const RidePlan plan(d, angle_state(theta), e, {t});
    const auto s = bull_cycle(prepare_rider(plan.initial_state(), 1), plan, 0);
    const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
    EXPECT_LT(std::abs(s[0] - r * c), 1e-12);
    EXPECT_LT(std::abs(s[1] - r * sn), 1e-12);
    EXPECT_LT(std::abs(s[2] + r * c * std::exp(Complex(0, (e + b) * t))), 1e-12);
    EXPECT_LT(std::abs(s[3] + r * sn * std::exp(Complex(0, (e - b) * t))), 1e-12);
}

TEST(Ride, ResonantEigenstate) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    for (double t : {0.1, 1.0, 7.3, -4.0}) {
        const auto out = ride(RidePlan(d, StateVector::basis(1, 1), 1.0, {t}));
        EXPECT_NEAR(out.success_prob, 1.0, 1e-12);
        EXPECT_NEAR(out.per_ancilla_z[0], -1.0, 1e-12);
    }
}

TEST(Ride, EigenstateSuccessIsCosineSquared) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    const double e = 0.3, t = 1.9, delta = e - (-1.0);
    const auto out = ride(RidePlan(d, StateVector::basis(1, 0), e, {t}));
    EXPECT_NEAR(out.success_prob, std::pow(std::cos(delta * t / 2), 2), 1e-12);
}

TEST(Ride, OneSpinOutcomeTable) {
    const double theta = 0.9, e = -0.6, t = 3.1;
    const double w[] = {std::pow(std::cos(theta / 2), 2), std::pow(std::sin(theta / 2), 2)};
    const double eig[] = {-1.0, 1.0};
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    const auto out = ride(RidePlan(d, angle_state(theta), e, {t}));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double c = std::cos((e - eig[j]) * t / 2), s = std::sin((e - eig[j]) * t / 2);
            const double expected = w[j] * (i == 1 ? c * c : s * s);
            EXPECT_NEAR(std::norm(out.final_state[i * 2 + j]), expected, 1e-12);
        }
    }
}

TEST(Ride, FinalAmplitudesMatchClosedFormOnRandomHermitian) {
    RandomStream rng(31, 0);
    for (int trial = 0; trial < 30; ++trial) {
        ComplexMatrix a(4);
        for (std::size_t r = 0; r < 4; ++r) {
            a(r, r) = rng.normal();
            for (std::size_t c = r + 1; c < 4; ++c) {
                a(r, c) = Complex(rng.normal(), rng.normal());
                a(c, r) = std::conj(a(r, c));
            }
        }
        const auto d = hamiltonian::spectral_decompose(hamiltonian::HermitianOperator(a, "r"));
        std::vector<Complex> amps(4);
        double norm = 0.0;
        for (auto& c : amps) {
            c = {rng.normal(), rng.normal()};
            norm += std::norm(c);
        }
        for (auto& c : amps) c /= std::sqrt(norm);
        const StateVector psi(2, amps);
        const int n = 1 + trial % 3;
        std::vector<double> times(static_cast<std::size_t>(n));
        for (double& t : times) t = 2 * rng.normal();
        const double e = rng.normal();
        const auto out = ride(RidePlan(d, psi, e, times));
        const auto expected = expected_final(d, psi, e, times);
        EXPECT_LT(max_diff(out.final_state.amplitudes(), expected), 1e-10);
    }
}

TEST(Score, PlusStateMean) {
    const double b = 1.3, e = 0.2, t = 0.9;
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, b}));
    const auto out = ride(RidePlan(d, angle_state(kPi / 2), e, {t}));
    EXPECT_NEAR(score_mean(out), -0.5 * std::cos((e + b) * t) - 0.5 * std::cos((e - b) * t),
                1e-12);
}

TEST(Score, PsiMinusGivesMinusCosine) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({2, 0.7}));
    const auto psi = oracle::bell_state(oracle::BellState::PsiMinus);
    for (double e : {-1.0, 0.0, 0.45})
        for (double t : {0.3, 2.0, 11.0}) {
            const auto out = ride(RidePlan(d, psi, e, {t}));
            EXPECT_NEAR(score_mean(out), -std::cos(e * t), 1e-12);
        }
}

TEST(Score, ProductObservable) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    const auto one = ride(RidePlan(d, angle_state(0.7), 0.1, {1.4}));
    EXPECT_NEAR(score_product(one), score_mean(one), 1e-12);

    const auto two = ride(RidePlan(d, StateVector::basis(1, 0), -1.0, {0.5, 3.0}));
    EXPECT_NEAR(score_product(two), 1.0, 1e-12);

    // Δt = π for a single ancilla.
    const auto flip = ride(RidePlan(d, StateVector::basis(1, 0), 0.0, {kPi}));
    EXPECT_NEAR(score_product(flip), 1.0, 1e-12);
}

TEST(Success, DetunedHalfTurnIsZero) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    const auto out = ride(RidePlan(d, StateVector::basis(1, 0), 0.0, {kPi}));
    EXPECT_NEAR(success_probability(out), 0.0, 1e-12);
}

TEST(Success, GeneralStateBruteForce) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({2, 0.6}));
    const auto psi = qcore::tensor(angle_state(0.4), angle_state(2.0));
    const std::vector<double> times{0.7, -1.2, 2.5};
    const double e = 0.33;
    const auto out = ride(RidePlan(d, psi, e, times));
    double expected = 0.0;
    for (std::size_t x = 0; x < 4; ++x) {
        double p = std::norm(psi[x]);
        for (double t : times) p *= std::pow(std::cos((e - d.eigenvalues[x]) * t / 2), 2);
        expected += p;
    }
    EXPECT_NEAR(success_probability(out), expected, 1e-12);
}

TEST(Shots, ResonantAncillaAlwaysReadsOne) {
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    const auto out = ride(RidePlan(d, StateVector::basis(1, 0), -1.0, {2.0}));
    RandomStream rng(1, 2);
    const auto c = shot_estimate(out, 1000, rng);
    EXPECT_EQ(c[0].n_down, 1000);
    EXPECT_EQ(c[0].n_up, 0);
}

TEST(Shots, BalancedAncillaAndConservation) {
    // Δt = π/2 gives <σ_z> = 0.
    const auto d = hamiltonian::spectral_decompose(hamiltonian::zeeman({1, 1.0}));
    const auto out = ride(RidePlan(d, StateVector::basis(1, 0), 0.0, {kPi / 2, 1.1}));
    ASSERT_NEAR(out.per_ancilla_z[0], 0.0, 1e-12);
    RandomStream rng(3, 4);
    const auto c = shot_estimate(out, 100000, rng);
    for (const auto& k : c) EXPECT_EQ(k.n_up + k.n_down, 100000);
    EXPECT_LT(std::abs(double(c[0].n_up - c[0].n_down) / 1e5), 0.016);
    EXPECT_THROW(shot_estimate(out, 0, rng), std::invalid_argument);
}
