#include "rodeo/engine.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rodeo/random.hpp"

namespace rodeo::engine {

using qcore::Complex;

RidePlan::RidePlan(const SpectralDecomposition& spectrum, StateVector initial_state,
                   double trial_energy, std::vector<double> times)
    : spectrum_(spectrum),
      initial_state_(std::move(initial_state)),
      trial_energy_(trial_energy),
      times_(std::move(times)) {
    if (times_.empty()) throw std::invalid_argument("a ride needs at least one ancilla");
    if (initial_state_.dim() != spectrum.dim()) {
        throw std::invalid_argument("initial state dimension " +
                                    std::to_string(initial_state_.dim()) +
                                    " does not match Hamiltonian dimension " +
                                    std::to_string(spectrum.dim()));
    }
    if (!initial_state_.is_normalized(1e-10)) {
        throw std::invalid_argument("initial state is not normalized");
    }
    if (ancillas() + system_qubits() > qcore::kMaxQubits) {
        throw std::invalid_argument("ancillas + system qubits exceed the " +
                                    std::to_string(qcore::kMaxQubits) + "-qubit cap");
    }
}

StateVector prepare_rider(const StateVector& initial_state, int ancillas) {
    if (ancillas < 1) throw std::invalid_argument("prepare_rider: need at least one ancilla");
    if (ancillas + initial_state.num_qubits() > qcore::kMaxQubits) {
        throw std::invalid_argument("ancillas + system qubits exceed the " +
                                    std::to_string(qcore::kMaxQubits) + "-qubit cap");
    }
    StateVector arena(ancillas);
    for (int k = 0; k < ancillas; ++k) {
        arena = qcore::apply_single_qubit_gate(std::move(arena), qcore::pauli_x(), k);
        arena = qcore::apply_single_qubit_gate(std::move(arena), qcore::hadamard(), k);
    }
    return qcore::tensor(arena, initial_state);
}

StateVector bull_cycle(StateVector state, const RidePlan& plan, int k) {
    if (k < 0 || k >= plan.ancillas()) {
        throw std::out_of_range("ancilla index " + std::to_string(k) + " out of range");
    }
    const int n = plan.ancillas();
    const int m = plan.system_qubits();
    std::vector<int> targets(static_cast<std::size_t>(m));
    std::iota(targets.begin(), targets.end(), n);
    const double t = plan.times()[static_cast<std::size_t>(k)];
    const auto u = hamiltonian::evolution_unitary(plan.spectrum(), t);
    state = qcore::apply_controlled_unitary(std::move(state), k, targets, u);
    return qcore::apply_phase(std::move(state), k, plan.trial_energy() * t);
}

RideOutcome ride(const RidePlan& plan) {
    const int n = plan.ancillas();
    StateVector state = prepare_rider(plan.initial_state(), n);
    for (int k = 0; k < n; ++k) state = bull_cycle(std::move(state), plan, k);
    for (int k = 0; k < n; ++k)
        state = qcore::apply_single_qubit_gate(std::move(state), qcore::hadamard(), k);

    RideOutcome out{std::move(state), n, {}, 0.0, 0.0};
    out.per_ancilla_z.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out.per_ancilla_z.push_back(qcore::expect_pauli_z(out.final_state, k));

    const int total = out.final_state.num_qubits();
    const int shift = total - n;
    const std::uint64_t all_ones = (std::uint64_t{1} << n) - 1;
    const auto amps = out.final_state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const std::uint64_t anc = static_cast<std::uint64_t>(i) >> shift;
        const double p = std::norm(amps[i]);
        out.product_z += (std::popcount(anc) % 2 == 0) ? p : -p;
        if (anc == all_ones) out.success_prob += p;
    }
    return out;
}

double score_mean(const RideOutcome& outcome) {
    double s = 0.0;
    for (double z : outcome.per_ancilla_z) s += z;
    return s / static_cast<double>(outcome.per_ancilla_z.size());
}

double score_product(const RideOutcome& outcome) { return outcome.product_z; }

double success_probability(const RideOutcome& outcome) { return outcome.success_prob; }

std::vector<ShotCounts> shot_estimate(const RideOutcome& outcome, std::int64_t shots,
                                      RandomStream& rng) {
    if (shots < 1) throw std::invalid_argument("shot_estimate: shots must be >= 1");
    const int total = outcome.final_state.num_qubits();
    const qcore::BitstringSampler sampler(outcome.final_state);
    std::vector<ShotCounts> counts(static_cast<std::size_t>(outcome.ancillas));
    for (std::int64_t s = 0; s < shots; ++s) {
        const std::uint64_t bits = sampler.sample(rng);
        for (int k = 0; k < outcome.ancillas; ++k) {
            if (qcore::qubit_bit(bits, k, total))
                ++counts[static_cast<std::size_t>(k)].n_down;
            else
                ++counts[static_cast<std::size_t>(k)].n_up;
        }
    }
    return counts;
}

int sample_product(const RideOutcome& outcome, RandomStream& rng) {
    const std::uint64_t bits = qcore::sample_bitstring(outcome.final_state, rng);
    const int shift = outcome.final_state.num_qubits() - outcome.ancillas;
    return std::popcount(bits >> shift) % 2 == 0 ? 1 : -1;
}

}  // namespace rodeo::engine
