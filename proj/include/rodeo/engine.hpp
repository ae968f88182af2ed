// One Rodeo ride on the dense simulator.
//
// Each ancilla starts in |−> (X then H from |0>), controls e^{-iHt_k} on the
// system register, receives the phase shift e^{iEt_k}, and is finally rotated
// by H. All ancillas read |1> when the trial energy matches an eigenvalue of
// the input state's support.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rodeo/hamiltonian.hpp"
#include "rodeo/qcore.hpp"

namespace rodeo {
class RandomStream;
}

namespace rodeo::engine {

using hamiltonian::SpectralDecomposition;
using qcore::StateVector;

class RidePlan {
  public:
    /// `times.size()` is the ancilla count N. Throws std::invalid_argument when
    /// N == 0, the initial state is not normalized to 1e-10, its size does not
    /// match the Hamiltonian, or N + M exceeds the qubit cap.
    RidePlan(const SpectralDecomposition& spectrum, StateVector initial_state,
             double trial_energy, std::vector<double> times);

    int ancillas() const { return static_cast<int>(times_.size()); }
    int system_qubits() const { return initial_state_.num_qubits(); }
    double trial_energy() const { return trial_energy_; }
    const std::vector<double>& times() const { return times_; }
    const SpectralDecomposition& spectrum() const { return spectrum_.get(); }
    const StateVector& initial_state() const { return initial_state_; }

  private:
    std::reference_wrapper<const SpectralDecomposition> spectrum_;
    StateVector initial_state_;
    double trial_energy_;
    std::vector<double> times_;
};

struct RideOutcome {
    StateVector final_state;
    int ancillas = 0;
    std::vector<double> per_ancilla_z;  ///< <σ_z> of each ancilla
    double product_z = 0.0;             ///< <σ_z^{⊗N} ⊗ 1^{⊗M}>
    double success_prob = 0.0;          ///< P(all ancillas read 1)
};

struct ShotCounts {
    std::int64_t n_up = 0;    ///< outcomes 0
    std::int64_t n_down = 0;  ///< outcomes 1

    friend bool operator==(const ShotCounts&, const ShotCounts&) = default;
};

/// |−>^{⊗N} ⊗ ψ_I.
StateVector prepare_rider(const StateVector& initial_state, int ancillas);

/// Controlled e^{-iHt_k} from ancilla k onto the system, then P(E t_k) on ancilla k.
StateVector bull_cycle(StateVector state, const RidePlan& plan, int k);

RideOutcome ride(const RidePlan& plan);

/// (1/N) Σ_j <σ_z>_j.
double score_mean(const RideOutcome& outcome);

double score_product(const RideOutcome& outcome);

double success_probability(const RideOutcome& outcome);

/// Per-ancilla 0/1 tallies over `shots` full-register Born samples.
std::vector<ShotCounts> shot_estimate(const RideOutcome& outcome, std::int64_t shots,
                                      RandomStream& rng);

/// One single-shot sample of the product observable: (-1)^{# ancillas reading 1}.
int sample_product(const RideOutcome& outcome, RandomStream& rng);

}  // namespace rodeo::engine
