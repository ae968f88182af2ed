// Closed-form filter responses.
//
// The per-ancilla score for fixed times is
//     h(E|t) = -Σ_x w_x (1/N) Σ_k cos[(E - E_x) t_k],
// and its average over t_k ~ Normal(τ, d²) is
//     h̄(E) = -Σ_x w_x e^{-d²(E-E_x)²/2} cos[(E - E_x) τ].
// The product observable <σ_z^{⊗N}> carries the exact (-1)^N sign and the
// N-th power of the same single-time factor.

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "rodeo/hamiltonian.hpp"
#include "rodeo/qcore.hpp"

namespace rodeo::oracle {

/// Eigenvalues paired with overlap weights |<x|ψ_I>|². Degenerate levels keep
/// separate entries.
class SpectralWeights {
  public:
    /// Throws unless sizes match, weights are >= 0 and sum to 1 within 1e-10.
    SpectralWeights(std::vector<double> eigenvalues, std::vector<double> weights);

    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }

  private:
    std::vector<double> eigenvalues_;
    std::vector<double> weights_;
};

struct GaussianTimeParams {
    double tau = 0.0;  ///< mean
    double d = 1.0;    ///< standard deviation, > 0
};

void validate(const GaussianTimeParams& p);

SpectralWeights overlaps_from_state(const qcore::StateVector& psi,
                                    const hamiltonian::SpectralDecomposition& decomp);

/// Per-ancilla mean form h(E|t). Throws on empty `times`.
double g_given_times(const SpectralWeights& w, double energy, std::span<const double> times);

/// (-1)^N Σ_x w_x Π_k cos[(E - E_x) t_k].
double g_product_given_times(const SpectralWeights& w, double energy,
                             std::span<const double> times);

/// E[cos(βt)] for t ~ Normal(τ, d²) = e^{-d²β²/2} cos(βτ).
double gaussian_cosine_average(double beta, const GaussianTimeParams& p);

/// h̄(E); independent of the ancilla count.
double mean_score(const SpectralWeights& w, double energy, const GaussianTimeParams& p);

/// Gaussian average of the product observable for N ancillas.
double product_mean_score(const SpectralWeights& w, double energy, const GaussianTimeParams& p,
                          int ancillas);

/// 1 - <g>² for the ±1-valued product observable.
double variance_product(double mean_g);

/// sqrt[(mean(x²) - mean(x)²)/n]; needs at least two samples.
double standard_error(std::span<const double> samples);

// -- model curves -----------------------------------------------------------

/// Weights of u3(θ, φ, 0)|0> on the one-spin Zeeman eigenbasis, paired with the
/// eigenvalues read off the matrix (|0> ↔ -B, |1> ↔ +B).
SpectralWeights one_spin_weights(double theta, double field);
double one_spin_curve(double theta, double field, double energy, const GaussianTimeParams& p);

/// Product state u3(θ₁)|0> ⊗ u3(θ₂)|0> on the two-spin Zeeman model.
SpectralWeights two_spin_weights(double theta1, double theta2, double field);
double two_spin_curve(double theta1, double theta2, double field, double energy,
                      const GaussianTimeParams& p);

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };
enum class BellFamily { Phi, Psi };

/// Partially entangled inputs. Φ family: cos α|00> + sin α|11>; Ψ family:
/// cos α Ψ⁺ + sin α Ψ⁻.
struct BellMix {
    BellFamily family = BellFamily::Phi;
    double alpha = 0.0;
};

using BellInput = std::variant<BellState, BellMix>;

qcore::StateVector bell_state(const BellInput& kind);
SpectralWeights bell_weights(const BellInput& kind, double field);
double bell_curve(const BellInput& kind, double field, double energy, const GaussianTimeParams& p);

// -- density of states (two-spin Zeeman, weights 1/4, 1/2, 1/4) --------------

/// Ω(E) = d/√(2π) [¼cos((E+2B)τ)e^{-d²(E+2B)²/2} + ¼cos((E-2B)τ)e^{-d²(E-2B)²/2}
///                  + ½cos(Eτ)e^{-d²E²/2}]; integrates to 1 at τ = 0.
double dos(double energy, double field, const GaussianTimeParams& p);

/// τ = 0 closed form d/√(2π) · ½e^{-d²E²/2}(e^{-2d²B²}cosh(2d²EB) + 1).
double dos_compact(double energy, double field, double d);

/// S/k_B = -ln 2 - d²E²/2 + ln[e^{-2d²B²}cosh(2d²BE) + 1] (τ = 0, no prefactor).
double entropy(double energy, double field, double d);

/// β = ∂S/∂E as the ratio of the weighted Gaussian derivatives.
double beta(double energy, double field, double d);

struct DosCurve {
    std::vector<double> energies;
    std::vector<double> omega;
    std::vector<double> entropy;
    std::vector<double> beta;
};

/// Ω uses `p.tau`; entropy and β are the τ = 0 quantities.
DosCurve entropy_and_beta(std::span<const double> grid, double field, const GaussianTimeParams& p);

}  // namespace rodeo::oracle
