// Dense state-vector simulation primitives: amplitudes, small gates, controlled
// unitaries, and measurement helpers.
//
// Qubit 0 is the leftmost ket symbol, i.e. the most significant bit of the
// basis index. For an n-qubit register, qubit q maps to bit (n - 1 - q).

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rodeo {
class RandomStream;
}

namespace rodeo::qcore {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 20;

/// Row-major 2x2 complex matrix.
struct GateMatrix2x2 {
    Complex m00, m01, m10, m11;
};

GateMatrix2x2 identity_gate();
GateMatrix2x2 pauli_x();
GateMatrix2x2 hadamard();

/// U3(θ, φ, δ) = [[cos(θ/2), -e^{iδ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+δ)} cos(θ/2)]].
GateMatrix2x2 u3(double theta, double phi, double delta);

/// P(φ) = |0><0| + e^{iφ}|1><1|.
GateMatrix2x2 phase_gate(double phi);

bool is_unitary(const GateMatrix2x2& g, double tol = 1e-12);

/// Square dense complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    std::span<const Complex> entries() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;

    /// max_{r,c} |A - B|
    double max_abs_diff(const ComplexMatrix& other) const;
    bool is_hermitian(double tol) const;
    bool is_unitary(double tol) const;
    bool is_diagonal() const;

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(int num_qubits);

    /// Takes ownership of explicit amplitudes; length must be 2^num_qubits and
    /// every entry finite. Normalization is the caller's responsibility; see
    /// is_normalized().
    StateVector(int num_qubits, std::vector<Complex> amplitudes);

    static StateVector basis(int num_qubits, std::uint64_t index);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const;
    bool is_normalized(double tol = 1e-10) const;

  private:
    int num_qubits_ = 0;
    std::vector<Complex> amps_;
};

StateVector apply_single_qubit_gate(StateVector state, const GateMatrix2x2& gate, int qubit);

/// Multiplies the |1> component of `qubit` by e^{iφ}.
StateVector apply_phase(StateVector state, int qubit, double phase);

/// Applies `u` to the subspace spanned by `targets` (targets[0] is the most
/// significant sub-index bit) on components where `control` is 1. `u` is
/// checked for unitarity to 1e-10.
StateVector apply_controlled_unitary(StateVector state, int control,
                                     std::span<const int> targets,
                                     const ComplexMatrix& u);

/// <σ_z> on `qubit`: Σ_{bit=0}|a|² - Σ_{bit=1}|a|².
double expect_pauli_z(const StateVector& state, int qubit);

/// Kronecker product a ⊗ b; `a` occupies the leading qubits.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Bit of basis index `index` belonging to `qubit` in an n-qubit register.
inline int qubit_bit(std::uint64_t index, int qubit, int num_qubits) {
    return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1U);
}

/// "0110"-style rendering in qubit order.
std::string bitstring_to_string(std::uint64_t index, int num_qubits);

/// Born-rule sampler over a fixed state. Builds the cumulative distribution
/// once so repeated shots cost O(log dim).
class BitstringSampler {
  public:
    explicit BitstringSampler(const StateVector& state);
    std::uint64_t sample(RandomStream& rng) const;
    int num_qubits() const { return num_qubits_; }

  private:
    int num_qubits_;
    std::vector<double> cumulative_;
};

std::uint64_t sample_bitstring(const StateVector& state, RandomStream& rng);

}  // namespace rodeo::qcore
