#include "rodeo/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rodeo/random.hpp"

namespace rodeo::qcore {

namespace {

void check_qubit(const StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits()) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.num_qubits()) +
                                "-qubit register");
    }
}

std::size_t checked_dim(int num_qubits) {
    if (num_qubits < 0 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("register size " + std::to_string(num_qubits) +
                                    " outside [0, " + std::to_string(kMaxQubits) + "]");
    }
    return std::size_t{1} << num_qubits;
}

}  // namespace

GateMatrix2x2 identity_gate() { return {1.0, 0.0, 0.0, 1.0}; }

GateMatrix2x2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }

GateMatrix2x2 hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return {s, s, s, -s};
}

GateMatrix2x2 u3(double theta, double phi, double delta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {c, -std::polar(s, delta), std::polar(s, phi), std::polar(c, phi + delta)};
}

GateMatrix2x2 phase_gate(double phi) { return {1.0, 0.0, 0.0, std::polar(1.0, phi)}; }

bool is_unitary(const GateMatrix2x2& g, double tol) {
    // Columns orthonormal.
    const Complex d0 = std::conj(g.m00) * g.m00 + std::conj(g.m10) * g.m10;
    const Complex d1 = std::conj(g.m01) * g.m01 + std::conj(g.m11) * g.m11;
    const Complex off = std::conj(g.m00) * g.m01 + std::conj(g.m10) * g.m11;
    return std::abs(d0 - 1.0) < tol && std::abs(d1 - 1.0) < tol && std::abs(off) < tol;
}

// ---------------------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim * dim) {
        throw std::invalid_argument("ComplexMatrix: expected " + std::to_string(dim * dim) +
                                    " entries, got " + std::to_string(data_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (rhs.dim_ != dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const Complex a = (*this)(r, k);
            if (a == Complex{}) continue;
            for (std::size_t c = 0; c < dim_; ++c) out(r, c) += a * rhs(k, c);
        }
    }
    return out;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    return worst;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) >= tol) return false;
    return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
    return (adjoint() * *this).max_abs_diff(identity(dim_)) < tol;
}

bool ComplexMatrix::is_diagonal() const {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c)
            if (r != c && (*this)(r, c) != Complex{}) return false;
    return true;
}

// ---------------------------------------------------------------------------

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits), amps_(checked_dim(num_qubits)) {
    amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != checked_dim(num_qubits)) {
        throw std::invalid_argument("StateVector: " + std::to_string(amps_.size()) +
                                    " amplitudes for " + std::to_string(num_qubits) +
                                    " qubits");
    }
    for (const Complex& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("StateVector: non-finite amplitude");
        }
    }
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm_squared() const {
    double n = 0.0;
    for (const Complex& a : amps_) n += std::norm(a);
    return n;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) < tol; }

// ---------------------------------------------------------------------------

StateVector apply_single_qubit_gate(StateVector state, const GateMatrix2x2& gate, int qubit) {
    check_qubit(state, qubit);
    const std::size_t stride = std::size_t{1} << (state.num_qubits() - 1 - qubit);
    auto amps = state.amplitudes();
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a0 = amps[i];
            const Complex a1 = amps[i + stride];
            amps[i] = gate.m00 * a0 + gate.m01 * a1;
            amps[i + stride] = gate.m10 * a0 + gate.m11 * a1;
        }
    }
    return state;
}

StateVector apply_phase(StateVector state, int qubit, double phase) {
    check_qubit(state, qubit);
    const Complex factor = std::polar(1.0, phase);
    const int n = state.num_qubits();
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        if (qubit_bit(i, qubit, n)) amps[i] *= factor;
    return state;
}

StateVector apply_controlled_unitary(StateVector state, int control,
                                     std::span<const int> targets, const ComplexMatrix& u) {
    check_qubit(state, control);
    const int n = state.num_qubits();
    std::size_t target_mask = 0;
    std::vector<std::size_t> offsets(std::size_t{1} << targets.size(), 0);
    for (std::size_t j = 0; j < targets.size(); ++j) {
        const int t = targets[j];
        check_qubit(state, t);
        if (t == control) throw std::invalid_argument("control qubit listed among targets");
        const std::size_t bit = std::size_t{1} << (n - 1 - t);
        if (target_mask & bit) throw std::invalid_argument("duplicate target qubit");
        target_mask |= bit;
    }
    if (u.dim() != offsets.size()) {
        throw std::invalid_argument("controlled unitary dimension " + std::to_string(u.dim()) +
                                    " does not match " + std::to_string(targets.size()) +
                                    " target qubits");
    }
    if (!u.is_unitary(1e-10)) throw std::invalid_argument("controlled operator is not unitary");

    // offsets[sub] places the bits of `sub` (targets[0] most significant) on
    // their register positions.
    for (std::size_t sub = 0; sub < offsets.size(); ++sub) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            if ((sub >> (targets.size() - 1 - j)) & 1U) off |= std::size_t{1} << (n - 1 - targets[j]);
        }
        offsets[sub] = off;
    }

    const std::size_t control_bit = std::size_t{1} << (n - 1 - control);
    auto amps = state.amplitudes();
    std::vector<Complex> in(offsets.size()), out(offsets.size());
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (!(base & control_bit) || (base & target_mask)) continue;
        for (std::size_t s = 0; s < offsets.size(); ++s) in[s] = amps[base | offsets[s]];
        for (std::size_t r = 0; r < offsets.size(); ++r) {
            Complex acc{};
            for (std::size_t c = 0; c < offsets.size(); ++c) acc += u(r, c) * in[c];
            out[r] = acc;
        }
        for (std::size_t s = 0; s < offsets.size(); ++s) amps[base | offsets[s]] = out[s];
    }
    return state;
}

double expect_pauli_z(const StateVector& state, int qubit) {
    check_qubit(state, qubit);
    const int n = state.num_qubits();
    double z = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        z += qubit_bit(i, qubit, n) ? -std::norm(amps[i]) : std::norm(amps[i]);
    return z;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const int n = a.num_qubits() + b.num_qubits();
    std::vector<Complex> amps(checked_dim(n));
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    return StateVector(n, std::move(amps));
}

std::string bitstring_to_string(std::uint64_t index, int num_qubits) {
    std::string s(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q)
        if (qubit_bit(index, q, num_qubits)) s[static_cast<std::size_t>(q)] = '1';
    return s;
}

// ---------------------------------------------------------------------------

BitstringSampler::BitstringSampler(const StateVector& state)
    : num_qubits_(state.num_qubits()), cumulative_(state.dim()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        acc += std::norm(state[i]);
        cumulative_[i] = acc;
    }
}

std::uint64_t BitstringSampler::sample(RandomStream& rng) const {
    // Scale by the total so residual normalization error never selects past the end.
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = static_cast<std::uint64_t>(it - cumulative_.begin());
    return std::min<std::uint64_t>(idx, cumulative_.size() - 1);
}

std::uint64_t sample_bitstring(const StateVector& state, RandomStream& rng) {
    return BitstringSampler(state).sample(rng);
}

}  // namespace rodeo::qcore
