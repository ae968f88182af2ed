// Target Hamiltonians: Zeeman models, custom dense Hermitian matrices, their
// spectral decompositions, and exact evolution operators e^{-iHt}.
//
// Reduced units throughout (μ_B = ħ = 1); energies are in units of the field.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "rodeo/qcore.hpp"

namespace rodeo::hamiltonian {

using qcore::Complex;
using qcore::ComplexMatrix;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDegeneracyTol = 1e-9;

class HermitianOperator {
  public:
    /// Throws std::invalid_argument unless `matrix` is Hermitian to 1e-12 and its
    /// dimension is a power of two.
    HermitianOperator(ComplexMatrix matrix, std::string label);

    const ComplexMatrix& matrix() const { return matrix_; }
    const std::string& label() const { return label_; }
    std::size_t dim() const { return matrix_.dim(); }
    int num_qubits() const { return num_qubits_; }

  private:
    ComplexMatrix matrix_;
    std::string label_;
    int num_qubits_;
};

struct ZeemanParams {
    int spins = 1;
    double field = 1.0;
};

/// H = -B Σ_i σ_z^{(i)} with σ_z = diag(+1, -1).
HermitianOperator zeeman(const ZeemanParams& params);

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  ///< ascending
    ComplexMatrix eigenvectors;       ///< column x is |x>
    std::vector<std::vector<std::size_t>> degeneracy_groups;

    std::size_t dim() const { return eigenvalues.size(); }
    int num_qubits() const;
    std::vector<Complex> eigenvector(std::size_t x) const;
};

/// Cyclic complex Jacobi; diagonal inputs take a fast path that returns the
/// computational basis. Ties are ordered by original index.
SpectralDecomposition spectral_decompose(const HermitianOperator& h);

/// Partitions ascending eigenvalues into runs whose spread from the run's first
/// member stays within `tol`.
std::vector<std::vector<std::size_t>> group_degenerate(const std::vector<double>& ascending,
                                                       double tol = kDegeneracyTol);

/// U(t) = V diag(e^{-i E_x t}) V†.
ComplexMatrix evolution_unitary(const SpectralDecomposition& decomp, double t);

/// Reads a custom Hermitian target from JSON: {"matrix": [[[re, im], ...], ...]}.
/// Real entries may be written as plain numbers.
HermitianOperator load_matrix_file(const std::filesystem::path& path);

}  // namespace rodeo::hamiltonian
