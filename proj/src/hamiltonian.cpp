#include "rodeo/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace rodeo::hamiltonian {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const Complex& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
}

// Zeroes a(p,q) with U = diag-phase · real rotation, updating A <- U† A U and
// V <- V U.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const Complex phase = apq / r;  // e^{iφ}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * r);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // U restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]].
    const Complex upp = c;
    const Complex upq = s;
    const Complex uqp = -s * std::conj(phase);
    const Complex uqq = c * std::conj(phase);

    const std::size_t n = a.dim();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * upp + akq * uqp;
        a(k, q) = akp * upq + akq * uqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
        a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * upp + vkq * uqp;
        v(k, q) = vkp * upq + vkq * uqq;
    }
}

SpectralDecomposition assemble(const std::vector<double>& diag, const ComplexMatrix& vecs) {
    const std::size_t n = diag.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t x = 0; x < n; ++x) {
        out.eigenvalues[x] = diag[order[x]];
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, x) = vecs(r, order[x]);
    }
    out.degeneracy_groups = group_degenerate(out.eigenvalues);
    return out;
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix matrix, std::string label)
    : matrix_(std::move(matrix)), label_(std::move(label)) {
    const std::size_t dim = matrix_.dim();
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw std::invalid_argument("Hamiltonian dimension " + std::to_string(dim) +
                                    " is not a power of two");
    }
    num_qubits_ = std::countr_zero(dim);
    if (num_qubits_ > qcore::kMaxQubits) throw std::invalid_argument("Hamiltonian too large");
    for (const Complex& z : matrix_.entries()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("Hamiltonian has non-finite entries");
    }
    if (!matrix_.is_hermitian(kHermitianTol)) {
        throw std::invalid_argument("Hamiltonian '" + label_ + "' is not Hermitian");
    }
}

HermitianOperator zeeman(const ZeemanParams& params) {
    if (params.spins < 1 || params.spins > qcore::kMaxQubits) {
        throw std::invalid_argument("Zeeman model needs 1.." + std::to_string(qcore::kMaxQubits) +
                                    " spins");
    }
    const std::size_t dim = std::size_t{1} << params.spins;
    ComplexMatrix m(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        const int ones = std::popcount(s);
        const int zeros = params.spins - ones;
        m(s, s) = -params.field * static_cast<double>(zeros - ones);
    }
    return HermitianOperator(std::move(m), "zeeman(M=" + std::to_string(params.spins) + ")");
}

int SpectralDecomposition::num_qubits() const {
    return std::countr_zero(eigenvalues.size());
}

std::vector<Complex> SpectralDecomposition::eigenvector(std::size_t x) const {
    std::vector<Complex> v(dim());
    for (std::size_t r = 0; r < dim(); ++r) v[r] = eigenvectors(r, x);
    return v;
}

std::vector<std::vector<std::size_t>> group_degenerate(const std::vector<double>& ascending,
                                                       double tol) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < ascending.size(); ++i) {
        if (groups.empty() || ascending[i] - ascending[groups.back().front()] > tol) {
            groups.push_back({i});
        } else {
            groups.back().push_back(i);
        }
    }
    return groups;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h) {
    const ComplexMatrix& m = h.matrix();
    const std::size_t n = m.dim();
    std::vector<double> diag(n);

    if (m.is_diagonal()) {
        for (std::size_t i = 0; i < n; ++i) diag[i] = m(i, i).real();
        return assemble(diag, ComplexMatrix::identity(n));
    }

    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double target = kOffDiagonalTol * std::max(1.0, frobenius_norm(m));
    int sweep = 0;
    for (; sweep < kMaxSweeps && off_diagonal_norm(a) >= target; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
    if (off_diagonal_norm(a) >= target) {
        throw std::runtime_error("Jacobi eigensolver did not converge in " +
                                 std::to_string(kMaxSweeps) + " sweeps");
    }
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    return assemble(diag, v);
}

ComplexMatrix evolution_unitary(const SpectralDecomposition& decomp, double t) {
    const std::size_t n = decomp.dim();
    const ComplexMatrix& v = decomp.eigenvectors;
    std::vector<Complex> phases(n);
    for (std::size_t x = 0; x < n; ++x) phases[x] = std::polar(1.0, -decomp.eigenvalues[x] * t);

    ComplexMatrix u(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            Complex acc{};
            for (std::size_t x = 0; x < n; ++x) acc += v(r, x) * phases[x] * std::conj(v(c, x));
            u(r, c) = acc;
        }
    }
    return u;
}

HermitianOperator load_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("matrix file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array()) {
        throw std::runtime_error("matrix file " + path.string() + ": missing \"matrix\" array");
    }
    const auto& rows = doc["matrix"];
    const std::size_t n = rows.size();
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!rows[r].is_array() || rows[r].size() != n) {
            throw std::runtime_error("matrix file " + path.string() + ": row " +
                                     std::to_string(r) + " is not of length " + std::to_string(n));
        }
        for (std::size_t c = 0; c < n; ++c) {
            const auto& e = rows[r][c];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                throw std::runtime_error("matrix file " + path.string() + ": bad entry at (" +
                                         std::to_string(r) + "," + std::to_string(c) + ")");
            }
        }
    }
    return HermitianOperator(std::move(m), path.filename().string());
}

}  // namespace rodeo::hamiltonian
