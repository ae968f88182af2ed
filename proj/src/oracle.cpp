#include "rodeo/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rodeo::oracle {

using qcore::Complex;

SpectralWeights::SpectralWeights(std::vector<double> eigenvalues, std::vector<double> weights)
    : eigenvalues_(std::move(eigenvalues)), weights_(std::move(weights)) {
    if (eigenvalues_.size() != weights_.size()) {
        throw std::invalid_argument("SpectralWeights: eigenvalue/weight length mismatch");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw std::invalid_argument("SpectralWeights: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw std::invalid_argument("SpectralWeights: weights sum to " + std::to_string(total));
    }
}

void validate(const GaussianTimeParams& p) {
    if (!(p.d > 0.0) || !std::isfinite(p.d) || !std::isfinite(p.tau)) {
        throw std::invalid_argument("Gaussian time width d must be finite and > 0");
    }
}

SpectralWeights overlaps_from_state(const qcore::StateVector& psi,
                                    const hamiltonian::SpectralDecomposition& decomp) {
    if (psi.dim() != decomp.dim()) {
        throw std::invalid_argument("overlaps_from_state: state dimension " +
                                    std::to_string(psi.dim()) + " vs Hamiltonian " +
                                    std::to_string(decomp.dim()));
    }
    std::vector<double> w(decomp.dim());
    for (std::size_t x = 0; x < decomp.dim(); ++x) {
        Complex overlap{};
        for (std::size_t r = 0; r < decomp.dim(); ++r)
            overlap += std::conj(decomp.eigenvectors(r, x)) * psi[r];
        w[x] = std::norm(overlap);
    }
    return SpectralWeights(decomp.eigenvalues, std::move(w));
}

double g_given_times(const SpectralWeights& w, double energy, std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("g_given_times: empty time list");
    double acc = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x) {
        const double delta = energy - w.eigenvalues()[x];
        double c = 0.0;
        for (double t : times) c += std::cos(delta * t);
        acc += w.weights()[x] * c;
    }
    return -acc / static_cast<double>(times.size());
}

double g_product_given_times(const SpectralWeights& w, double energy,
                             std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("g_product_given_times: empty time list");
    double acc = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x) {
        const double delta = energy - w.eigenvalues()[x];
        double prod = 1.0;
        for (double t : times) prod *= std::cos(delta * t);
        acc += w.weights()[x] * prod;
    }
    return (times.size() % 2 == 0) ? acc : -acc;
}

double gaussian_cosine_average(double beta, const GaussianTimeParams& p) {
    validate(p);
    return std::exp(-0.5 * p.d * p.d * beta * beta) * std::cos(beta * p.tau);
}

double mean_score(const SpectralWeights& w, double energy, const GaussianTimeParams& p) {
    validate(p);
    double acc = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x)
        acc += w.weights()[x] * gaussian_cosine_average(energy - w.eigenvalues()[x], p);
    return -acc;
}

double product_mean_score(const SpectralWeights& w, double energy, const GaussianTimeParams& p,
                          int ancillas) {
    validate(p);
    if (ancillas < 1) throw std::invalid_argument("product_mean_score: need N >= 1");
    double acc = 0.0;
    for (std::size_t x = 0; x < w.size(); ++x)
        acc += w.weights()[x] * std::pow(gaussian_cosine_average(energy - w.eigenvalues()[x], p),
                                         ancillas);
    return (ancillas % 2 == 0) ? acc : -acc;
}

double variance_product(double mean_g) {
    if (!(std::abs(mean_g) <= 1.0)) {
        throw std::invalid_argument("variance_product: |<g>| must be <= 1");
    }
    return 1.0 - mean_g * mean_g;
}

double standard_error(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("standard_error: need >= 2 samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / n / n);
}

// ---------------------------------------------------------------------------

SpectralWeights one_spin_weights(double theta, double field) {
    const auto h = hamiltonian::zeeman({1, field});
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return SpectralWeights({h.matrix()(0, 0).real(), h.matrix()(1, 1).real()}, {c * c, s * s});
}

double one_spin_curve(double theta, double field, double energy, const GaussianTimeParams& p) {
    return mean_score(one_spin_weights(theta, field), energy, p);
}

SpectralWeights two_spin_weights(double theta1, double theta2, double field) {
    const auto h = hamiltonian::zeeman({2, field});
    const double c1 = std::cos(theta1 / 2.0), s1 = std::sin(theta1 / 2.0);
    const double c2 = std::cos(theta2 / 2.0), s2 = std::sin(theta2 / 2.0);
    std::vector<double> e(4);
    for (std::size_t i = 0; i < 4; ++i) e[i] = h.matrix()(i, i).real();
    return SpectralWeights(std::move(e), {c1 * c1 * c2 * c2, c1 * c1 * s2 * s2,
                                          s1 * s1 * c2 * c2, s1 * s1 * s2 * s2});
}

double two_spin_curve(double theta1, double theta2, double field, double energy,
                      const GaussianTimeParams& p) {
    return mean_score(two_spin_weights(theta1, theta2, field), energy, p);
}

qcore::StateVector bell_state(const BellInput& kind) {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<Complex> a(4);
    if (const auto* b = std::get_if<BellState>(&kind)) {
        switch (*b) {
            case BellState::PhiPlus: a[0] = r; a[3] = r; break;
            case BellState::PhiMinus: a[0] = r; a[3] = -r; break;
            case BellState::PsiPlus: a[1] = r; a[2] = r; break;
            case BellState::PsiMinus: a[1] = r; a[2] = -r; break;
        }
    } else {
        const auto& m = std::get<BellMix>(kind);
        const double c = std::cos(m.alpha), s = std::sin(m.alpha);
        if (m.family == BellFamily::Phi) {
            a[0] = c;
            a[3] = s;
        } else {
            a[1] = r * (c + s);
            a[2] = r * (c - s);
        }
    }
    return qcore::StateVector(2, std::move(a));
}

SpectralWeights bell_weights(const BellInput& kind, double field) {
    const auto h = hamiltonian::zeeman({2, field});
    std::vector<double> e(4);
    for (std::size_t i = 0; i < 4; ++i) e[i] = h.matrix()(i, i).real();
    // The Zeeman eigenbasis is the computational basis, so weights are |amplitude|².
    const auto psi = bell_state(kind);
    std::vector<double> w(4);
    for (std::size_t i = 0; i < 4; ++i) w[i] = std::norm(psi[i]);
    return SpectralWeights(std::move(e), std::move(w));
}

double bell_curve(const BellInput& kind, double field, double energy, const GaussianTimeParams& p) {
    return mean_score(bell_weights(kind, field), energy, p);
}

// ---------------------------------------------------------------------------

namespace {

// ln(Σ e^{x_i})
template <std::size_t K>
double log_sum_exp(const std::array<double, K>& x) {
    const double m = *std::max_element(x.begin(), x.end());
    double s = 0.0;
    for (double v : x) s += std::exp(v - m);
    return m + std::log(s);
}

}  // namespace

double dos(double energy, double field, const GaussianTimeParams& p) {
    validate(p);
    const double d2 = p.d * p.d;
    const double ep = energy + 2.0 * field;
    const double em = energy - 2.0 * field;
    const double sum = 0.25 * std::cos(ep * p.tau) * std::exp(-0.5 * d2 * ep * ep) +
                       0.25 * std::cos(em * p.tau) * std::exp(-0.5 * d2 * em * em) +
                       0.5 * std::cos(energy * p.tau) * std::exp(-0.5 * d2 * energy * energy);
    return p.d / std::sqrt(2.0 * std::numbers::pi) * sum;
}

double dos_compact(double energy, double field, double d) {
    validate({0.0, d});
    const double d2 = d * d;
    // e^{-2d²B²}cosh(x) overflows for large |x| unless taken through ln cosh.
    const double x = std::abs(2.0 * d2 * energy * field);
    const double ln_cosh = x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
    const double g = -0.5 * d2 * energy * energy;
    return d / std::sqrt(2.0 * std::numbers::pi) * 0.5 *
           (std::exp(g - 2.0 * d2 * field * field + ln_cosh) + std::exp(g));
}

double entropy(double energy, double field, double d) {
    validate({0.0, d});
    const double d2 = d * d;
    const double a = -2.0 * d2 * field * field;
    const double x = 2.0 * d2 * field * energy;
    // e^{a}cosh(x) + 1 = ½e^{a+x} + ½e^{a-x} + 1
    const double ln_bracket =
        log_sum_exp(std::array<double, 3>{a + x - std::numbers::ln2, a - x - std::numbers::ln2, 0.0});
    return -std::numbers::ln2 - 0.5 * d2 * energy * energy + ln_bracket;
}

double beta(double energy, double field, double d) {
    validate({0.0, d});
    const double d2 = d * d;
    const std::array<double, 3> centres{-2.0 * field, 2.0 * field, 0.0};
    const std::array<double, 3> weights{0.25, 0.25, 0.5};
    std::array<double, 3> log_terms{};
    for (std::size_t i = 0; i < 3; ++i) {
        const double u = energy - centres[i];
        log_terms[i] = std::log(weights[i]) - 0.5 * d2 * u * u;
    }
    const double m = *std::max_element(log_terms.begin(), log_terms.end());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double g = std::exp(log_terms[i] - m);
        num += g * (-d2 * (energy - centres[i]));
        den += g;
    }
    return num / den;
}

DosCurve entropy_and_beta(std::span<const double> grid, double field, const GaussianTimeParams& p) {
    validate(p);
    DosCurve out;
    out.energies.assign(grid.begin(), grid.end());
    out.omega.reserve(grid.size());
    out.entropy.reserve(grid.size());
    out.beta.reserve(grid.size());
    for (double e : grid) {
        out.omega.push_back(dos(e, field, p));
        out.entropy.push_back(entropy(e, field, p.d));
        out.beta.push_back(beta(e, field, p.d));
    }
    return out;
}

}  // namespace rodeo::oracle
