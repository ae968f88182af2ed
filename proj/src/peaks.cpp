#include "rodeo/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rodeo::harness {

namespace {

// Levels farther than this many widths (1/d) from a grid point are ignored.
constexpr double kWindowWidths = 5.0;

double level_kernel(double delta, const GaussianTimeParams& p) {
    return std::exp(-0.5 * p.d * p.d * delta * delta) * std::cos(p.tau * delta);
}

// Inverse of a small symmetric positive-definite matrix by Gauss-Jordan with
// partial pivoting. Returns false when singular.
bool invert(std::vector<double>& a, std::size_t n) {
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (std::abs(a[piv * n + col]) < 1e-300) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a[piv * n + c], a[col * n + c]);
                std::swap(inv[piv * n + c], inv[col * n + c]);
            }
        }
        const double d = a[col * n + col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col * n + c] /= d;
            inv[col * n + c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
                inv[r * n + c] -= f * inv[col * n + c];
            }
        }
    }
    a = std::move(inv);
    return true;
}

struct Fit {
    std::vector<double> heights;
    std::vector<double> stderrs;
};

// Weighted least squares of y_i = Σ_l w_l K(E_i - loc_l) over `rows`, with the
// sandwich covariance built from the table's own stderr column.
Fit weighted_fit(const ScanResult& scan, const std::vector<std::size_t>& rows,
                 const std::vector<double>& locs, const std::vector<double>& row_weight) {
    const std::size_t L = locs.size();
    std::vector<double> m(L * L, 0.0), b(L, 0.0), meat(L * L, 0.0);
    std::vector<double> x(L);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = rows[k];
        for (std::size_t l = 0; l < L; ++l) x[l] = level_kernel(scan.energies[i] - locs[l], scan.time);
        const double w = row_weight[k];
        const double s2 = scan.std_error[i] * scan.std_error[i];
        for (std::size_t l = 0; l < L; ++l) {
            b[l] += w * x[l] * scan.mean_neg_h[i];
            for (std::size_t q = 0; q < L; ++q) {
                m[l * L + q] += w * x[l] * x[q];
                meat[l * L + q] += w * w * s2 * x[l] * x[q];
            }
        }
    }
    Fit fit;
    if (!invert(m, L)) return fit;
    fit.heights.assign(L, 0.0);
    fit.stderrs.assign(L, 0.0);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t q = 0; q < L; ++q) fit.heights[l] += m[l * L + q] * b[q];
    for (std::size_t l = 0; l < L; ++l) {
        double v = 0.0;
        for (std::size_t a = 0; a < L; ++a)
            for (std::size_t c = 0; c < L; ++c) v += m[l * L + a] * meat[a * L + c] * m[c * L + l];
        fit.stderrs[l] = std::sqrt(std::max(0.0, v));
    }
    return fit;
}

// Per-ride variance of -h at energy e when the state holds levels `locs` with
// weights `heights` (one ancilla), divided by the number of rounds.
double model_variance(double e, const std::vector<double>& locs, const std::vector<double>& heights,
                      const GaussianTimeParams& p, std::int64_t rounds) {
    double second = 0.0, first = 0.0;
    for (std::size_t l = 0; l < locs.size(); ++l) {
        const double al = e - locs[l];
        const double wl = std::max(0.0, heights[l]);
        first += wl * level_kernel(al, p);
        for (std::size_t q = 0; q < locs.size(); ++q) {
            const double aq = e - locs[q];
            const double wq = std::max(0.0, heights[q]);
            second += wl * wq * 0.5 * (level_kernel(al - aq, p) + level_kernel(al + aq, p));
        }
    }
    const double var = std::max(0.0, second - first * first);
    return var / static_cast<double>(std::max<std::int64_t>(rounds, 1)) + 1e-10;
}

}  // namespace

MatchedFilter matched_filter(const ScanResult& scan) {
    oracle::validate(scan.time);
    const std::size_t n = scan.energies.size();
    if (scan.mean_neg_h.size() != n || scan.std_error.size() != n) {
        throw std::invalid_argument("scan columns have different lengths");
    }
    const double window = kWindowWidths / scan.time.d;
    MatchedFilter out;
    out.amplitude.resize(n);
    out.amplitude_stderr.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        double kk = 0.0, ky = 0.0, kks = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = scan.energies[i] - scan.energies[c];
            if (std::abs(delta) > window) continue;
            const double k = level_kernel(delta, scan.time);
            kk += k * k;
            ky += k * scan.mean_neg_h[i];
            kks += k * k * scan.std_error[i] * scan.std_error[i];
        }
        out.amplitude[c] = ky / kk;
        out.amplitude_stderr[c] = std::sqrt(kks) / kk;
    }
    return out;
}

std::vector<Peak> detect_peaks(const ScanResult& scan, const PeakOptions& options) {
    const std::size_t n = scan.energies.size();
    if (n == 0) return {};
    const auto mf = matched_filter(scan);
    const auto& a = mf.amplitude;
    const double radius = options.merge_radius.value_or(3.0 / scan.time.d);

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || a[i] > a[i - 1];
        const bool right_ok = i + 1 == n || a[i] >= a[i + 1];
        if (!left_ok || !right_ok) continue;
        if (a[i] <= options.threshold) continue;
        if (a[i] - options.significance * mf.amplitude_stderr[i] <= options.threshold) continue;
        candidates.push_back(i);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t x, std::size_t y) { return a[x] > a[y]; });

    std::vector<std::size_t> accepted;
    for (std::size_t c : candidates) {
        const bool near = std::any_of(accepted.begin(), accepted.end(), [&](std::size_t k) {
            return std::abs(scan.energies[k] - scan.energies[c]) <= radius;
        });
        if (!near) accepted.push_back(c);
    }
    if (accepted.empty()) return {};
    std::sort(accepted.begin(), accepted.end());

    std::vector<double> locs;
    for (std::size_t i : accepted) {
        double loc = scan.energies[i];
        if (i > 0 && i + 1 < n) {
            const double curv = a[i - 1] - 2.0 * a[i] + a[i + 1];
            if (curv < 0.0) {
                const double step = 0.5 * (scan.energies[i + 1] - scan.energies[i - 1]);
                const double off = std::clamp(0.5 * (a[i - 1] - a[i + 1]) / curv, -0.5, 0.5);
                loc += off * step;
            }
        }
        locs.push_back(loc);
    }

    const double window = kWindowWidths / scan.time.d;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const bool in = std::any_of(locs.begin(), locs.end(), [&](double loc) {
            return std::abs(scan.energies[i] - loc) <= window;
        });
        if (in) rows.push_back(i);
    }

    // Ordinary least squares first, then reweight by the variance those levels imply.
    Fit fit = weighted_fit(scan, rows, locs, std::vector<double>(rows.size(), 1.0));
    if (fit.heights.empty()) return {};
    std::vector<double> weights(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = rows[k];
        weights[k] = 1.0 / model_variance(scan.energies[i], locs, fit.heights, scan.time,
                                          scan.n_rounds.empty() ? 1 : scan.n_rounds[i]);
    }
    Fit refit = weighted_fit(scan, rows, locs, weights);
    if (!refit.heights.empty()) fit = std::move(refit);

    std::vector<Peak> peaks;
    for (std::size_t l = 0; l < accepted.size(); ++l) {
        if (fit.heights[l] < options.threshold) continue;
        const std::size_t i = accepted[l];
        std::size_t lo = i, hi = i;
        while (lo > 0 && a[lo - 1] > options.threshold) --lo;
        while (hi + 1 < n && a[hi + 1] > options.threshold) ++hi;
        peaks.push_back({locs[l], fit.heights[l], fit.stderrs[l],
                         scan.energies[hi] - scan.energies[lo]});
    }
    return peaks;
}

}  // namespace rodeo::harness
