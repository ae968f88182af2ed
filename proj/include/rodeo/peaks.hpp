// Eigenvalue estimates from a scan table.
//
// A single level at E_x with weight w contributes w·K(E - E_x) to -h̄(E), where
// K(δ) = e^{-d²δ²/2} cos(τδ). Candidates are local maxima of the least-squares
// amplitude of K centred at each grid point; heights come from a joint weighted
// least-squares fit of all accepted levels, weighted by the per-ride variance
// the fitted levels imply.

#pragma once

#include <optional>
#include <vector>

#include "rodeo/harness.hpp"

namespace rodeo::harness {

struct PeakOptions {
    double threshold = 0.1;
    /// Defaults to 3/d.
    std::optional<double> merge_radius;
    /// Candidates must clear the threshold by this many standard errors.
    double significance = 2.0;
};

/// Least-squares amplitude of the level kernel centred at each grid energy and
/// its standard error from the per-point stderr column.
struct MatchedFilter {
    std::vector<double> amplitude;
    std::vector<double> amplitude_stderr;
};

MatchedFilter matched_filter(const ScanResult& scan);

std::vector<Peak> detect_peaks(const ScanResult& scan, const PeakOptions& options = {});

}  // namespace rodeo::harness
