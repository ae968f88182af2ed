// Energy scans: Gaussian time sampling on counter-based streams, ride
// execution over an energy grid, per-energy aggregation, and scan tables.
//
// Ride (grid index i, round r, state index p) draws its times from
// RandomStream(seed, i, r, p, kTimesDomain) and, in shot mode, its measurement
// outcomes from RandomStream(seed, i, r, p, kShotsDomain). Results therefore do
// not depend on how work is split across threads.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rodeo/engine.hpp"
#include "rodeo/hamiltonian.hpp"
#include "rodeo/oracle.hpp"
#include "rodeo/qcore.hpp"

namespace rodeo {
class RandomStream;
}

namespace rodeo::harness {

using oracle::GaussianTimeParams;
using qcore::Complex;

inline constexpr std::uint32_t kTimesDomain = 1;
inline constexpr std::uint32_t kShotsDomain = 2;
inline constexpr std::uint32_t kStateDomain = 3;

// -- model and initial-state descriptors --------------------------------------

struct ZeemanModel {
    int spins = 1;
    double field = 1.0;
    friend bool operator==(const ZeemanModel&, const ZeemanModel&) = default;
};

struct CustomModel {
    std::string path;
    friend bool operator==(const CustomModel&, const CustomModel&) = default;
};

using ModelSpec = std::variant<ZeemanModel, CustomModel>;

hamiltonian::HermitianOperator build_model(const ModelSpec& model);

/// Per-qubit (θ, φ); each qubit is prepared as U3(θ, φ, 0)|0>.
struct AnglesState {
    std::vector<std::pair<double, double>> angles;
    friend bool operator==(const AnglesState&, const AnglesState&) = default;
};

struct BellStateSpec {
    oracle::BellState kind = oracle::BellState::PhiPlus;
    friend bool operator==(const BellStateSpec&, const BellStateSpec&) = default;
};

struct AmplitudeState {
    std::vector<Complex> amplitudes;
    friend bool operator==(const AmplitudeState&, const AmplitudeState&) = default;
};

struct MixState {
    oracle::BellFamily family = oracle::BellFamily::Phi;
    double alpha = 0.0;
    friend bool operator==(const MixState&, const MixState&) = default;
};

using StateSpec = std::variant<AnglesState, BellStateSpec, AmplitudeState, MixState>;

/// Builds ψ_I on `system_qubits`. Throws std::invalid_argument when the
/// descriptor does not fit the register or is not normalized to 1e-10.
qcore::StateVector build_state(const StateSpec& spec, int system_qubits);

/// Uniform θ ∈ [0, π], φ ∈ [0, 2π) per qubit from the state-sweep stream.
AnglesState random_angles_state(std::uint64_t seed, std::uint32_t psi_index, int system_qubits);

std::string bell_name(oracle::BellState kind);
oracle::BellState parse_bell_name(const std::string& name);

// -- configuration --------------------------------------------------------------

struct RodeoConfig {
    ModelSpec model = ZeemanModel{};
    /// Empty: every ψ is a seeded random angle state. Otherwise one entry per ψ.
    std::vector<StateSpec> states;
    int ancillas = 1;
    double e_min = -2.0;
    double e_max = 2.0;
    double de = 0.02;
    GaussianTimeParams time{10.0, 7.0};
    int rounds = 50;
    int n_psi = 1;
    /// 0 selects exact mode (ζ_k = <σ_z>_k); > 0 selects shot mode.
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    /// Worker cap; results never depend on it.
    int threads = 1;
};

void validate(const RodeoConfig& config);

/// Number of grid intervals round((e_max - e_min)/ΔE).
std::size_t grid_intervals(const RodeoConfig& config);

/// e_min + i·ΔE for i = 0..grid_intervals (both ends included).
std::vector<double> energy_grid(const RodeoConfig& config);

// -- rides and records ----------------------------------------------------------

/// One ride's (X_i, Y_i) pair plus its position in the scan.
struct RideRecord {
    std::int64_t ride_index = 0;
    std::int64_t psi_index = 0;
    std::int64_t grid_index = 0;
    std::int64_t round = 0;
    std::vector<double> times;
    double energy = 0.0;
    double d = 0.0;
    double tau = 0.0;
    ModelSpec model;
    StateSpec psi;
    /// Exact mode: <σ_z>_k. Shot mode: (n_up, n_down) per ancilla.
    std::variant<std::vector<double>, std::vector<engine::ShotCounts>> zeta;
    /// Shot count; 0 in exact mode.
    std::int64_t shots = 0;

    bool is_shot_mode() const { return zeta.index() == 1; }
    friend bool operator==(const RideRecord&, const RideRecord&) = default;
};

/// (1/N) Σ_k ζ_k, with shot-mode ζ_k = (n_up - n_down)/(n_up + n_down).
double ride_score(const RideRecord& record);

/// N independent Normal(τ, d²) draws.
std::vector<double> sample_times(const GaussianTimeParams& p, int count, RandomStream& rng);

// -- scan results -----------------------------------------------------------------

struct Peak {
    double energy = 0.0;        ///< refined location
    double height = 0.0;        ///< estimated level weight
    double height_stderr = 0.0;
    double width = 0.0;         ///< extent of the above-threshold group
};

struct ScanResult {
    std::vector<double> energies;
    std::vector<double> mean_neg_h;  ///< -h̄ per energy
    std::vector<double> std_error;   ///< 0 where only one round exists
    std::vector<std::int64_t> n_rounds;
    GaussianTimeParams time;
    std::vector<Peak> peaks;
};

struct ScanOutput {
    std::vector<ScanResult> scans;  ///< one per ψ
    std::int64_t ride_count = 0;
};

using RecordSink = std::function<void(const RideRecord&)>;

/// Runs every ride of the scan. Records reach `sink` in ride-index order
/// (ψ-major, then grid point, then round). Peaks are detected with default
/// options.
ScanOutput run_scan(const RodeoConfig& config, const RecordSink& sink = {});

/// Mean and standard error of per-ride scores; one point per distinct
/// grid_index, ordered by grid_index. Records must share one psi_index.
ScanResult aggregate(const std::vector<RideRecord>& records, const GaussianTimeParams& time);

/// Header "energy,neg_h_mean,stderr,n_rounds", one row per grid point, then a
/// "# tau=<τ>,d=<d>" comment footer.
void write_scan_table(std::ostream& out, const ScanResult& result);

/// Inverse of write_scan_table. Tables without the footer get `fallback` as
/// their time parameters. Throws std::runtime_error naming the line on
/// malformed input.
ScanResult read_scan_table(std::istream& in, const GaussianTimeParams& fallback);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace rodeo::harness
