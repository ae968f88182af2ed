#include "rodeo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "rodeo/dataset.hpp"
#include "rodeo/oracle.hpp"
#include "rodeo/peaks.hpp"

namespace rodeo::cli {

namespace {

namespace fs = std::filesystem;
using harness::GaussianTimeParams;
using harness::RodeoConfig;
using harness::ScanResult;

// Parse-phase failures that should report usage (exit 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a model + state + grid needs; shared by scan, compare and oracle.
struct ModelFlags {
    std::string model = "zeeman";
    int spins = 1;
    double field = 1.0;
    std::string matrix;
    std::vector<std::string> states;
};

struct GridFlags {
    double e_min = 0.0;
    double e_max = 0.0;
    double de = 0.0;
};

struct PeakFlags {
    double threshold = 0.1;
    std::optional<double> merge_radius;
    double significance = 2.0;

    harness::PeakOptions options() const { return {threshold, merge_radius, significance}; }
};

struct ScanFlags {
    ModelFlags model;
    GridFlags grid;
    double tau = 0.0;
    double d = 0.0;
    int rounds = 0;
    std::uint64_t seed = 0;
    int ancillas = 1;
    int n_psi = 0;
    std::string mode = "exact";
    std::optional<std::int64_t> shots;
    std::string out;
    std::string dataset;
    int threads = 1;
    PeakFlags peaks;
    std::optional<double> oracle_tau;
    std::optional<double> oracle_d;
};

struct OracleFlags {
    ModelFlags model;
    GridFlags grid;
    std::string curve = "mean";
    std::optional<double> tau;
    std::optional<double> d;
    std::string out;
    PeakFlags peaks;
};

struct DosFlags {
    GridFlags grid;
    double field = 1.0;
    double d = 0.0;
    double tau = 0.0;
    std::string out;
};

struct PeaksFlags {
    std::string in;
    std::optional<double> tau;
    std::optional<double> d;
    PeakFlags peaks;
};

constexpr const char* kReferenceSettings =
    "Reference settings: one spin tau=10, d=7, rounds=50; two spins tau=0, d=10, rounds=60.";

void add_model_options(CLI::App* app, ModelFlags& f, bool state_required) {
    app->add_option("--model", f.model, "Hamiltonian: zeeman or custom")
        ->check(CLI::IsMember({"zeeman", "custom"}))
        ->required();
    app->add_option("--spins", f.spins, "Zeeman spin count M")->capture_default_str();
    app->add_option("--field", f.field, "Zeeman field B")->capture_default_str();
    app->add_option("--matrix", f.matrix,
                    "JSON matrix file for --model custom: {\"matrix\": [[[re, im], ...], ...]}");
    auto* s = app->add_option(
        "--state", f.states,
        "Initial state, repeatable (one per psi): theta=X[,phi=Y][;...] per qubit, "
        "bell=phi+|phi-|psi+|psi-, mix=phi:ALPHA|psi:ALPHA, or amps=FILE");
    if (state_required) s->required();
}

void add_grid_options(CLI::App* app, GridFlags& g) {
    app->add_option("--e-min", g.e_min, "Lowest trial energy")->required();
    app->add_option("--e-max", g.e_max, "Highest trial energy (included)")->required();
    app->add_option("--de", g.de, "Energy grid spacing")->required();
}

void add_peak_options(CLI::App* app, PeakFlags& p) {
    app->add_option("--threshold", p.threshold, "Peak height threshold")->capture_default_str();
    app->add_option("--merge-radius", p.merge_radius, "Peak merge radius (default 3/d)");
    app->add_option("--significance", p.significance,
                    "Standard errors a candidate must clear the threshold by")
        ->capture_default_str();
}

void add_scan_options(CLI::App* app, ScanFlags& f) {
    add_model_options(app, f.model, false);
    add_grid_options(app, f.grid);
    app->add_option("--tau", f.tau, "Mean of the Gaussian evolution times")->required();
    app->add_option("--d", f.d, "Standard deviation of the evolution times (> 0)")->required();
    app->add_option("--rounds", f.rounds, "Rides per energy grid point")->required();
    app->add_option("--seed", f.seed, "Master seed")->required();
    app->add_option("--ancillas", f.ancillas, "Ancilla count N")->capture_default_str();
    app->add_option("--n-psi", f.n_psi,
                    "Number of initial states (default: number of --state flags, or 1). "
                    "Without --state every psi is a seeded random product state.");
    app->add_option("--mode", f.mode, "exact or shots")
        ->check(CLI::IsMember({"exact", "shots"}))
        ->capture_default_str();
    app->add_option("--shots", f.shots, "Shots per ride (requires --mode shots)");
    app->add_option("--out", f.out, "Scan table path (default: standard output)");
    app->add_option("--dataset", f.dataset, "Ride dataset path (JSON lines)");
    app->add_option("--threads", f.threads, "Worker thread cap; results do not depend on it")
        ->capture_default_str();
    add_peak_options(app, f.peaks);
}

// -- value parsing ------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) parts.push_back(part);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

harness::AmplitudeState read_amplitude_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open amplitude file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("amplitude file '" + path + "': " + e.what());
    }
    if (!doc.is_array()) throw std::invalid_argument("amplitude file must hold [[re, im], ...]");
    harness::AmplitudeState s;
    for (const auto& item : doc) {
        if (item.is_number()) {
            s.amplitudes.emplace_back(item.get<double>(), 0.0);
        } else if (item.is_array() && item.size() == 2 && item[0].is_number() &&
                   item[1].is_number()) {
            s.amplitudes.emplace_back(item[0].get<double>(), item[1].get<double>());
        } else {
            throw std::invalid_argument("amplitude file entries must be [re, im]");
        }
    }
    return s;
}

harness::ModelSpec model_spec(const ModelFlags& f) {
    if (f.model == "custom") {
        if (f.matrix.empty()) throw UsageError("--model custom needs --matrix");
        return harness::CustomModel{f.matrix};
    }
    if (f.spins < 1) throw UsageError("--spins must be >= 1");
    return harness::ZeemanModel{f.spins, f.field};
}

std::vector<harness::StateSpec> state_specs(const ModelFlags& f) {
    std::vector<harness::StateSpec> out;
    for (const auto& s : f.states) {
        try {
            out.push_back(parse_state(s));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--state: ") + e.what());
        }
    }
    return out;
}

int system_qubits(const harness::ModelSpec& model) {
    return harness::build_model(model).num_qubits();
}

// -- output helpers -------------------------------------------------------------

class Output {
  public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }
    void close() {
        if (file_) {
            file_->close();
            if (!*file_) throw std::runtime_error("write failed");
        }
    }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

std::string psi_path(const std::string& path, int psi, int n_psi) {
    if (path.empty() || n_psi == 1) return path;
    const fs::path p(path);
    fs::path name = p.stem();
    name += "_psi" + std::to_string(psi);
    name += p.extension();
    return (p.parent_path() / name).string();
}

void print_peaks(std::ostream& os, const std::vector<harness::Peak>& peaks, const std::string& label) {
    std::ostringstream s;
    s << std::setprecision(6);
    s << "# " << label << peaks.size() << (peaks.size() == 1 ? " peak" : " peaks") << '\n';
    double sum = 0.0;
    for (const auto& p : peaks) {
        s << "peak energy=" << p.energy << " height=" << p.height << " stderr=" << p.height_stderr
          << " width=" << p.width << '\n';
        sum += p.height;
    }
    s << "height_sum=" << sum << '\n';
    os << s.str();
}

// -- subcommands ------------------------------------------------------------------

struct PreparedScan {
    RodeoConfig config;
    std::vector<harness::StateSpec> resolved_states;  // one per psi
};

PreparedScan prepare_scan(const ScanFlags& f) {
    PreparedScan ps;
    RodeoConfig& c = ps.config;
    c.model = model_spec(f.model);
    c.states = state_specs(f.model);
    c.ancillas = f.ancillas;
    c.e_min = f.grid.e_min;
    c.e_max = f.grid.e_max;
    c.de = f.grid.de;
    c.time = {f.tau, f.d};
    c.rounds = f.rounds;
    c.n_psi = f.n_psi > 0 ? f.n_psi : std::max<int>(1, static_cast<int>(c.states.size()));
    c.seed = f.seed;
    c.threads = std::max(1, f.threads);
    if (f.mode == "shots") {
        if (!f.shots) throw UsageError("--mode shots needs --shots COUNT");
        if (*f.shots < 1) throw UsageError("--shots must be >= 1");
        c.shots = *f.shots;
    } else if (f.shots) {
        throw UsageError("--shots is only valid with --mode shots");
    }
    if (f.threads < 1) throw UsageError("--threads must be >= 1");
    try {
        harness::validate(c);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return ps;
}

harness::ScanOutput execute_scan(const ScanFlags& f, PreparedScan& ps,
                                 const harness::PeakOptions& peak_options) {
    std::unique_ptr<std::ofstream> dataset;
    harness::RecordSink sink;
    if (!f.dataset.empty()) {
        dataset = std::make_unique<std::ofstream>(f.dataset);
        if (!*dataset) throw std::runtime_error("cannot open '" + f.dataset + "' for writing");
        sink = dataset::DatasetWriter(*dataset);
    }
    auto result = harness::run_scan(ps.config, sink);
    if (dataset) {
        dataset->close();
        if (!*dataset) throw std::runtime_error("failed writing '" + f.dataset + "'");
    }
    for (auto& scan : result.scans) scan.peaks = harness::detect_peaks(scan, peak_options);

    const int m = system_qubits(ps.config.model);
    for (int p = 0; p < ps.config.n_psi; ++p) {
        ps.resolved_states.push_back(
            ps.config.states.empty()
                ? harness::StateSpec{harness::random_angles_state(ps.config.seed,
                                                                  static_cast<std::uint32_t>(p), m)}
                : ps.config.states[static_cast<std::size_t>(p)]);
    }
    return result;
}

int cmd_scan(const ScanFlags& f, std::ostream& out, std::ostream& err) {
    auto ps = prepare_scan(f);
    const auto result = execute_scan(f, ps, f.peaks.options());
    std::ostream& summary = f.out.empty() ? err : out;
    const int n_psi = ps.config.n_psi;
    for (int p = 0; p < n_psi; ++p) {
        const auto& scan = result.scans[static_cast<std::size_t>(p)];
        Output table(psi_path(f.out, p, n_psi), out);
        if (f.out.empty() && n_psi > 1) *table << "# psi " << p << '\n';
        harness::write_scan_table(*table, scan);
        table.close();
        print_peaks(summary, scan.peaks, n_psi > 1 ? "psi " + std::to_string(p) + ": " : "");
    }
    summary << "# rides=" << result.ride_count << '\n';
    return kExitOk;
}

int cmd_compare(const ScanFlags& f, std::ostream& out, std::ostream&) {
    auto ps = prepare_scan(f);
    const GaussianTimeParams oracle_time{f.oracle_tau.value_or(f.tau), f.oracle_d.value_or(f.d)};
    oracle::validate(oracle_time);
    const auto result = execute_scan(f, ps, f.peaks.options());
    const auto h = harness::build_model(ps.config.model);
    const auto spectrum = hamiltonian::spectral_decompose(h);

    struct Offender {
        int psi;
        double energy, sim, expected, se, z;
    };
    std::vector<Offender> all;
    std::size_t within = 0;
    const int n_psi = ps.config.n_psi;
    for (int p = 0; p < n_psi; ++p) {
        const auto& scan = result.scans[static_cast<std::size_t>(p)];
        const auto psi = harness::build_state(ps.resolved_states[static_cast<std::size_t>(p)],
                                              h.num_qubits());
        const auto weights = oracle::overlaps_from_state(psi, spectrum);

        Output table(psi_path(f.out, p, n_psi), out);
        const bool write_table = !f.out.empty();
        if (write_table) *table << "energy,neg_h_mean,stderr,n_rounds,oracle\n";
        for (std::size_t i = 0; i < scan.energies.size(); ++i) {
            const double expected = -oracle::mean_score(weights, scan.energies[i], oracle_time);
            const double diff = std::abs(scan.mean_neg_h[i] - expected);
            const double se = scan.std_error[i];
            if (diff <= 5.0 * se + 1e-12) ++within;
            all.push_back({p, scan.energies[i], scan.mean_neg_h[i], expected, se,
                           se > 0.0 ? diff / se : (diff > 1e-12 ? INFINITY : 0.0)});
            if (write_table) {
                *table << harness::format_double(scan.energies[i]) << ','
                       << harness::format_double(scan.mean_neg_h[i]) << ','
                       << harness::format_double(se) << ',' << scan.n_rounds[i] << ','
                       << harness::format_double(expected) << '\n';
            }
        }
        table.close();
        print_peaks(out, scan.peaks, n_psi > 1 ? "psi " + std::to_string(p) + ": " : "");
    }

    const double fraction = static_cast<double>(within) / static_cast<double>(all.size());
    std::ostringstream s;
    s << std::setprecision(6);
    s << "points=" << all.size() << " within_5_stderr=" << within << " fraction=" << fraction
      << '\n';
    const bool ok = fraction >= 0.99;
    if (!ok) {
        std::stable_sort(all.begin(), all.end(),
                         [](const Offender& a, const Offender& b) { return a.z > b.z; });
        s << "worst offenders:\n";
        for (std::size_t k = 0; k < std::min<std::size_t>(5, all.size()); ++k) {
            const auto& o = all[k];
            s << "  psi=" << o.psi << " energy=" << o.energy << " sim=" << o.sim
              << " oracle=" << o.expected << " stderr=" << o.se << " z=" << o.z << '\n';
        }
    }
    s << (ok ? "PASS" : "FAIL") << '\n';
    out << s.str();
    return ok ? kExitOk : kExitCompareFailed;
}

int cmd_oracle(const OracleFlags& f, std::ostream& out, std::ostream& err) {
    const auto model = model_spec(f.model);
    const auto states = state_specs(f.model);
    if (states.size() != 1) throw UsageError("oracle takes exactly one --state");
    const auto& state = states.front();
    const int m = system_qubits(model);
    const GaussianTimeParams time{f.tau.value_or(m == 1 ? 10.0 : 0.0),
                                  f.d.value_or(m == 1 ? 7.0 : 10.0)};
    RodeoConfig grid_cfg;
    grid_cfg.e_min = f.grid.e_min;
    grid_cfg.e_max = f.grid.e_max;
    grid_cfg.de = f.grid.de;
    grid_cfg.time = time;
    try {
        harness::validate(grid_cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto* zeeman = std::get_if<harness::ZeemanModel>(&model);
    const auto* angles = std::get_if<harness::AnglesState>(&state);

    std::function<double(double)> curve;
    if (f.curve == "one-spin") {
        if (!zeeman || zeeman->spins != 1) throw UsageError("one-spin curve needs --spins 1");
        if (!angles || angles->angles.size() != 1)
            throw UsageError("one-spin curve needs --state theta=X");
        const double theta = angles->angles[0].first;
        const double b = zeeman->field;
        curve = [=](double e) { return -oracle::one_spin_curve(theta, b, e, time); };
    } else if (f.curve == "two-spin") {
        if (!zeeman || zeeman->spins != 2) throw UsageError("two-spin curve needs --spins 2");
        if (!angles || angles->angles.size() != 2)
            throw UsageError("two-spin curve needs --state theta=X;theta=Y");
        const double t1 = angles->angles[0].first, t2 = angles->angles[1].first;
        const double b = zeeman->field;
        curve = [=](double e) { return -oracle::two_spin_curve(t1, t2, b, e, time); };
    } else if (f.curve == "bell") {
        if (!zeeman || zeeman->spins != 2) throw UsageError("bell curve needs --spins 2");
        oracle::BellInput input;
        if (const auto* b = std::get_if<harness::BellStateSpec>(&state)) {
            input = b->kind;
        } else if (const auto* mix = std::get_if<harness::MixState>(&state)) {
            input = oracle::BellMix{mix->family, mix->alpha};
        } else {
            throw UsageError("bell curve needs --state bell=... or mix=...");
        }
        const double b = zeeman->field;
        curve = [=](double e) { return -oracle::bell_curve(input, b, e, time); };
    } else {
        const auto h = harness::build_model(model);
        const auto spectrum = hamiltonian::spectral_decompose(h);
        qcore::StateVector psi(0);
        try {
            psi = harness::build_state(state, h.num_qubits());
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        const auto weights = oracle::overlaps_from_state(psi, spectrum);
        curve = [=](double e) { return -oracle::mean_score(weights, e, time); };
    }

    ScanResult r;
    r.time = time;
    for (double e : harness::energy_grid(grid_cfg)) {
        r.energies.push_back(e);
        r.mean_neg_h.push_back(curve(e));
        r.std_error.push_back(0.0);
        r.n_rounds.push_back(0);
    }
    r.peaks = harness::detect_peaks(r, f.peaks.options());
    Output table(f.out, out);
    harness::write_scan_table(*table, r);
    table.close();
    print_peaks(f.out.empty() ? err : out, r.peaks, "");
    return kExitOk;
}

int cmd_dos(const DosFlags& f, std::ostream& out) {
    if (!(f.d > 0.0) || !std::isfinite(f.d)) throw UsageError("--d must be > 0");
    RodeoConfig grid_cfg;
    grid_cfg.e_min = f.grid.e_min;
    grid_cfg.e_max = f.grid.e_max;
    grid_cfg.de = f.grid.de;
    try {
        harness::validate(grid_cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto grid = harness::energy_grid(grid_cfg);
    const auto curve = oracle::entropy_and_beta(grid, f.field, {f.tau, f.d});
    double integral = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        integral += 0.5 * (grid[i] - grid[i - 1]) * (curve.omega[i] + curve.omega[i - 1]);

    Output table(f.out, out);
    *table << "energy,omega,entropy,beta\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        *table << harness::format_double(grid[i]) << ',' << harness::format_double(curve.omega[i])
               << ',' << harness::format_double(curve.entropy[i]) << ','
               << harness::format_double(curve.beta[i]) << '\n';
    }
    *table << "# integral_omega=" << harness::format_double(integral) << '\n';
    table.close();
    return kExitOk;
}

int cmd_peaks(const PeaksFlags& f, std::ostream& out) {
    std::ifstream in(f.in);
    if (!in) throw std::runtime_error("cannot read scan table '" + f.in + "'");
    auto scan = harness::read_scan_table(in, {10.0, 7.0});
    if (f.tau) scan.time.tau = *f.tau;
    if (f.d) scan.time.d = *f.d;
    if (!(scan.time.d > 0.0)) throw UsageError("--d must be > 0");
    const auto peaks = harness::detect_peaks(scan, f.peaks.options());
    print_peaks(out, peaks, "");
    return kExitOk;
}

}  // namespace

double parse_angle(const std::string& raw) {
    static const std::regex pi_form(R"(^([+-]?(?:[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)?)\*?pi(?:/([0-9]*\.?[0-9]+))?$)");
    const std::string text = trim(raw);
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        double coef = 1.0;
        const std::string c = m[1].str();
        if (c == "-") coef = -1.0;
        else if (!c.empty() && c != "+") coef = parse_number(c);
        double value = coef * std::numbers::pi;
        if (m[2].matched) value /= parse_number(m[2].str());
        return value;
    }
    return parse_number(text);
}

harness::StateSpec parse_state(const std::string& raw) {
    const std::string text = trim(raw);
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value in '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));

    if (key == "bell") return harness::BellStateSpec{harness::parse_bell_name(value)};
    if (key == "mix") {
        const auto colon = value.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("mix needs FAMILY:ALPHA");
        const std::string family = trim(value.substr(0, colon));
        if (family != "phi" && family != "psi")
            throw std::invalid_argument("mix family must be phi or psi");
        return harness::MixState{family == "phi" ? oracle::BellFamily::Phi : oracle::BellFamily::Psi,
                                 parse_angle(value.substr(colon + 1))};
    }
    if (key == "amps") return read_amplitude_file(value);
    if (key != "theta") throw std::invalid_argument("unknown state form '" + key + "'");

    harness::AnglesState s;
    for (const auto& qubit : split(text, ';')) {
        double theta = 0.0, phi = 0.0;
        bool have_theta = false;
        for (const auto& kv : split(qubit, ',')) {
            const auto e = kv.find('=');
            if (e == std::string::npos) throw std::invalid_argument("expected key=value in '" + kv + "'");
            const std::string k = trim(kv.substr(0, e));
            const double v = parse_angle(kv.substr(e + 1));
            if (k == "theta") {
                theta = v;
                have_theta = true;
            } else if (k == "phi") {
                phi = v;
            } else {
                throw std::invalid_argument("unknown angle '" + k + "'");
            }
        }
        if (!have_theta) throw std::invalid_argument("each qubit needs theta=");
        s.angles.emplace_back(theta, phi);
    }
    return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rodeo eigenvalue-filter simulator and analytic oracle", "rodeo"};
    app.require_subcommand(1);

    ScanFlags scan_flags, compare_flags;
    OracleFlags oracle_flags;
    DosFlags dos_flags;
    PeaksFlags peaks_flags;

    auto* scan = app.add_subcommand("scan", "Monte Carlo energy scan; writes the -h table");
    scan->footer(kReferenceSettings);
    add_scan_options(scan, scan_flags);

    auto* compare = app.add_subcommand(
        "compare", "Scan and closed-form curve on one grid; exit 3 unless 99% of points agree "
                   "within 5 standard errors");
    compare->footer(kReferenceSettings);
    add_scan_options(compare, compare_flags);
    compare->add_option("--oracle-tau", compare_flags.oracle_tau,
                        "Override tau for the closed-form side only");
    compare->add_option("--oracle-d", compare_flags.oracle_d,
                        "Override d for the closed-form side only");

    auto* orc = app.add_subcommand("oracle", "Closed-form -h curve on the energy grid");
    orc->footer(std::string(kReferenceSettings) +
                " Without --tau/--d the one- or two-spin values are used by spin count.");
    add_model_options(orc, oracle_flags.model, true);
    add_grid_options(orc, oracle_flags.grid);
    orc->add_option("--curve", oracle_flags.curve, "mean, one-spin, two-spin or bell")
        ->check(CLI::IsMember({"mean", "one-spin", "two-spin", "bell"}))
        ->capture_default_str();
    orc->add_option("--tau", oracle_flags.tau, "Mean evolution time");
    orc->add_option("--d", oracle_flags.d, "Evolution time standard deviation");
    orc->add_option("--out", oracle_flags.out, "Table path (default: standard output)");
    add_peak_options(orc, oracle_flags.peaks);

    auto* dos = app.add_subcommand("dos", "Two-spin Zeeman density of states, entropy and beta");
    add_grid_options(dos, dos_flags.grid);
    dos->add_option("--field", dos_flags.field, "Zeeman field B")->required();
    dos->add_option("--d", dos_flags.d, "Evolution time standard deviation (> 0)")->required();
    dos->add_option("--tau", dos_flags.tau, "Mean evolution time")->capture_default_str();
    dos->add_option("--out", dos_flags.out, "Table path (default: standard output)");

    auto* peaks = app.add_subcommand("peaks", "Detect peaks in an existing scan table");
    peaks->add_option("--in", peaks_flags.in, "Scan table path")->required();
    peaks->add_option("--tau", peaks_flags.tau, "Override the table's tau (default from footer, else 10)");
    peaks->add_option("--d", peaks_flags.d, "Override the table's d (default from footer, else 7)");
    add_peak_options(peaks, peaks_flags.peaks);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (scan->parsed()) return cmd_scan(scan_flags, out, err);
        if (compare->parsed()) return cmd_compare(compare_flags, out, err);
        if (orc->parsed()) return cmd_oracle(oracle_flags, out, err);
        if (dos->parsed()) return cmd_dos(dos_flags, out);
        if (peaks->parsed()) return cmd_peaks(peaks_flags, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace rodeo::cli
