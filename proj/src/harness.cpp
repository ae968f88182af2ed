#include "rodeo/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rodeo/peaks.hpp"
#include "rodeo/random.hpp"

namespace rodeo::harness {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_two_qubits(int system_qubits, const char* what) {
    if (system_qubits != 2) {
        throw std::invalid_argument(std::string(what) + " states need a 2-qubit system, got " +
                                    std::to_string(system_qubits));
    }
}

}  // namespace

hamiltonian::HermitianOperator build_model(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const ZeemanModel& z) {
                              return hamiltonian::zeeman({z.spins, z.field});
                          },
                          [](const CustomModel& c) { return hamiltonian::load_matrix_file(c.path); },
                      },
                      model);
}

qcore::StateVector build_state(const StateSpec& spec, int system_qubits) {
    return std::visit(
        overloaded{
            [&](const AnglesState& s) {
                if (static_cast<int>(s.angles.size()) != system_qubits) {
                    throw std::invalid_argument("angle state lists " +
                                                std::to_string(s.angles.size()) +
                                                " qubits, model has " +
                                                std::to_string(system_qubits));
                }
                qcore::StateVector psi(0, {Complex{1.0, 0.0}});
                for (const auto& [theta, phi] : s.angles) {
                    const auto one = qcore::apply_single_qubit_gate(
                        qcore::StateVector(1), qcore::u3(theta, phi, 0.0), 0);
                    psi = qcore::tensor(psi, one);
                }
                return psi;
            },
            [&](const BellStateSpec& s) {
                require_two_qubits(system_qubits, "Bell");
                return oracle::bell_state(s.kind);
            },
            [&](const MixState& s) {
                require_two_qubits(system_qubits, "mixed Bell");
                return oracle::bell_state(oracle::BellMix{s.family, s.alpha});
            },
            [&](const AmplitudeState& s) {
                if (system_qubits < 0 || s.amplitudes.size() != (std::size_t{1} << system_qubits)) {
                    throw std::invalid_argument("amplitude list has " +
                                                std::to_string(s.amplitudes.size()) +
                                                " entries, expected 2^" +
                                                std::to_string(system_qubits));
                }
                qcore::StateVector psi(system_qubits, s.amplitudes);
                if (!psi.is_normalized(1e-10)) {
                    throw std::invalid_argument("amplitude list is not normalized");
                }
                return psi;
            },
        },
        spec);
}

AnglesState random_angles_state(std::uint64_t seed, std::uint32_t psi_index, int system_qubits) {
    RandomStream rng(seed, 0xFFFFFFFFu, 0, psi_index, kStateDomain);
    AnglesState s;
    for (int q = 0; q < system_qubits; ++q) {
        const double theta = std::numbers::pi * rng.uniform();
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        s.angles.emplace_back(theta, phi);
    }
    return s;
}

std::string bell_name(oracle::BellState kind) {
    switch (kind) {
        case oracle::BellState::PhiPlus: return "phi+";
        case oracle::BellState::PhiMinus: return "phi-";
        case oracle::BellState::PsiPlus: return "psi+";
        case oracle::BellState::PsiMinus: return "psi-";
    }
    return "?";
}

oracle::BellState parse_bell_name(const std::string& name) {
    if (name == "phi+") return oracle::BellState::PhiPlus;
    if (name == "phi-") return oracle::BellState::PhiMinus;
    if (name == "psi+") return oracle::BellState::PsiPlus;
    if (name == "psi-") return oracle::BellState::PsiMinus;
    throw std::invalid_argument("unknown Bell state '" + name + "' (phi+|phi-|psi+|psi-)");
}

// ---------------------------------------------------------------------------

void validate(const RodeoConfig& c) {
    if (!std::isfinite(c.e_min) || !std::isfinite(c.e_max) || !(c.e_min < c.e_max)) {
        throw std::invalid_argument("energy grid needs e_min < e_max");
    }
    if (!(c.de > 0.0) || !std::isfinite(c.de)) throw std::invalid_argument("ΔE must be > 0");
    if (grid_intervals(c) < 1) throw std::invalid_argument("energy grid has no intervals");
    oracle::validate(c.time);
    if (c.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (c.n_psi < 1) throw std::invalid_argument("n_psi must be >= 1");
    if (c.ancillas < 1) throw std::invalid_argument("ancillas must be >= 1");
    if (c.shots < 0) throw std::invalid_argument("shots must be >= 0");
    if (!c.states.empty() && static_cast<int>(c.states.size()) != c.n_psi) {
        throw std::invalid_argument("state list has " + std::to_string(c.states.size()) +
                                    " entries but n_psi is " + std::to_string(c.n_psi));
    }
}

std::size_t grid_intervals(const RodeoConfig& c) {
    const double n = std::round((c.e_max - c.e_min) / c.de);
    return n < 1.0 ? 0 : static_cast<std::size_t>(n);
}

std::vector<double> energy_grid(const RodeoConfig& c) {
    const std::size_t n = grid_intervals(c);
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = c.e_min + static_cast<double>(i) * c.de;
    return grid;
}

double ride_score(const RideRecord& record) {
    return std::visit(overloaded{
                          [](const std::vector<double>& z) {
                              if (z.empty()) throw std::invalid_argument("ride record has no zeta");
                              double s = 0.0;
                              for (double v : z) s += v;
                              return s / static_cast<double>(z.size());
                          },
                          [](const std::vector<engine::ShotCounts>& z) {
                              if (z.empty()) throw std::invalid_argument("ride record has no zeta");
                              double s = 0.0;
                              for (const auto& c : z) {
                                  const auto total = c.n_up + c.n_down;
                                  if (total <= 0) throw std::invalid_argument("zero shot total");
                                  s += static_cast<double>(c.n_up - c.n_down) /
                                       static_cast<double>(total);
                              }
                              return s / static_cast<double>(z.size());
                          },
                      },
                      record.zeta);
}

std::vector<double> sample_times(const GaussianTimeParams& p, int count, RandomStream& rng) {
    oracle::validate(p);
    std::vector<double> t(static_cast<std::size_t>(std::max(count, 0)));
    for (double& v : t) v = p.tau + p.d * rng.normal();
    return t;
}

// ---------------------------------------------------------------------------

namespace {

struct PsiJob {
    StateSpec spec;
    qcore::StateVector state;
};

std::vector<RideRecord> rides_at_grid_point(const RodeoConfig& c,
                                            const hamiltonian::SpectralDecomposition& spectrum,
                                            const PsiJob& job, std::size_t p, std::size_t i,
                                            double energy, std::size_t grid_size) {
    std::vector<RideRecord> out;
    out.reserve(static_cast<std::size_t>(c.rounds));
    for (int r = 0; r < c.rounds; ++r) {
        const auto ii = static_cast<std::uint32_t>(i);
        const auto rr = static_cast<std::uint32_t>(r);
        const auto pp = static_cast<std::uint32_t>(p);
        RandomStream time_rng(c.seed, ii, rr, pp, kTimesDomain);
        auto times = sample_times(c.time, c.ancillas, time_rng);

        const engine::RidePlan plan(spectrum, job.state, energy, times);
        const auto outcome = engine::ride(plan);

        RideRecord rec;
        rec.ride_index = static_cast<std::int64_t>((p * grid_size + i) *
                                                   static_cast<std::size_t>(c.rounds)) +
                         r;
        rec.psi_index = static_cast<std::int64_t>(p);
        rec.grid_index = static_cast<std::int64_t>(i);
        rec.round = r;
        rec.times = std::move(times);
        rec.energy = energy;
        rec.d = c.time.d;
        rec.tau = c.time.tau;
        rec.model = c.model;
        rec.psi = job.spec;
        if (c.shots > 0) {
            RandomStream shot_rng(c.seed, ii, rr, pp, kShotsDomain);
            rec.zeta = engine::shot_estimate(outcome, c.shots, shot_rng);
            rec.shots = c.shots;
        } else {
            rec.zeta = outcome.per_ancilla_z;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

ScanOutput run_scan(const RodeoConfig& config, const RecordSink& sink) {
    validate(config);
    const auto h = build_model(config.model);
    const auto spectrum = hamiltonian::spectral_decompose(h);
    const int m = h.num_qubits();
    if (config.ancillas + m > qcore::kMaxQubits) {
        throw std::invalid_argument("ancillas + system qubits exceed the " +
                                    std::to_string(qcore::kMaxQubits) + "-qubit cap");
    }

    std::vector<PsiJob> jobs;
    for (int p = 0; p < config.n_psi; ++p) {
        StateSpec spec = config.states.empty()
                             ? StateSpec{random_angles_state(config.seed,
                                                             static_cast<std::uint32_t>(p), m)}
                             : config.states[static_cast<std::size_t>(p)];
        auto state = build_state(spec, m);
        jobs.push_back({std::move(spec), std::move(state)});
    }

    const auto grid = energy_grid(config);
    const std::size_t g = grid.size();
    const int workers =
        std::clamp(config.threads, 1, static_cast<int>(std::min<std::size_t>(g, 256)));

    ScanOutput result;
    for (std::size_t p = 0; p < jobs.size(); ++p) {
        std::vector<std::vector<RideRecord>> per_point(g);
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        auto work = [&](int w) {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < g;
                     i += static_cast<std::size_t>(workers)) {
                    per_point[i] = rides_at_grid_point(config, spectrum, jobs[p], p, i, grid[i], g);
                }
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);

        std::vector<RideRecord> all;
        all.reserve(g * static_cast<std::size_t>(config.rounds));
        for (auto& point : per_point)
            for (auto& rec : point) all.push_back(std::move(rec));
        if (sink)
            for (const auto& rec : all) sink(rec);
        result.ride_count += static_cast<std::int64_t>(all.size());

        auto scan = aggregate(all, config.time);
        scan.peaks = detect_peaks(scan);
        result.scans.push_back(std::move(scan));
    }
    return result;
}

ScanResult aggregate(const std::vector<RideRecord>& records, const GaussianTimeParams& time) {
    struct Acc {
        double energy = 0.0;
        std::vector<double> scores;
    };
    std::map<std::int64_t, Acc> groups;
    for (const auto& rec : records) {
        if (rec.psi_index != records.front().psi_index) {
            throw std::invalid_argument("aggregate: records mix several psi indices");
        }
        auto& acc = groups[rec.grid_index];
        acc.energy = rec.energy;
        acc.scores.push_back(ride_score(rec));
    }
    ScanResult out;
    out.time = time;
    for (const auto& [idx, acc] : groups) {
        const double n = static_cast<double>(acc.scores.size());
        double mean = 0.0;
        for (double s : acc.scores) mean += s;
        mean /= n;
        double se = 0.0;
        if (acc.scores.size() >= 2) {
            double var = 0.0;
            for (double s : acc.scores) var += (s - mean) * (s - mean);
            se = std::sqrt(var / n / n);
        }
        out.energies.push_back(acc.energy);
        out.mean_neg_h.push_back(-mean);
        out.std_error.push_back(se);
        out.n_rounds.push_back(static_cast<std::int64_t>(acc.scores.size()));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_scan_table(std::ostream& out, const ScanResult& r) {
    out << "energy,neg_h_mean,stderr,n_rounds\n";
    for (std::size_t i = 0; i < r.energies.size(); ++i) {
        out << format_double(r.energies[i]) << ',' << format_double(r.mean_neg_h[i]) << ','
            << format_double(r.std_error[i]) << ',' << r.n_rounds[i] << '\n';
    }
    out << "# tau=" << format_double(r.time.tau) << ",d=" << format_double(r.time.d) << '\n';
}

namespace {

template <class T>
T parse_field(const std::string& text, std::size_t line, const char* name) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::runtime_error("scan table line " + std::to_string(line) + ": bad " + name +
                                 " '" + text + "'");
    }
    return value;
}

}  // namespace

ScanResult read_scan_table(std::istream& in, const GaussianTimeParams& fallback) {
    ScanResult r;
    r.time = fallback;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# tau=", 0) == 0) {
            const auto comma = line.find(",d=");
            if (comma == std::string::npos) {
                throw std::runtime_error("scan table line " + std::to_string(lineno) +
                                         ": malformed footer '" + line + "'");
            }
            r.time.tau = parse_field<double>(line.substr(6, comma - 6), lineno, "tau");
            r.time.d = parse_field<double>(line.substr(comma + 3), lineno, "d");
            continue;
        }
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "energy,neg_h_mean,stderr,n_rounds") {
                throw std::runtime_error("scan table line " + std::to_string(lineno) +
                                         ": unexpected header '" + line + "'");
            }
            header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) {
            throw std::runtime_error("scan table line " + std::to_string(lineno) +
                                     ": expected 4 columns, got " + std::to_string(cells.size()));
        }
        r.energies.push_back(parse_field<double>(cells[0], lineno, "energy"));
        r.mean_neg_h.push_back(parse_field<double>(cells[1], lineno, "neg_h_mean"));
        r.std_error.push_back(parse_field<double>(cells[2], lineno, "stderr"));
        r.n_rounds.push_back(parse_field<std::int64_t>(cells[3], lineno, "n_rounds"));
    }
    if (!header) throw std::runtime_error("scan table is empty");
    return r;
}

}  // namespace rodeo::harness
