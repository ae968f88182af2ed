#include "rodeo/dataset.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace rodeo::dataset {

using json = nlohmann::ordered_json;
using harness::AmplitudeState;
using harness::AnglesState;
using harness::BellStateSpec;
using harness::CustomModel;
using harness::MixState;
using harness::ZeemanModel;

namespace {

double finite(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string("dataset: non-finite value in field ") + field);
    }
    return v;
}

json model_to_json(const harness::ModelSpec& model) {
    if (const auto* z = std::get_if<ZeemanModel>(&model)) {
        return json{{"name", "zeeman"}, {"spins", z->spins}, {"field", finite(z->field, "model")}};
    }
    return json{{"name", "custom"}, {"path", std::get<CustomModel>(model).path}};
}

json psi_to_json(const harness::StateSpec& psi) {
    if (const auto* a = std::get_if<AnglesState>(&psi)) {
        json list = json::array();
        for (const auto& [theta, phi] : a->angles)
            list.push_back(json::array({finite(theta, "psi"), finite(phi, "psi")}));
        return json{{"angles", list}};
    }
    if (const auto* b = std::get_if<BellStateSpec>(&psi)) {
        return json{{"bell", harness::bell_name(b->kind)}};
    }
    if (const auto* m = std::get_if<MixState>(&psi)) {
        return json{{"mix",
                     json{{"family", m->family == oracle::BellFamily::Phi ? "phi" : "psi"},
                          {"alpha", finite(m->alpha, "psi")}}}};
    }
    json list = json::array();
    for (const auto& c : std::get<AmplitudeState>(psi).amplitudes)
        list.push_back(json::array({finite(c.real(), "psi"), finite(c.imag(), "psi")}));
    return json{{"amplitudes", list}};
}

class LineReader {
  public:
    LineReader(const json& obj, std::size_t line) : obj_(obj), line_(line) {}

    [[noreturn]] void fail(const std::string& field, const std::string& why) const {
        throw std::runtime_error("dataset line " + std::to_string(line_) + ", field '" + field +
                                 "': " + why);
    }

    const json& at(const json& obj, const std::string& field) const {
        if (!obj.is_object()) fail(field, "enclosing value is not an object");
        const auto it = obj.find(field);
        if (it == obj.end()) fail(field, "missing");
        return *it;
    }
    const json& at(const std::string& field) const { return at(obj_, field); }

    std::int64_t integer(const json& v, const std::string& field) const {
        if (!v.is_number_integer()) fail(field, "expected an integer");
        return v.get<std::int64_t>();
    }
    double number(const json& v, const std::string& field) const {
        if (!v.is_number()) fail(field, "expected a number");
        return v.get<double>();
    }
    std::string text(const json& v, const std::string& field) const {
        if (!v.is_string()) fail(field, "expected a string");
        return v.get<std::string>();
    }
    const json& array(const json& v, const std::string& field) const {
        if (!v.is_array()) fail(field, "expected an array");
        return v;
    }
    std::pair<double, double> number_pair(const json& v, const std::string& field) const {
        if (!v.is_array() || v.size() != 2) fail(field, "expected a pair of numbers");
        return {number(v[0], field), number(v[1], field)};
    }

  private:
    const json& obj_;
    std::size_t line_;
};

harness::ModelSpec model_from_json(const LineReader& r, const json& m) {
    const auto name = r.text(r.at(m, "name"), "model.name");
    if (name == "zeeman") {
        return ZeemanModel{static_cast<int>(r.integer(r.at(m, "spins"), "model.spins")),
                           r.number(r.at(m, "field"), "model.field")};
    }
    if (name == "custom") return CustomModel{r.text(r.at(m, "path"), "model.path")};
    r.fail("model.name", "unknown model '" + name + "'");
}

harness::StateSpec psi_from_json(const LineReader& r, const json& p) {
    if (!p.is_object() || p.size() != 1) r.fail("psi", "expected an object with one key");
    if (p.contains("angles")) {
        AnglesState s;
        for (const auto& item : r.array(p["angles"], "psi.angles"))
            s.angles.push_back(r.number_pair(item, "psi.angles"));
        return s;
    }
    if (p.contains("bell")) {
        try {
            return BellStateSpec{harness::parse_bell_name(r.text(p["bell"], "psi.bell"))};
        } catch (const std::invalid_argument& e) {
            r.fail("psi.bell", e.what());
        }
    }
    if (p.contains("mix")) {
        const json& m = p["mix"];
        const auto family = r.text(r.at(m, "family"), "psi.mix.family");
        if (family != "phi" && family != "psi") r.fail("psi.mix.family", "expected phi or psi");
        return MixState{family == "phi" ? oracle::BellFamily::Phi : oracle::BellFamily::Psi,
                        r.number(r.at(m, "alpha"), "psi.mix.alpha")};
    }
    if (p.contains("amplitudes")) {
        AmplitudeState s;
        for (const auto& item : r.array(p["amplitudes"], "psi.amplitudes")) {
            const auto [re, im] = r.number_pair(item, "psi.amplitudes");
            s.amplitudes.emplace_back(re, im);
        }
        return s;
    }
    r.fail("psi", "unknown state descriptor '" + p.begin().key() + "'");
}

}  // namespace

std::string to_line(const RideRecord& rec) {
    json times = json::array();
    for (double t : rec.times) times.push_back(finite(t, "times"));

    json obj;
    obj["ride_index"] = rec.ride_index;
    obj["psi_index"] = rec.psi_index;
    obj["grid_index"] = rec.grid_index;
    obj["round"] = rec.round;
    obj["times"] = std::move(times);
    obj["E"] = finite(rec.energy, "E");
    obj["d"] = finite(rec.d, "d");
    obj["tau"] = finite(rec.tau, "tau");
    obj["model"] = model_to_json(rec.model);
    obj["psi"] = psi_to_json(rec.psi);
    json zeta = json::array();
    if (const auto* z = std::get_if<std::vector<double>>(&rec.zeta)) {
        obj["mode"] = "exact";
        for (double v : *z) zeta.push_back(finite(v, "zeta"));
        obj["zeta"] = std::move(zeta);
    } else {
        obj["mode"] = "shots";
        for (const auto& c : std::get<std::vector<engine::ShotCounts>>(rec.zeta))
            zeta.push_back(json::array({c.n_up, c.n_down}));
        obj["zeta"] = std::move(zeta);
        obj["shots"] = rec.shots;
    }
    return obj.dump();
}

RideRecord from_line(const std::string& line, std::size_t line_number) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("dataset line " + std::to_string(line_number) +
                                 ": malformed JSON (" + e.what() + ")");
    }
    const LineReader r(obj, line_number);
    if (!obj.is_object()) r.fail("<record>", "expected an object");

    RideRecord rec;
    rec.ride_index = r.integer(r.at("ride_index"), "ride_index");
    rec.psi_index = r.integer(r.at("psi_index"), "psi_index");
    rec.grid_index = r.integer(r.at("grid_index"), "grid_index");
    rec.round = r.integer(r.at("round"), "round");
    for (const auto& t : r.array(r.at("times"), "times")) rec.times.push_back(r.number(t, "times"));
    rec.energy = r.number(r.at("E"), "E");
    rec.d = r.number(r.at("d"), "d");
    rec.tau = r.number(r.at("tau"), "tau");
    rec.model = model_from_json(r, r.at("model"));
    rec.psi = psi_from_json(r, r.at("psi"));

    const auto mode = r.text(r.at("mode"), "mode");
    const auto& zeta = r.array(r.at("zeta"), "zeta");
    if (mode == "exact") {
        std::vector<double> z;
        for (const auto& v : zeta) z.push_back(r.number(v, "zeta"));
        rec.zeta = std::move(z);
        if (obj.contains("shots")) r.fail("shots", "present in exact mode");
    } else if (mode == "shots") {
        std::vector<engine::ShotCounts> z;
        for (const auto& v : zeta) {
            if (!v.is_array() || v.size() != 2) r.fail("zeta", "expected [n_up, n_down] pairs");
            z.push_back({r.integer(v[0], "zeta"), r.integer(v[1], "zeta")});
        }
        rec.zeta = std::move(z);
        rec.shots = r.integer(r.at("shots"), "shots");
    } else {
        r.fail("mode", "expected exact or shots, got '" + mode + "'");
    }
    if (std::visit([](const auto& z) { return z.size(); }, rec.zeta) != rec.times.size()) {
        r.fail("zeta", "length differs from times");
    }
    return rec;
}

void write_dataset(const std::vector<RideRecord>& records, std::ostream& out) {
    for (const auto& rec : records) out << to_line(rec) << '\n';
}

std::vector<RideRecord> read_dataset(std::istream& in) {
    std::vector<RideRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(from_line(line, lineno));
    }
    return out;
}

void DatasetWriter::operator()(const RideRecord& record) { out_ << to_line(record) << '\n'; }

}  // namespace rodeo::dataset
