#include "fslphase/scenario_io.hpp"

#include "fslphase/gravimetry.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <set>
#include <sstream>

namespace fslphase {

namespace {

using json = nlohmann::json;

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
    const auto it = parent.find(key);
    if (it == parent.end()) throw SchemaError(path, "missing section");
    if (!it->is_object()) throw SchemaError(path, "must be an object");
    return *it;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw SchemaError(prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
}

bool has(const json& obj, const std::string& key) { return obj.find(key) != obj.end(); }

bool is_resonant(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it != obj.end() && it->is_string() && it->get<std::string>() == "resonant";
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path, "missing key");
    if (!it->is_number()) throw SchemaError(path, "must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw SchemaError(path, "must be finite");
    return v;
}

int weight(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path, "missing key");
    if (!it->is_number_integer()) throw SchemaError(path, "must be an integer in {-1, 0, 1}");
    return it->get<int>();
}

Geometry parse_geometry(const json& g) {
    if (has(g, "pulses")) {
        reject_unknown(g, {"pulses"}, "geometry");
        const auto& arr = g.at("pulses");
        if (!arr.is_array()) throw SchemaError("geometry.pulses", "must be an array");
        std::vector<PulseEvent> pulses;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "geometry.pulses[" + std::to_string(i) + "]";
            if (!arr[i].is_object()) throw SchemaError(path, "must be an object");
            reject_unknown(arr[i], {"time_s", "w1", "w2"}, path);
            pulses.push_back({number(arr[i], "time_s", path + ".time_s"), weight(arr[i], "w1", path + ".w1"),
                              weight(arr[i], "w2", path + ".w2")});
        }
        try {
            return Geometry::create(std::move(pulses));
        } catch (const ConfigurationError& e) {
            throw SchemaError("geometry.pulses", e.what());
        }
    }
    reject_unknown(g, {"builtin", "T_s"}, "geometry");
    const auto it = g.find("builtin");
    if (it == g.end()) throw SchemaError("geometry.builtin", "missing key (or give geometry.pulses)");
    if (!it->is_string()) throw SchemaError("geometry.builtin", "must be \"mzi\" or \"butterfly\"");
    const std::string name = it->get<std::string>();
    const double T = number(g, "T_s", "geometry.T_s");
    if (!(T > 0.0)) throw SchemaError("geometry.T_s", "must be positive");
    if (name == "mzi") return build_mzi(T);
    if (name == "butterfly") return build_butterfly(T);
    throw SchemaError("geometry.builtin", "must be \"mzi\" or \"butterfly\"");
}

ScenarioFile from_json(const json& doc) {
    if (!doc.is_object()) throw SchemaError("<document>", "top level must be an object");
    reject_unknown(doc, {"constants", "atom", "lasers", "geometry", "gravity", "compensation"}, "");

    ScenarioFile file;
    Scenario& s = file.scenario;

    const json& constants = require_object(doc, "constants", "constants");
    reject_unknown(constants, {"c", "hbar"}, "constants");
    s.constants.c = number(constants, "c", "constants.c");
    s.constants.hbar = number(constants, "hbar", "constants.hbar");
    if (!(s.constants.c > 0.0)) throw SchemaError("constants.c", "must be positive");
    if (!(s.constants.hbar > 0.0)) throw SchemaError("constants.hbar", "must be positive");

    const json& atom = require_object(doc, "atom", "atom");
    reject_unknown(atom, {"m_bar_kg", "omega_A_rad_s", "z0_m", "v0_m_s", "v_res_m_s"}, "atom");
    s.species.m_bar = number(atom, "m_bar_kg", "atom.m_bar_kg");
    if (!(s.species.m_bar > 0.0)) throw SchemaError("atom.m_bar_kg", "must be positive");
    s.initial.z0 = number(atom, "z0_m", "atom.z0_m");
    s.initial.v0 = number(atom, "v0_m_s", "atom.v0_m_s");
    s.initial.v_R = number(atom, "v_res_m_s", "atom.v_res_m_s");
    const bool omega_resonant = is_resonant(atom, "omega_A_rad_s");
    if (!omega_resonant) s.species.omega_A = number(atom, "omega_A_rad_s", "atom.omega_A_rad_s");

    const json& lasers = require_object(doc, "lasers", "lasers");
    reject_unknown(lasers, {"mechanism", "K_rad_m", "delta_k_rad_m", "sigma_m_s2", "L_m", "phi_off_rad"}, "lasers");
    const auto mech_it = lasers.find("mechanism");
    if (mech_it == lasers.end()) throw SchemaError("lasers.mechanism", "missing key");
    if (!mech_it->is_string()) throw SchemaError("lasers.mechanism", "must be one of SPT, Bragg, Raman, E1M1");
    const auto kind = parse_mechanism(mech_it->get<std::string>());
    if (!kind) throw SchemaError("lasers.mechanism", "must be one of SPT, Bragg, Raman, E1M1");
    s.mechanism.kind = *kind;
    s.mechanism.K = number(lasers, "K_rad_m", "lasers.K_rad_m");
    const bool dk_resonant = is_resonant(lasers, "delta_k_rad_m");
    if (!dk_resonant) s.mechanism.delta_k = number(lasers, "delta_k_rad_m", "lasers.delta_k_rad_m");
    s.sigma = number(lasers, "sigma_m_s2", "lasers.sigma_m_s2");
    s.L = number(lasers, "L_m", "lasers.L_m");
    if (!(s.L >= 0.0)) throw SchemaError("lasers.L_m", "must be non-negative");
    s.phi_off = number(lasers, "phi_off_rad", "lasers.phi_off_rad");

    if (omega_resonant && s.mechanism.kind != MechanismKind::SPT)
        throw SchemaError("atom.omega_A_rad_s", "\"resonant\" is only available for SPT");
    if (dk_resonant && s.mechanism.kind == MechanismKind::SPT)
        throw SchemaError("lasers.delta_k_rad_m", "SPT fixes delta_k = K; give the number");
    s.mechanism.omega_A = s.species.omega_A;
    if (omega_resonant || dk_resonant) {
        if (s.mechanism.kind == MechanismKind::SPT) s.mechanism.delta_k = s.mechanism.K;
        s.mechanism = tune_to_resonance(s.mechanism, s.initial.v_R, s.species.m_bar, s.constants);
        s.species.omega_A = s.mechanism.omega_A;
    }
    try {
        s.mechanism.validate(s.constants);
    } catch (const ConfigurationError& e) {
        throw SchemaError("lasers", e.what());
    }

    const json& geometry = require_object(doc, "geometry", "geometry");
    s.geometry = parse_geometry(geometry);

    const json& gravity = require_object(doc, "gravity", "gravity");
    reject_unknown(gravity, {"g_m_s2"}, "gravity");
    s.g = number(gravity, "g_m_s2", "gravity.g_m_s2");

    if (has(doc, "compensation")) {
        const json& comp = require_object(doc, "compensation", "compensation");
        reject_unknown(comp, {"enabled", "Gamma_m_s2"}, "compensation");
        const auto en = comp.find("enabled");
        if (en == comp.end()) throw SchemaError("compensation.enabled", "missing key");
        if (!en->is_boolean()) throw SchemaError("compensation.enabled", "must be true or false");
        file.compensation.enabled = en->get<bool>();
        file.compensation.Gamma = number(comp, "Gamma_m_s2", "compensation.Gamma_m_s2");
        if (file.compensation.enabled) {
            try {
                s = with_compensation(s, file.compensation.Gamma);
            } catch (const ConfigurationError& e) {
                throw SchemaError("compensation", e.what());
            }
        }
    }
    try {
        s.validate();
    } catch (const ConfigurationError& e) {
        throw SchemaError("<document>", e.what());
    }
    return file;
}

json to_json(const ScenarioFile& file) {
    const Scenario& s = file.scenario;
    json doc;
    doc["constants"] = {{"c", s.constants.c}, {"hbar", s.constants.hbar}};
    doc["atom"] = {{"m_bar_kg", s.species.m_bar},
                   {"omega_A_rad_s", s.species.omega_A},
                   {"z0_m", s.initial.z0},
                   {"v0_m_s", s.initial.v0},
                   {"v_res_m_s", s.initial.v_R}};
    doc["lasers"] = {{"mechanism", std::string(to_string(s.mechanism.kind))},
                     {"K_rad_m", s.mechanism.K},
                     {"delta_k_rad_m", s.mechanism.delta_k},
                     {"sigma_m_s2", s.sigma},
                     {"L_m", s.L},
                     {"phi_off_rad", s.phi_off}};
    const Geometry& g = s.geometry;
    if (g.time_unit() > 0.0 && (g.label() == "mzi" || g.label() == "butterfly") &&
        g == (g.label() == "mzi" ? build_mzi(g.time_unit()) : build_butterfly(g.time_unit()))) {
        doc["geometry"] = {{"builtin", g.label()}, {"T_s", g.time_unit()}};
    } else {
        json pulses = json::array();
        for (const auto& p : g.pulses()) pulses.push_back({{"time_s", p.time}, {"w1", p.weight_arm1}, {"w2", p.weight_arm2}});
        doc["geometry"] = {{"pulses", pulses}};
    }
    doc["gravity"] = {{"g_m_s2", s.g}};
    if (file.compensation.enabled || file.compensation.Gamma != 0.0) {
        doc["compensation"] = {{"enabled", file.compensation.enabled}, {"Gamma_m_s2", file.compensation.Gamma}};
    }
    return doc;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("<document>", std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) { return from_json(parse_document(text)); }

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path.string(), "cannot open scenario file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ScenarioFile load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

std::string dump_scenario(const ScenarioFile& file) { return to_json(file).dump(2) + "\n"; }

void save_scenario(const ScenarioFile& file, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << dump_scenario(file);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::optional<SweepScale> parse_sweep_scale(const std::string& name) {
    if (name == "linear") return SweepScale::linear;
    if (name == "log") return SweepScale::log;
    return std::nullopt;
}

void SweepSpec::validate() const {
    if (parameter.empty()) throw SchemaError("--param", "parameter path must not be empty");
    if (count < 2) throw SchemaError("--count", "must be at least 2");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw SchemaError("--start/--stop", "must be finite");
    if (start == stop) throw SchemaError("--start/--stop", "start and stop must differ");
    if (scale == SweepScale::log && !(start > 0.0 && stop > 0.0))
        throw SchemaError("--scale", "log sweeps need positive start and stop");
}

std::vector<double> SweepSpec::values() const {
    validate();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        if (i == count - 1) {
            out.push_back(stop);
        } else if (scale == SweepScale::linear) {
            out.push_back(start + (stop - start) * f);
        } else {
            out.push_back(start * std::pow(stop / start, f));
        }
    }
    return out;
}

std::vector<SweepRow> run_sweep(const std::string& scenario_text, const SweepSpec& spec) {
    const std::vector<double> grid = spec.values();
    const json base = parse_document(scenario_text);
    // Locate the parameter once so that a bad path fails before any work.
    json::json_pointer pointer;
    {
        std::string segment;
        std::istringstream ss(spec.parameter);
        while (std::getline(ss, segment, '.')) pointer /= segment;
    }
    if (!base.contains(pointer) || !base.at(pointer).is_number())
        throw SchemaError(spec.parameter, "no numeric scenario parameter at this path");
    from_json(base);

    std::vector<std::future<PhaseBreakdown>> jobs;
    jobs.reserve(grid.size());
    for (double value : grid) {
        jobs.push_back(std::async(std::launch::async, [&base, pointer, value] {
            json doc = base;
            doc[pointer] = value;
            return total_phase(from_json(doc).scenario);
        }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], jobs[i].get()});
    return rows;
}

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    std::string out = "param_value,unperturbed,fsl_clock,fsl_doppler,chirp,time_dilation,ts_clock,ts_doppler,ts_chirp,total\n";
    for (const auto& r : rows) {
        const auto& b = r.breakdown;
        for (double v : {r.param_value, b.unperturbed, b.fsl_clock, b.fsl_doppler, b.chirp, b.time_dilation, b.ts_clock,
                         b.ts_doppler, b.ts_chirp}) {
            out += format_number(v);
            out += ',';
        }
        out += format_number(b.total);
        out += '\n';
    }
    os << out;
}

}  // namespace fslphase
