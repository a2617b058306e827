#include "quanton/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "quanton/confined_states.hpp"
#include "quanton/interferometer.hpp"
#include "quanton/parallel_transport.hpp"
#include "quanton/phase_laws.hpp"
#include "quanton/propagator.hpp"
#include "quanton/quantum_potential.hpp"

namespace quanton::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Parameter tables
// ---------------------------------------------------------------------------

enum class Kind { real, integer, boolean, text };
enum class Need { required, optional, defaulted };

struct ParamSpec {
    std::string name;
    Kind kind;
    Need need;
    json fallback = nullptr;
    std::vector<std::string> choices = {};
};

using ParamTable = std::vector<ParamSpec>;

ParamSpec req(std::string name, Kind kind = Kind::real) { return {std::move(name), kind, Need::required}; }
ParamSpec opt(std::string name, Kind kind = Kind::real) { return {std::move(name), kind, Need::optional}; }
ParamSpec def(std::string name, json fallback, Kind kind = Kind::real) {
    return {std::move(name), kind, Need::defaulted, std::move(fallback)};
}
ParamSpec choice(std::string name, std::vector<std::string> choices, Need need = Need::defaulted) {
    json fallback = need == Need::defaulted ? json(choices.front()) : json(nullptr);
    return {std::move(name), Kind::text, need, std::move(fallback), std::move(choices)};
}

const double kHalfSqrt2 = 1.0 / std::numbers::sqrt2;

const std::map<std::string, ParamTable>& command_table() {
    static const std::map<std::string, ParamTable> table = [] {
        const ParamTable geometry = {
            choice("geometry", {"tube", "circle"}),
            def("a", 1.0),
            def("nx", 1, Kind::integer),
            def("ny", 1, Kind::integer),
            def("rho0", 1.0),
            def("n", 0.5),
            def("node-epsilon", kDefaultNodeEpsilon),
        };
        const ParamTable two_path = {
            def("n", 0.5),
            def("a-straight", kHalfSqrt2),
            def("a-circle", kHalfSqrt2),
            def("include-dynamical", true, Kind::boolean),
            def("include-quantum-potential", true, Kind::boolean),
        };
        std::map<std::string, ParamTable> t;
        t["tube-phase"] = {req("p"), req("a"), def("L", 1.0), def("nx", 1, Kind::integer),
                           def("ny", 1, Kind::integer)};
        t["circle-phase"] = {req("rho0"), req("p"), def("n", 0.5)};
        t["qfield"] = geometry;
        t["qfield"].push_back(def("points", 401, Kind::integer));
        t["qfield"].push_back(def("tol", 1e-2));
        t["transport-check"] = geometry;
        for (auto p : {def("points", 101, Kind::integer), def("dt", 1e-4), def("frames", 64, Kind::integer),
                       opt("q"), opt("evolve-q"), choice("stencil", {"central3", "central5"})}) {
            t["transport-check"].push_back(std::move(p));
        }
        t["propagate"] = {choice("scenario", {"potential", "tube"}),
                          def("points", 32768, Kind::integer),
                          def("length", 163.84),
                          def("center-x", 0.0),
                          def("center-p", 100.0),
                          def("sigma-p", 0.05),
                          def("dt", 1e-3),
                          def("steps", 1000, Kind::integer),
                          def("v", 0.0),
                          def("a", 1.0),
                          def("L", 100.0),
                          def("nx", 1, Kind::integer),
                          def("ny", 1, Kind::integer),
                          choice("model", {"exact", "first-order"})};
        t["interfere"] = {req("rho0"), req("p")};
        t["interfere"].insert(t["interfere"].end(), two_path.begin(), two_path.end());
        t["sweep"] = {choice("parameter", {"p", "rho0"}, Need::required),
                      req("lo"),
                      req("hi"),
                      req("count", Kind::integer),
                      opt("rho0"),
                      opt("p")};
        t["sweep"].insert(t["sweep"].end(), two_path.begin(), two_path.end());
        return t;
    }();
    return table;
}

const ParamTable& params_for(const std::string& command) {
    const auto& table = command_table();
    const auto it = table.find(command);
    if (it == table.end()) throw ValidationError("unknown command '" + command + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Value conversion
// ---------------------------------------------------------------------------

json convert_text(const ParamSpec& spec, const std::string& text) {
    const std::string where = "key '" + spec.name + "'";
    switch (spec.kind) {
        case Kind::real: {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != text.size() || text.empty() || !std::isfinite(v)) {
                throw ValidationError(where + ": expected a finite number, got '" + text + "'");
            }
            return v;
        }
        case Kind::integer: {
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != text.size() || text.empty()) {
                throw ValidationError(where + ": expected an integer, got '" + text + "'");
            }
            return v;
        }
        case Kind::boolean:
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw ValidationError(where + ": expected true or false, got '" + text + "'");
        case Kind::text:
            if (std::find(spec.choices.begin(), spec.choices.end(), text) == spec.choices.end()) {
                throw ValidationError(where + ": unsupported value '" + text + "'");
            }
            return text;
    }
    return nullptr;
}

json convert_json(const ParamSpec& spec, const json& value) {
    const std::string where = "key '" + spec.name + "'";
    switch (spec.kind) {
        case Kind::real:
            if (!value.is_number()) throw ValidationError(where + ": expected a number");
            return value.get<double>();
        case Kind::integer:
            if (!value.is_number_integer()) throw ValidationError(where + ": expected an integer");
            return value.get<long long>();
        case Kind::boolean:
            if (!value.is_boolean()) throw ValidationError(where + ": expected true or false");
            return value;
        case Kind::text:
            if (!value.is_string()) throw ValidationError(where + ": expected a string");
            return convert_text(spec, value.get<std::string>());
    }
    return nullptr;
}

double unit_value(const json& value, const std::string& key) {
    if (!value.is_number()) throw ValidationError("key '" + key + "': expected a number");
    return value.get<double>();
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

struct FileConfig {
    std::optional<std::string> command;
    json parameters = json::object();
    std::optional<double> hbar;
    std::optional<double> mass;
    std::optional<std::string> output_path;
    std::optional<std::string> format;
};

FileConfig read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");

    FileConfig fc;
    for (const auto& [key, value] : doc.items()) {
        if (key == "command") {
            if (!value.is_string()) throw ValidationError("key 'command': expected a string");
            fc.command = value.get<std::string>();
        } else if (key == "parameters") {
            if (!value.is_object()) throw ValidationError("key 'parameters': expected an object");
            fc.parameters = value;
        } else if (key == "units") {
            if (!value.is_object()) throw ValidationError("key 'units': expected an object");
            for (const auto& [ukey, uvalue] : value.items()) {
                if (ukey == "hbar") {
                    fc.hbar = unit_value(uvalue, "units.hbar");
                } else if (ukey == "mass") {
                    fc.mass = unit_value(uvalue, "units.mass");
                } else {
                    throw ValidationError("unknown key 'units." + ukey + "'");
                }
            }
        } else if (key == "output") {
            if (!value.is_object()) throw ValidationError("key 'output': expected an object");
            for (const auto& [okey, ovalue] : value.items()) {
                if (!ovalue.is_string()) throw ValidationError("key 'output." + okey + "': expected a string");
                if (okey == "path") {
                    fc.output_path = ovalue.get<std::string>();
                } else if (okey == "format") {
                    fc.format = ovalue.get<std::string>();
                } else {
                    throw ValidationError("unknown key 'output." + okey + "'");
                }
            }
        } else {
            throw ValidationError("unknown key '" + key + "'");
        }
    }
    return fc;
}

OutputFormat parse_format(const std::string& text) {
    if (text == "json") return OutputFormat::json;
    if (text == "csv") return OutputFormat::csv;
    throw ValidationError("key 'format': expected json or csv, got '" + text + "'");
}

// ---------------------------------------------------------------------------
// Parameter access during execution
// ---------------------------------------------------------------------------

double real(const json& params, const std::string& key) {
    if (!params.contains(key)) throw ValidationError("missing required key '" + key + "'");
    return params.at(key).get<double>();
}

int integer(const json& params, const std::string& key) {
    const auto v = params.at(key).get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ValidationError("key '" + key + "': integer out of range");
    }
    return static_cast<int>(v);
}

std::size_t count(const json& params, const std::string& key) {
    const auto v = params.at(key).get<long long>();
    if (v < 0) throw ValidationError("key '" + key + "': must be nonnegative");
    return static_cast<std::size_t>(v);
}

std::string text(const json& params, const std::string& key) { return params.at(key).get<std::string>(); }

bool boolean(const json& params, const std::string& key) { return params.at(key).get<bool>(); }

TubeConfig tube_from(const json& params, double p) {
    return {real(params, "a"), params.contains("L") ? real(params, "L") : 1.0, integer(params, "nx"),
            integer(params, "ny"), p};
}

CircleConfig circle_from(const json& params) {
    return {real(params, "rho0"), HalfInteger::from_value(real(params, "n")), real(params, "p")};
}

TwoPathConfig two_path_from(const json& params) {
    TwoPathConfig cfg{circle_from(params)};
    cfg.a_straight = real(params, "a-straight");
    cfg.a_circle = real(params, "a-circle");
    cfg.include_dynamical = boolean(params, "include-dynamical");
    cfg.include_quantum_potential = boolean(params, "include-quantum-potential");
    return cfg;
}

/// Amplitude field of the configured geometry and its closed-form Q.
std::pair<RealField, double> geometry_amplitude(const json& params, const UnitSystem& units) {
    const std::size_t points = count(params, "points");
    if (text(params, "geometry") == "tube") {
        const TubeConfig tube = tube_from(params, 1.0);
        const Grid1D axis = Grid1D::spanning(0.0, tube.a, points);
        return {tube_mode_field(tube, {axis, axis}), q_tube_analytic(tube.a, tube.nx, tube.ny, units)};
    }
    CircleConfig circle{real(params, "rho0"), HalfInteger::from_value(real(params, "n")), 1.0};
    const Grid1D axis = Grid1D::spanning(0.0, 2.0 * std::numbers::pi * circle.rho0, points);
    return {circle_mode_field(circle, axis), q_circle_analytic(circle.rho0, circle.n, units)};
}

// ---------------------------------------------------------------------------
// Commands. Each returns the "result" object, or a CSV table for sweep.
// ---------------------------------------------------------------------------

json run_tube_phase(const json& params, const UnitSystem& units) {
    const TubeConfig cfg = tube_from(params, real(params, "p"));
    const Kinematics kin = kinematics(cfg, units);
    const PhaseResult first = levy_leblond_action(cfg, units);
    const PhaseResult exact = exact_tube_action(cfg, units);
    return {
        {"transverse_energy", kin.transverse_energy},
        {"q", q_tube_analytic(cfg.a, cfg.nx, cfg.ny, units)},
        {"traversal_time", traversal_time(cfg.L, cfg.p, units)},
        {"p_prime", *kin.p_prime},
        {"first_order_action", first.action},
        {"first_order_phase_rad", first.phase_rad},
        {"exact_action", exact.action},
        {"exact_phase_rad", exact.phase_rad},
        {"relative_gap", first.action > 0.0 ? (exact.action - first.action) / first.action : 0.0},
        {"convention", exact.convention_note},
    };
}

json run_circle_phase(const json& params, const UnitSystem& units) {
    const CircleConfig cfg = circle_from(params);
    const PhaseResult action = circle_action(cfg, units);
    const HeisenbergReport bound = heisenberg_bound(cfg, units);
    return {
        {"action", action.action},
        {"phase_rad", action.phase_rad},
        {"q", q_circle_analytic(cfg.rho0, cfg.n, units)},
        {"traversal_time", traversal_time(2.0 * std::numbers::pi * cfg.rho0, cfg.p, units)},
        {"heisenberg_action_bound", bound.action_bound},
        {"rho0_p_over_hbar", bound.saturating_product},
        {"within_validity", bound.within_validity},
        {"convention", action.convention_note},
    };
}

json run_qfield(const json& params, const UnitSystem& units) {
    const auto [amplitude, analytic] = geometry_amplitude(params, units);
    const QField qf = q_field_numeric(amplitude, units, real(params, "node-epsilon"));
    const UniformityReport u = q_uniformity_check(qf, real(params, "tol"));
    return {
        {"analytic_q", analytic},
        {"mean", u.mean},
        {"max_deviation", u.max_deviation},
        {"uniform", u.uniform},
        {"relative_error", std::abs(u.mean - analytic) / analytic},
        {"valid_points", static_cast<long long>(qf.valid_count())},
    };
}

json run_transport_check(const json& params, const UnitSystem& units) {
    const auto [amplitude, analytic] = geometry_amplitude(params, units);
    const double q_law = params.contains("q") ? real(params, "q") : analytic;
    const double q_evolve = params.contains("evolve-q") ? real(params, "evolve-q") : analytic;
    const double dt = real(params, "dt");
    const std::size_t frames = count(params, "frames");
    if (!(dt > 0.0)) throw ValidationError("key 'dt': must be positive");

    std::vector<double> times;
    std::vector<ComplexField> series_frames;
    for (std::size_t k = 0; k < frames; ++k) {
        const double t = static_cast<double>(k) * dt;
        const cplx phase = std::polar(1.0, -q_evolve * t / units.hbar);
        std::vector<cplx> values(amplitude.size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = amplitude[i] * phase;
        times.push_back(t);
        series_frames.emplace_back(amplitude.grid(), std::move(values));
    }
    const WaveSeries series(std::move(times), std::move(series_frames));
    const TimeStencil stencil = text(params, "stencil") == "central5" ? TimeStencil::central5 : TimeStencil::central3;
    const TransportReport simon = simon_residual(series, stencil);
    const TransportReport qp = qp_transport_residual(series, q_law, units, stencil);
    double max_density = 0.0;
    for (double r : amplitude.samples()) max_density = std::max(max_density, r * r);
    return {
        {"q_law", q_law},
        {"q_evolve", q_evolve},
        {"max_density", max_density},
        {"simon_max_residual", simon.max_residual},
        {"simon_l2_residual", simon.l2_residual},
        {"qp_max_residual", qp.max_residual},
        {"qp_l2_residual", qp.l2_residual},
        {"qp_integrated_residual", qp.integrated_residual},
        {"action_rate_max_deviation", action_rate_check(series, q_law, units, real(params, "node-epsilon"))},
    };
}

json run_propagate(const json& params, const UnitSystem& units) {
    const double length = real(params, "length");
    const Grid1D grid = Grid1D::periodic(-0.5 * length, length, count(params, "points"));
    const Wavepacket packet{real(params, "center-x"), real(params, "center-p"), real(params, "sigma-p"), grid};

    if (text(params, "scenario") == "tube") {
        const TubeConfig cfg = tube_from(params, packet.center_p);
        const TransmissionModel model =
            text(params, "model") == "exact" ? TransmissionModel::exact : TransmissionModel::first_order;
        const ComplexField reference = packet.sample(units);
        const ComplexField transmitted = tube_transmit_packet(packet, cfg, units, model);
        const PhaseResult expected =
            model == TransmissionModel::exact ? exact_tube_action(cfg, units) : levy_leblond_action(cfg, units);
        return {
            {"phase_shift_rad", extract_phase_shift(reference, transmitted)},
            {"expected_action", expected.action},
            {"expected_phase_rad", wrap_phase(-expected.phase_rad)},
            {"norm_ratio", field_norm(transmitted) / field_norm(reference)},
        };
    }

    const ComplexField psi0 = packet.sample(units);
    const double dt = real(params, "dt");
    const int steps = integer(params, "steps");
    const double v = real(params, "v");
    const PropagationRun with_v = split_step_evolve(psi0, Potential(v), dt, steps, units);
    const PropagationRun free = split_step_evolve(psi0, Potential(0.0), dt, steps, units);
    const double total = dt * steps;
    const cplx factor = std::polar(1.0, -v * total / units.hbar);
    double factorization_error = 0.0;
    for (std::size_t i = 0; i < psi0.size(); ++i) {
        factorization_error =
            std::max(factorization_error, std::abs(with_v.final_frame()[i] - factor * free.final_frame()[i]));
    }
    return {
        {"total_time", total},
        {"norm_drift", with_v.max_norm_drift},
        {"phase_shift_rad", extract_phase_shift(free.final_frame(), with_v.final_frame())},
        {"expected_phase_rad", wrap_phase(-v * total / units.hbar)},
        {"factorization_error", factorization_error},
    };
}

json run_interfere(const json& params, const UnitSystem& units) {
    const TwoPathConfig cfg = two_path_from(params);
    return {
        {"phase_difference_rad", path_phase_difference(cfg, units)},
        {"intensity", intensity(cfg, units)},
        {"circle_action", circle_action(cfg.circle, units).action},
    };
}

FringeScan run_sweep(const json& params, const UnitSystem& units) {
    const bool over_p = text(params, "parameter") == "p";
    json filled = params;
    // The swept key only seeds the config; its value is replaced point by point.
    const std::string fixed = over_p ? "rho0" : "p";
    if (!params.contains(fixed)) throw ValidationError("missing required key '" + fixed + "'");
    filled[over_p ? "p" : "rho0"] = real(params, "lo");
    const TwoPathConfig cfg = two_path_from(filled);
    return fringe_scan(cfg, over_p ? SweepParameter::p : SweepParameter::rho0,
                       {real(params, "lo"), real(params, "hi"), integer(params, "count")}, units);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

void dump_into(const json& value, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (value.type()) {
        case json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, v] : value.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + json(key).dump() + ": ";
                dump_into(v, indent + 1, out);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (i > 0) out += ",\n";
                out += inner;
                dump_into(value[i], indent + 1, out);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = value.get<double>();
            out += std::isfinite(v) ? format_number(v) : "null";
            return;
        }
        default:
            out += value.dump();
    }
}

json flatten(const json& value, const std::string& prefix = "") {
    json flat = json::object();
    for (const auto& [key, v] : value.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (v.is_object()) {
            flat.update(flatten(v, name));
        } else {
            flat[name] = v;
        }
    }
    return flat;
}

std::string csv_cell(const json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string render_scan_csv(const FringeScan& scan) {
    std::string out = "parameter,value,phase_rad,intensity\n";
    for (std::size_t i = 0; i < scan.values.size(); ++i) {
        out += std::string(to_string(scan.parameter)) + "," + format_number(scan.values[i]) + "," +
               format_number(scan.phase_differences[i]) + "," + format_number(scan.intensities[i]) + "\n";
    }
    return out;
}

json scan_to_json(const FringeScan& scan) {
    json maxima = json::array();
    for (const auto& m : scan.maxima) maxima.push_back({{"order", m.order}, {"value", m.value}});
    return {
        {"parameter", to_string(scan.parameter)},
        {"values", scan.values},
        {"phase_rad", scan.phase_differences},
        {"intensity", scan.intensities},
        {"maxima", maxima},
    };
}

std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("QUANTON_OUT"); dir != nullptr && *dir != '\0') {
            p = std::filesystem::path(dir) / p;
        }
    }
    return p;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write output file '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw std::runtime_error("failed writing output file '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

std::string dump_json(const json& value) {
    std::string out;
    dump_into(value, 0, out);
    out += "\n";
    return out;
}

std::vector<std::string> command_names() {
    std::vector<std::string> names;
    for (const auto& [name, params] : command_table()) names.push_back(name);
    return names;
}

RunConfig parse_arguments(const std::vector<std::string>& args) {
    CLI::App app{"Geometric phase from the quantum potential: tube and circle phases, Q fields, "
                 "transport residuals, split-step checks and two-path fringes."};
    app.name("quanton");
    std::string config_path, output_path, format_text, hbar_text, mass_text;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--output", output_path, "output file (relative paths resolve under $QUANTON_OUT)");
    app.add_option("--format", format_text, "json or csv");
    app.add_option("--hbar", hbar_text, "reduced Planck constant (default 1)");
    app.add_option("--mass", mass_text, "particle mass (default 1)");
    app.require_subcommand(0, 1);

    std::map<std::string, std::map<std::string, std::string>> flag_storage;
    std::map<std::string, CLI::App*> subcommands;
    for (const auto& [name, params] : command_table()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();
        auto& storage = flag_storage[name];
        for (const auto& spec : params) sub->add_option("--" + spec.name, storage[spec.name]);
        subcommands[name] = sub;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw ValidationError(e.what());
    }

    FileConfig file;
    if (!config_path.empty()) file = read_config_file(config_path);

    RunConfig config;
    std::string selected;
    for (const auto& [name, sub] : subcommands) {
        if (sub->parsed()) selected = name;
    }
    if (!selected.empty()) {
        config.command = selected;
    } else if (file.command) {
        config.command = *file.command;
    } else {
        throw ValidationError("missing required key 'command': give a subcommand or a config file");
    }

    const ParamTable& table = params_for(config.command);
    for (const auto& [key, value] : file.parameters.items()) {
        const bool known = std::any_of(table.begin(), table.end(), [&](const ParamSpec& s) { return s.name == key; });
        if (!known) throw ValidationError("unknown key '" + key + "' for command " + config.command);
    }
    const CLI::App* sub = subcommands.at(config.command);
    for (const auto& spec : table) {
        json value = nullptr;
        if (!selected.empty() && sub->count("--" + spec.name) > 0) {
            value = convert_text(spec, flag_storage[config.command][spec.name]);
        } else if (file.parameters.contains(spec.name)) {
            value = convert_json(spec, file.parameters.at(spec.name));
        } else if (spec.need == Need::defaulted) {
            value = spec.fallback;
        } else if (spec.need == Need::required) {
            throw ValidationError("missing required key '" + spec.name + "' for command " + config.command);
        }
        if (!value.is_null()) config.parameters[spec.name] = value;
    }

    if (file.hbar) config.units.hbar = *file.hbar;
    if (file.mass) config.units.mass = *file.mass;
    if (!hbar_text.empty()) config.units.hbar = convert_text({"hbar", Kind::real, Need::defaulted}, hbar_text).get<double>();
    if (!mass_text.empty()) config.units.mass = convert_text({"mass", Kind::real, Need::defaulted}, mass_text).get<double>();
    if (!(config.units.hbar > 0.0)) throw ValidationError("key 'hbar': must be positive");
    if (!(config.units.mass > 0.0)) throw ValidationError("key 'mass': must be positive");

    if (!output_path.empty()) {
        config.output_path = output_path;
    } else {
        config.output_path = file.output_path;
    }
    if (!format_text.empty()) {
        config.format = parse_format(format_text);
    } else if (file.format) {
        config.format = parse_format(*file.format);
    } else {
        config.format = config.command == "sweep" ? OutputFormat::csv : OutputFormat::json;
    }
    return config;
}

std::string execute(const RunConfig& config) {
    const json& params = config.parameters;
    const UnitSystem& units = config.units;

    const json embedded = {
        {"command", config.command},
        {"parameters", params},
        {"units", {{"hbar", units.hbar}, {"mass", units.mass}}},
    };

    json result;
    if (config.command == "sweep") {
        const FringeScan scan = run_sweep(params, units);
        if (config.format == OutputFormat::csv) return render_scan_csv(scan);
        result = scan_to_json(scan);
    } else if (config.command == "tube-phase") {
        result = run_tube_phase(params, units);
    } else if (config.command == "circle-phase") {
        result = run_circle_phase(params, units);
    } else if (config.command == "qfield") {
        result = run_qfield(params, units);
    } else if (config.command == "transport-check") {
        result = run_transport_check(params, units);
    } else if (config.command == "propagate") {
        result = run_propagate(params, units);
    } else if (config.command == "interfere") {
        result = run_interfere(params, units);
    } else {
        throw ValidationError("unknown command '" + config.command + "'");
    }

    if (config.format == OutputFormat::csv) {
        std::string out = "quantity,value\n";
        const json flat = flatten(result);
        for (const auto& [key, value] : flat.items()) out += key + "," + csv_cell(value) + "\n";
        return out;
    }
    return dump_json({{"config", embedded}, {"result", result}});
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig config = parse_arguments(args);
        const std::string document = execute(config);
        if (config.output_path) {
            write_atomically(resolve_output(*config.output_path), document);
        } else {
            out << document;
        }
        return kExitOk;
    } catch (const CLI::CallForHelp&) {
        out << "usage: quanton [--config FILE] [--output PATH] [--format json|csv] [--hbar X] [--mass X] "
               "<command> [--key value ...]\ncommands:";
        for (const auto& name : command_names()) out << ' ' << name;
        out << '\n';
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const PhysicsError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace quanton::cli
