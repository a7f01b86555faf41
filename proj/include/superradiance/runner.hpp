// runner.hpp - run configuration, figure presets, execution and serialization.
//
// Trajectory CSV: gamma_t,theta,phi,energy_over_omega0,intensity_over_gamma_omega0
// with 17 significant digits so that re-reading reproduces every double exactly.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core_model.hpp"
#include "errors.hpp"
#include "exact_oracle.hpp"
#include "observables.hpp"
#include "pulse_analysis.hpp"
#include "strong_dynamics.hpp"
#include "trajectory.hpp"
#include "weak_dynamics.hpp"

namespace superradiance {

using json = nlohmann::json;

enum class StrongRoute { Angles, Cartesian };
enum class WeakRoute { ClosedForm, Ode };

struct OutputSpec {
    std::string directory;
    bool csv = true;
    bool json = true;
};

struct SweepSpec {
    std::string field;  // n_atoms | omega0 | g
    std::vector<double> values;
};

struct RunConfig {
    std::string name = "run";
    SampleParams params;
    std::optional<Regime> regime_override;
    std::optional<double> theta0;
    std::optional<double> phi0;
    std::optional<double> t_end;
    IntegrationControl integration;
    double weak_phase_rate = 1.0;
    StrongRoute strong_route = StrongRoute::Angles;
    WeakRoute weak_route = WeakRoute::ClosedForm;
    OutputSpec outputs;
    std::optional<SweepSpec> sweep;
};

/// Command-line overrides applied on top of a preset or config file.
struct RunOverrides {
    std::optional<double> rtol;
    std::optional<double> t_end;
    std::optional<double> theta0;
    std::optional<double> phi0;
};

struct RunResult {
    RunConfig config;  // fully resolved: regime, init and t_end filled in
    DerivedParams derived;
    BlochTrajectory trajectory;
    std::vector<EmissionRecord> records;
    PulseMetrics metrics;
};

struct RunOutputs {
    std::string name;
    std::filesystem::path trajectory_file;
    std::filesystem::path metrics_file;
};

inline constexpr std::string_view trajectory_header =
    "gamma_t,theta,phi,energy_over_omega0,intensity_over_gamma_omega0";

// ---------------------------------------------------------------------------
// Presets

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
    return names;
}

inline RunConfig preset_config(const std::string& name) {
    struct Entry {
        std::int64_t n;
        double omega0;
        double g;
        Regime regime;
    };
    static const std::map<std::string, Entry> table{
        {"fig1", {10'000, 1e6, 1e2, Regime::Strong}},      {"fig2", {10'000, 1e5, 1e2, Regime::Strong}},
        {"fig3", {10'000, 1e6, 1e3, Regime::Strong}},      {"fig4", {1'000'000, 1e6, 1e2, Regime::Strong}},
        {"fig5", {10'000'000, 1e6, 1e2, Regime::Strong}},  {"fig6", {10'000, 1e6, 0.0, Regime::Strong}},
        {"fig7", {10'000, 1e6, 0.0, Regime::DickeLimit}},  {"fig8", {10'000, 1e3, 0.0, Regime::Strong}},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw config_error("preset", "unknown preset '" + name + "' (expected fig1..fig8)");
    RunConfig cfg;
    cfg.name = name;
    cfg.params.n_atoms = it->second.n;
    cfg.params.omega0 = it->second.omega0;
    cfg.params.g = it->second.g;
    cfg.regime_override = it->second.regime;
    return cfg;
}

inline void apply_overrides(RunConfig& cfg, const RunOverrides& o) {
    if (o.rtol) cfg.integration.rtol = *o.rtol;
    if (o.t_end) cfg.t_end = *o.t_end;
    if (o.theta0) cfg.theta0 = *o.theta0;
    if (o.phi0) cfg.phi0 = *o.phi0;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw config_error(path.empty() ? key : path + "." + key, "unknown key");
    }
}

inline double get_number(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw config_error(path, "must be a number");
    return v.get<double>();
}

inline std::int64_t get_count(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    throw config_error(path, "must be an integer");
}

inline Regime parse_regime(const std::string& s, const std::string& path) {
    if (s == "strong") return Regime::Strong;
    if (s == "weak") return Regime::Weak;
    if (s == "dicke") return Regime::DickeLimit;
    throw config_error(path, "must be one of strong, weak, dicke");
}

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline RunConfig config_from_json(const json& j) {
    using detail::get_number;
    if (!j.is_object()) throw config_error("<root>", "config must be a JSON object");
    detail::reject_unknown_keys(j,
                                {"name", "params", "regime", "init", "t_end", "integration", "weak_phase_rate",
                                 "strong_route", "weak_route", "outputs", "sweep"},
                                "");
    RunConfig cfg;
    if (j.contains("name")) {
        if (!j["name"].is_string() || j["name"].get<std::string>().empty())
            throw config_error("name", "must be a non-empty string");
        cfg.name = j["name"].get<std::string>();
        if (cfg.name.find_first_of("/\\") != std::string::npos) throw config_error("name", "must not contain path separators");
    }
    if (!j.contains("params") || !j["params"].is_object()) throw config_error("params", "required object");
    const json& p = j["params"];
    detail::reject_unknown_keys(p, {"n_atoms", "omega0", "g", "gamma"}, "params");
    for (const char* key : {"n_atoms", "omega0", "g"})
        if (!p.contains(key)) throw config_error(std::string("params.") + key, "required");
    cfg.params.n_atoms = detail::get_count(p["n_atoms"], "params.n_atoms");
    cfg.params.omega0 = get_number(p, "omega0", "params.omega0");
    cfg.params.g = get_number(p, "g", "params.g");
    if (p.contains("gamma")) cfg.params.gamma = get_number(p, "gamma", "params.gamma");

    if (j.contains("regime")) {
        if (!j["regime"].is_string()) throw config_error("regime", "must be a string");
        cfg.regime_override = detail::parse_regime(j["regime"].get<std::string>(), "regime");
    }
    if (j.contains("init")) {
        const json& init = j["init"];
        if (!init.is_object()) throw config_error("init", "must be an object");
        detail::reject_unknown_keys(init, {"theta0", "phi0"}, "init");
        if (init.contains("theta0")) cfg.theta0 = get_number(init, "theta0", "init.theta0");
        if (init.contains("phi0")) cfg.phi0 = get_number(init, "phi0", "init.phi0");
    }
    if (j.contains("t_end")) cfg.t_end = get_number(j, "t_end", "t_end");
    if (j.contains("integration")) {
        const json& in = j["integration"];
        if (!in.is_object()) throw config_error("integration", "must be an object");
        detail::reject_unknown_keys(in, {"rtol", "atol", "max_samples", "dense"}, "integration");
        if (in.contains("rtol")) cfg.integration.rtol = get_number(in, "rtol", "integration.rtol");
        if (in.contains("atol")) cfg.integration.atol = get_number(in, "atol", "integration.atol");
        if (in.contains("max_samples")) {
            const std::int64_t m = detail::get_count(in["max_samples"], "integration.max_samples");
            if (m < 2) throw config_error("integration.max_samples", "must be >= 2");
            cfg.integration.max_samples = static_cast<std::size_t>(m);
        }
        if (in.contains("dense")) {
            if (!in["dense"].is_boolean()) throw config_error("integration.dense", "must be a boolean");
            cfg.integration.dense = in["dense"].get<bool>();
        }
    }
    if (j.contains("weak_phase_rate")) {
        cfg.weak_phase_rate = get_number(j, "weak_phase_rate", "weak_phase_rate");
        if (cfg.weak_phase_rate != 1.0 && cfg.weak_phase_rate != 2.0)
            throw config_error("weak_phase_rate", "must be 1 or 2");
    }
    if (j.contains("strong_route")) {
        const json& v = j["strong_route"];
        if (v == "angles") cfg.strong_route = StrongRoute::Angles;
        else if (v == "cartesian") cfg.strong_route = StrongRoute::Cartesian;
        else throw config_error("strong_route", "must be angles or cartesian");
    }
    if (j.contains("weak_route")) {
        const json& v = j["weak_route"];
        if (v == "closed_form") cfg.weak_route = WeakRoute::ClosedForm;
        else if (v == "ode") cfg.weak_route = WeakRoute::Ode;
        else throw config_error("weak_route", "must be closed_form or ode");
    }
    if (j.contains("outputs")) {
        const json& o = j["outputs"];
        if (!o.is_object()) throw config_error("outputs", "must be an object");
        detail::reject_unknown_keys(o, {"directory", "formats"}, "outputs");
        if (o.contains("directory")) {
            if (!o["directory"].is_string()) throw config_error("outputs.directory", "must be a string");
            cfg.outputs.directory = o["directory"].get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw config_error("outputs.formats", "must be an array");
            cfg.outputs.csv = cfg.outputs.json = false;
            for (const auto& f : o["formats"]) {
                if (f == "csv") cfg.outputs.csv = true;
                else if (f == "json") cfg.outputs.json = true;
                else throw config_error("outputs.formats", "entries must be csv or json");
            }
        }
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) throw config_error("sweep", "must be an object");
        detail::reject_unknown_keys(s, {"field", "values"}, "sweep");
        if (!s.contains("field") || !s["field"].is_string()) throw config_error("sweep.field", "required string");
        SweepSpec sweep;
        sweep.field = s["field"].get<std::string>();
        if (sweep.field != "n_atoms" && sweep.field != "omega0" && sweep.field != "g")
            throw config_error("sweep.field", "must be n_atoms, omega0 or g");
        if (!s.contains("values") || !s["values"].is_array() || s["values"].empty())
            throw config_error("sweep.values", "required non-empty array");
        for (const auto& v : s["values"]) {
            if (!v.is_number()) throw config_error("sweep.values", "entries must be numbers");
            sweep.values.push_back(v.get<double>());
        }
        cfg.sweep = std::move(sweep);
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(path.string() + ": " + detail::line_column(text, e.byte), "JSON parse error");
    }
    return config_from_json(j);
}

namespace detail {

inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

/// One config per sweep point (or the config itself). Names get a `_<field>_<value>` suffix.
inline std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) return {cfg};
    std::vector<RunConfig> out;
    for (double v : cfg.sweep->values) {
        RunConfig c = cfg;
        c.sweep.reset();
        if (cfg.sweep->field == "n_atoms") {
            if (v != std::floor(v)) throw config_error("sweep.values", "n_atoms values must be integers");
            c.params.n_atoms = static_cast<std::int64_t>(v);
        } else if (cfg.sweep->field == "omega0") {
            c.params.omega0 = v;
        } else {
            c.params.g = v;
        }
        c.name = cfg.name + "_" + cfg.sweep->field + "_" + detail::format_value(v);
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON views of the domain types

inline json to_json(const SampleParams& p) {
    return {{"n_atoms", p.n_atoms}, {"omega0", p.omega0}, {"g", p.g}, {"gamma", p.gamma},
            {"regime", std::string(to_string(p.regime))}};
}

inline json to_json(const DerivedParams& d) {
    return {{"alpha", d.alpha},
            {"Omega", d.Omega},
            {"Gamma", d.Gamma},
            {"coupling_strength_ratio", d.coupling_strength_ratio},
            {"tau_c_pred", d.tau_c_pred},
            {"tau_1_pred", d.tau_1_pred},
            {"pulse_count_pred", d.pulse_count_pred},
            {"peak_intensity_pred", d.peak_intensity_pred},
            {"delay_time_pred", d.delay_time_pred}};
}

inline json to_json(const PulseMetrics& m) {
    return {{"peak_intensity_scaled", m.peak_intensity_scaled},
            {"delay_time", m.delay_time},
            {"envelope_fwhm", m.envelope_fwhm},
            {"tau_c_measured", m.tau_c_measured},
            {"tau_1_measured", m.tau_1_measured},
            {"pulse_count_half_height", m.pulse_count_half_height},
            {"pulses_detected", m.pulses_detected},
            {"median_pulse_spacing", m.median_pulse_spacing}};
}

inline json to_json(const MetricRatios& r) {
    return {{"tau_c", r.tau_c},
            {"tau_1", r.tau_1},
            {"pulse_count", r.pulse_count},
            {"peak_intensity", r.peak_intensity},
            {"delay_time", r.delay_time}};
}

inline json to_json(const IntegratorStats& s) {
    return {{"steps", s.steps},
            {"rejected_steps", s.rejected},
            {"max_local_error", s.max_local_error},
            {"accumulated_error", s.accumulated_error},
            {"max_norm_drift", s.max_norm_drift},
            {"norm_drift_warning", s.norm_drift_warning}};
}

/// Resolved config in the same schema `config_from_json` accepts.
inline json to_json(const RunConfig& c) {
    json j{{"name", c.name},
           {"params", {{"n_atoms", c.params.n_atoms}, {"omega0", c.params.omega0}, {"g", c.params.g},
                       {"gamma", c.params.gamma}}},
           {"integration", {{"rtol", c.integration.rtol}, {"atol", c.integration.atol},
                            {"max_samples", c.integration.max_samples}, {"dense", c.integration.dense}}},
           {"weak_phase_rate", c.weak_phase_rate},
           {"strong_route", c.strong_route == StrongRoute::Angles ? "angles" : "cartesian"},
           {"weak_route", c.weak_route == WeakRoute::ClosedForm ? "closed_form" : "ode"}};
    if (c.regime_override) j["regime"] = std::string(to_string(*c.regime_override));
    if (c.theta0 || c.phi0) {
        j["init"] = json::object();
        if (c.theta0) j["init"]["theta0"] = *c.theta0;
        if (c.phi0) j["init"]["phi0"] = *c.phi0;
    }
    if (c.t_end) j["t_end"] = *c.t_end;
    json formats = json::array();
    if (c.outputs.csv) formats.push_back("csv");
    if (c.outputs.json) formats.push_back("json");
    j["outputs"] = {{"formats", formats}};
    if (!c.outputs.directory.empty()) j["outputs"]["directory"] = c.outputs.directory;
    if (c.sweep) j["sweep"] = {{"field", c.sweep->field}, {"values", c.sweep->values}};
    return j;
}

// ---------------------------------------------------------------------------
// Execution

/// Resolves regime, initial state and window, runs the regime's pipeline and analyses it.
inline RunResult execute(const RunConfig& input) {
    if (input.sweep) throw config_error("sweep", "expand sweeps before executing");
    RunConfig cfg = input;
    SampleParams p = cfg.params;
    p.regime = cfg.regime_override.value_or(Regime::Strong);
    if (!cfg.regime_override) p.regime = classify_regime(p);
    const DerivedParams d = derive_params(p);
    cfg.params = p;
    cfg.regime_override = p.regime;

    const BlochState default_init = default_initial_state(d);
    const BlochState init{cfg.theta0.value_or(default_init.theta), cfg.phi0.value_or(default_init.phi), 0.0};
    cfg.theta0 = init.theta;
    cfg.phi0 = init.phi;

    RunResult result;
    if (uses_weak_equations(p.regime)) {
        const double t_end = cfg.t_end.value_or(weak_default_window(d));
        result.trajectory = cfg.weak_route == WeakRoute::ClosedForm
                                ? sample_weak_solution(p, init, t_end, cfg.integration, cfg.weak_phase_rate)
                                : integrate_weak_ode(p, init, t_end, cfg.integration, cfg.weak_phase_rate);
        cfg.t_end = t_end;
    } else {
        const double t_end = cfg.t_end ? *cfg.t_end : strong_emission_window(p, init, cfg.integration);
        result.trajectory = cfg.strong_route == StrongRoute::Angles ? integrate_strong(p, init, t_end, cfg.integration)
                                                                    : integrate_cartesian(p, init, t_end, cfg.integration);
        cfg.t_end = t_end;
    }
    result.derived = d;
    result.records = trajectory_to_emission(result.trajectory);
    result.metrics = compute_metrics(result.records, d);
    result.config = std::move(cfg);
    return result;
}

// ---------------------------------------------------------------------------
// Files

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes via a temporary sibling and renames it into place.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw io_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw io_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string trajectory_csv(const BlochTrajectory& traj, const std::vector<EmissionRecord>& records) {
    std::string out;
    out.reserve(records.size() * 100 + 80);
    out.append(trajectory_header);
    out.push_back('\n');
    char line[200];
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& s = traj.samples[i];
        const auto& r = records[i];
        const int len = std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, s.theta, s.phi,
                                      r.energy_scaled, r.intensity_scaled);
        out.append(line, static_cast<std::size_t>(len));
    }
    return out;
}

/// Emission records back from a trajectory CSV.
inline std::vector<EmissionRecord> read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != trajectory_header)
        throw config_error(path.string() + ": line 1", "unexpected trajectory header");
    std::vector<EmissionRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        double v[5];
        char* cursor = line.data();
        for (int k = 0; k < 5; ++k) {
            char* end = nullptr;
            v[k] = std::strtod(cursor, &end);
            if (end == cursor || (k < 4 && *end != ',') || (k == 4 && *end != '\0'))
                throw config_error(path.string() + ": line " + std::to_string(line_no), "malformed row");
            cursor = end + 1;
        }
        records.push_back({v[0], v[3], v[4]});
    }
    return records;
}

inline json metrics_document(const RunResult& r, const std::string& trajectory_file) {
    return {{"schema", "superradiance-metrics/1"},
            {"name", r.config.name},
            {"config", to_json(r.config)},
            {"sample", to_json(r.config.params)},
            {"derived", to_json(r.derived)},
            {"metrics", to_json(r.metrics)},
            {"ratios", to_json(r.metrics.ratios)},
            {"integrator", to_json(r.trajectory.stats)},
            {"trajectory", {{"file", trajectory_file},
                            {"rows", r.records.size()},
                            {"source", std::string(to_string(r.trajectory.source))},
                            {"t_end", r.trajectory.t_end}}},
            {"definitions",
             {{"envelope", "piecewise-linear interpolation through superpulse peaks (prominence >= 1e-3 of max)"},
              {"tau_c_measured", "envelope FWHM / (2 arccosh sqrt 2)"},
              {"tau_1_measured", "median FWHM of superpulses at or above half the envelope maximum"},
              {"pulse_count_half_height", "superpulses with peak >= half the envelope maximum"},
              {"delay_time", "gamma t of the global intensity maximum"},
              {"default_t_end", "strong: theta past pi/2 with sin(theta) < sech(5); weak: t0 + 5 tau_c"}}}};
}

inline RunOutputs write_outputs(const RunResult& r, const std::filesystem::path& out_dir) {
    RunOutputs o;
    o.name = r.config.name;
    o.trajectory_file = out_dir / (r.config.name + "_trajectory.csv");
    o.metrics_file = out_dir / (r.config.name + "_metrics.json");
    if (r.config.outputs.csv) write_atomically(o.trajectory_file, trajectory_csv(r.trajectory, r.records));
    if (r.config.outputs.json)
        write_atomically(o.metrics_file, metrics_document(r, o.trajectory_file.filename().string()).dump(2) + "\n");
    return o;
}

/// Executes every sweep point (in parallel) and writes each run's outputs.
inline std::vector<RunOutputs> run_and_write(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const std::vector<RunConfig> runs = expand_sweep(cfg);
    std::vector<std::future<RunOutputs>> jobs;
    jobs.reserve(runs.size());
    for (const auto& c : runs)
        jobs.push_back(std::async(std::launch::async, [&c, &out_dir] { return write_outputs(execute(c), out_dir); }));
    std::vector<RunOutputs> outputs;
    std::exception_ptr first_error;
    for (auto& job : jobs) {
        try {
            outputs.push_back(job.get());
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return outputs;
}

inline std::filesystem::path resolve_out_dir(const RunConfig& cfg, const std::optional<std::filesystem::path>& flag) {
    if (flag) return *flag;
    if (!cfg.outputs.directory.empty()) return cfg.outputs.directory;
    return ".";
}

inline std::vector<RunOutputs> run_preset(const std::string& name, const std::filesystem::path& out_dir,
                                          const RunOverrides& overrides = {}) {
    RunConfig cfg = preset_config(name);
    apply_overrides(cfg, overrides);
    return run_and_write(cfg, out_dir);
}

inline std::vector<RunOutputs> run_config(const std::filesystem::path& config_path,
                                          const std::optional<std::filesystem::path>& out_dir,
                                          const RunOverrides& overrides = {}) {
    RunConfig cfg = load_config(config_path);
    apply_overrides(cfg, overrides);
    return run_and_write(cfg, resolve_out_dir(cfg, out_dir));
}

/// Recomputes metrics from a written trajectory + metrics pair; returns the
/// names of metric fields whose values differ (empty when they round-trip exactly).
inline std::vector<std::string> verify_round_trip(const std::filesystem::path& trajectory_file,
                                                  const std::filesystem::path& metrics_file) {
    std::ifstream in(metrics_file);
    if (!in) throw io_error("cannot open " + metrics_file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(metrics_file.string(), e.what());
    }
    RunConfig cfg = config_from_json(doc.at("config"));
    SampleParams p = cfg.params;
    p.regime = cfg.regime_override.value_or(classify_regime(p));
    const DerivedParams d = derive_params(p);
    const std::vector<EmissionRecord> records = read_trajectory_csv(trajectory_file);
    const json recomputed = to_json(compute_metrics(records, d));
    std::vector<std::string> mismatched;
    for (const auto& [key, value] : recomputed.items())
        if (doc.at("metrics").at(key) != value) mismatched.push_back(key);
    return mismatched;
}

// ---------------------------------------------------------------------------
// Oracle output

inline json ladder_summary(std::int64_t n_atoms, double gamma_eff, double omega_ratio, const LadderRun& run) {
    const double n = static_cast<double>(n_atoms);
    const double tau_c = 2.0 / (gamma_eff * n);
    const double mf_peak_time = tau_c * std::log(n);
    const double mf_peak = 0.25 * n * n * omega_ratio * gamma_eff;
    return {{"schema", "superradiance-oracle/1"},
            {"n_atoms", n_atoms},
            {"gamma_eff", gamma_eff},
            {"omega_ratio", omega_ratio},
            {"peak_time", run.peak_time},
            {"peak_intensity_scaled", run.peak_intensity},
            {"emitted_energy", run.emitted_energy},
            {"expected_energy", omega_ratio * n},
            {"final_mean_m", mean_m(run.final_state)},
            {"max_probability_drift", run.max_probability_drift},
            {"mean_field", {{"peak_time", mf_peak_time},
                            {"peak_intensity_scaled", mf_peak},
                            {"peak_time_ratio", run.peak_time / mf_peak_time},
                            {"peak_intensity_ratio", run.peak_intensity / mf_peak}}}};
}

inline std::string ladder_csv(const LadderRun& run) {
    std::string out = "gamma_t,mean_m,intensity_over_gamma_omega0,total_probability\n";
    char line[160];
    for (const auto& s : run.samples) {
        const int len = std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", s.t, s.mean_m,
                                      s.intensity_scaled, s.total_probability);
        out.append(line, static_cast<std::size_t>(len));
    }
    return out;
}

inline std::pair<std::filesystem::path, std::filesystem::path> run_oracle(std::int64_t n_atoms, double gamma_eff,
                                                                          double omega_ratio,
                                                                          const std::filesystem::path& out_dir) {
    const LadderRun run = run_ladder(n_atoms, gamma_eff, omega_ratio);
    const auto csv = out_dir / "oracle_ladder.csv";
    const auto summary = out_dir / "oracle_summary.json";
    write_atomically(csv, ladder_csv(run));
    write_atomically(summary, ladder_summary(n_atoms, gamma_eff, omega_ratio, run).dump(2) + "\n");
    return {csv, summary};
}

}  // namespace superradiance
