#include "rspec/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "linear_fit.hpp"
#include "rspec/analytic.hpp"
#include "rspec/errors.hpp"
#include "rspec/io.hpp"
#include "rspec/pde_solvers.hpp"
#include "rspec/profiles.hpp"
#include "rspec/riemann.hpp"
#include "rspec/spectra.hpp"
#include "rspec/toml_lite.hpp"

namespace rspec {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& what) { throw ConfigError("config: " + what); }

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) known = true;
        if (!known) bad("unknown key '" + it.key() + "' in " + where);
    }
}

json section(const json& cfg, const char* name) {
    if (!cfg.contains(name)) return json::object();
    const json& s = cfg.at(name);
    if (!s.is_object()) bad(std::string("'") + name + "' must be a table");
    return s;
}

double num_or(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) bad(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

long int_or(const json& obj, const char* key, long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) bad(std::string("'") + key + "' must be an integer");
    return v.get<long>();
}

std::string str_or(const json& obj, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) bad(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

InitialProfile profile_from(const json& cfg) {
    const json p = section(cfg, "profile");
    check_keys(p, "profile", {"kind", "amplitude", "width", "wavenumber", "cutoff_width", "csv"});
    const std::string kind = str_or(p, "kind", "gaussian");
    if (kind == "gaussian")
        return InitialProfile::gaussian(num_or(p, "amplitude", 1.0), num_or(p, "width", 1.0));
    if (kind == "sine")
        return InitialProfile::sine(num_or(p, "amplitude", 1.0),
                                    static_cast<int>(int_or(p, "wavenumber", 1)));
    if (kind == "quintic" || kind == "quintic_degenerate")
        return InitialProfile::quintic_degenerate(num_or(p, "cutoff_width", 4.0));
    if (kind == "tabulated") {
        if (!p.contains("csv")) bad("tabulated profile needs a 'csv' path");
        auto [xs, fs_] = io::read_xy_csv(str_or(p, "csv", ""));
        return InitialProfile::tabulated(std::move(xs), std::move(fs_));
    }
    bad("unknown profile kind '" + kind + "'");
}

GridSpec grid_from(const json& cfg, const InitialProfile& prof, std::size_t default_n) {
    const json g = section(cfg, "grid");
    check_keys(g, "grid", {"n", "x_lo", "length"});
    GridSpec grid;
    grid.n_points = static_cast<std::size_t>(int_or(g, "n", static_cast<long>(default_n)));
    grid.x_lo = num_or(g, "x_lo", prof.x_lo());
    grid.length = num_or(g, "length", prof.length());
    grid.periodic = true;
    grid.validate(true);
    return grid;
}

struct BandSpec {
    double lo = 0.0;
    double hi = 0.0;
    bool use_energy = false;
    bool given = false;
};

BandSpec band_from(const json& cfg, double def_lo, double def_hi, bool def_energy) {
    const json f = section(cfg, "fit");
    check_keys(f, "fit", {"band", "use_energy"});
    BandSpec b{def_lo, def_hi, def_energy, false};
    if (f.contains("band")) {
        const json& arr = f.at("band");
        if (!arr.is_array() || arr.size() != 2 || !arr[0].is_number() || !arr[1].is_number())
            bad("'fit.band' must be [k_lo, k_hi]");
        b.lo = arr[0].get<double>();
        b.hi = arr[1].get<double>();
        b.given = true;
    }
    if (f.contains("use_energy")) {
        if (!f.at("use_energy").is_boolean()) bad("'fit.use_energy' must be a boolean");
        b.use_energy = f.at("use_energy").get<bool>();
    }
    return b;
}

std::vector<double> outputs_from(const json& times, std::vector<double> fallback) {
    if (!times.contains("outputs")) return fallback;
    const json& arr = times.at("outputs");
    if (!arr.is_array()) bad("'times.outputs' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) bad("'times.outputs' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    if (out.empty()) bad("'times.outputs' must not be empty");
    return out;
}

fs::path artifact_path(const RunReport& rep, const std::string& name) {
    return rep.out_dir / name;
}

void write_json_artifact(RunReport& rep, const std::string& name, const json& j) {
    const fs::path p = artifact_path(rep, name);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw Error("io: cannot open " + p.string() + " for writing");
    out << j.dump(2) << '\n';
    rep.files.push_back(name);
}

// --- experiment bodies -----------------------------------------------------

void run_breaking(const json& cfg, RunReport& rep) {
    const InitialProfile prof = profile_from(cfg);
    const BreakingPoint bp = find_breaking(prof);
    const json times = section(cfg, "times");
    check_keys(times, "times", {"t", "t_end", "outputs", "dt"});
    const std::vector<double> outs = outputs_from(times, {0.0, 0.5 * bp.t_b, bp.t_b});
    const GridSpec grid = grid_from(cfg, prof, 4096);

    json snap_times = json::array();
    for (std::size_t i = 0; i < outs.size(); ++i) {
        const WaveField f = resample_uniform(prof, outs[i], grid);
        const std::string name = "snapshot_" + std::to_string(i) + ".csv";
        io::write_field_csv(artifact_path(rep, name), f);
        rep.files.push_back(name);
        snap_times.push_back(outs[i]);
    }
    write_json_artifact(rep, "breaking.json", io::to_json(bp));

    rep.scalars["t_b"] = bp.t_b;
    rep.scalars["zeta_b"] = bp.zeta_b;
    rep.scalars["x_b"] = bp.x_b;
    rep.scalars["v_b"] = bp.v_b;
    rep.scalars["f3"] = bp.f3;
    rep.scalars["degeneracy"] = bp.degeneracy;
    rep.scalars["snapshot_times"] = snap_times;
}

void run_exponent(const json& cfg, RunReport& rep) {
    const InitialProfile prof = profile_from(cfg);
    const json e = section(cfg, "exponent");
    check_keys(e, "exponent", {"r_min", "r_max", "n_samples"});
    const double r_min = num_or(e, "r_min", 1e-6);
    const double r_max = num_or(e, "r_max", 1e-3);
    const int n_samples = static_cast<int>(int_or(e, "n_samples", 48));

    const BreakingPoint bp = find_breaking(prof);
    const ExponentFit inversion = local_exponent(prof, bp, r_min, r_max, n_samples);

    // The plotted front samples come from straight implicit evaluation at
    // x_b + r, so the reported fit is recomputable from front.csv alone.
    std::vector<double> rs(n_samples), ds(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double frac =
            (n_samples == 1) ? 0.0 : static_cast<double>(i) / (n_samples - 1);
        rs[i] = r_min * std::pow(r_max / r_min, frac);
        const double v = eval_implicit(prof, bp.x_b + rs[i], bp.t_b, bp);
        ds[i] = std::abs(v - bp.v_b);
    }
    io::write_xy_csv(artifact_path(rep, "front.csv"), "r", "deviation", rs, ds);
    rep.files.push_back("front.csv");

    std::vector<double> lr, ld;
    for (int i = 0; i < n_samples; ++i) {
        if (ds[i] <= 0.0) continue;
        lr.push_back(std::log(rs[i]));
        ld.push_back(std::log(ds[i]));
    }
    if (lr.size() < 8) throw InsufficientBins("exponent: too few nonzero front samples");
    const detail::LineFit line = detail::fit_line(lr, ld);
    ExponentFit fit;
    fit.exponent = line.slope;
    fit.amplitude = std::exp(line.intercept);
    fit.r_min = r_min;
    fit.r_max = r_max;
    fit.residual = line.residual_rms;
    fit.n_samples = static_cast<int>(lr.size());

    write_json_artifact(rep, "exponent.json", io::to_json(fit));
    write_json_artifact(rep, "breaking.json", io::to_json(bp));

    rep.scalars["exponent"] = fit.exponent;
    rep.scalars["amplitude"] = fit.amplitude;
    rep.scalars["residual"] = fit.residual;
    rep.scalars["exponent_inversion"] = inversion.exponent;
    rep.scalars["t_b"] = bp.t_b;
    rep.scalars["degeneracy"] = bp.degeneracy;
}

void run_bessel_fubini(const json& cfg, RunReport& rep) {
    const json bf = section(cfg, "bessel_fubini");
    check_keys(bf, "bessel_fubini", {"t", "n_harmonics"});
    const double t = num_or(bf, "t", 1.0);
    const long n_harmonics = int_or(bf, "n_harmonics", 500);
    if (n_harmonics < 1) bad("'bessel_fubini.n_harmonics' must be positive");

    const AmplitudeSpectrum spec = bessel_fubini_spectrum(t, static_cast<std::size_t>(n_harmonics));
    io::write_harmonics_csv(artifact_path(rep, "harmonics.csv"), spec);
    rep.files.push_back("harmonics.csv");

    const SpectrumResult hs = harmonic_spectrum(spec);
    const BandSpec band =
        band_from(cfg, 10.0, std::min(500.0, static_cast<double>(n_harmonics)), false);
    const SlopeFit fit_amp = fit_slope(hs, band.lo, band.hi, false);
    const SlopeFit fit_energy = fit_slope(hs, band.lo, band.hi, true);
    write_json_artifact(rep, "slope_amplitude.json", io::to_json(fit_amp));
    write_json_artifact(rep, "slope_energy.json", io::to_json(fit_energy));

    rep.scalars["t"] = t;
    rep.scalars["slope_amplitude"] = fit_amp.slope;
    rep.scalars["slope_energy"] = fit_energy.slope;
    rep.scalars["residual_amplitude"] = fit_amp.residual;
    rep.scalars["residual_energy"] = fit_energy.residual;
    rep.scalars["n_used"] = fit_amp.n_used;
}

void run_riemann_spectrum(const json& cfg, RunReport& rep) {
    const InitialProfile prof = profile_from(cfg);
    const BreakingPoint bp = find_breaking(prof);
    const json times = section(cfg, "times");
    check_keys(times, "times", {"t", "t_end", "outputs", "dt"});
    const double t = num_or(times, "t", bp.t_b);
    const GridSpec grid = grid_from(cfg, prof, std::size_t{1} << 14);

    const WaveField field = resample_uniform(prof, t, grid);
    io::write_field_csv(artifact_path(rep, "field.csv"), field);
    rep.files.push_back("field.csv");

    const SpectrumResult spec = amplitude_spectrum(field);
    io::write_spectrum_csv(artifact_path(rep, "spectrum.csv"), spec);
    rep.files.push_back("spectrum.csv");

    // Default band: bins 8 .. n/8, expressed in physical wavenumbers.
    const double dk = 2.0 * std::numbers::pi / grid.length;
    const BandSpec band =
        band_from(cfg, 8.0 * dk, static_cast<double>(grid.n_points / 8) * dk, false);
    const SlopeFit fit_amp = fit_slope(spec, band.lo, band.hi, false);
    const SlopeFit fit_energy = fit_slope(spec, band.lo, band.hi, true);
    write_json_artifact(rep, "slope_amplitude.json", io::to_json(fit_amp));
    write_json_artifact(rep, "slope_energy.json", io::to_json(fit_energy));
    write_json_artifact(rep, "breaking.json", io::to_json(bp));

    rep.scalars["t_b"] = bp.t_b;
    rep.scalars["t"] = t;
    rep.scalars["slope_amplitude"] = fit_amp.slope;
    rep.scalars["slope_energy"] = fit_energy.slope;
    rep.scalars["residual_amplitude"] = fit_amp.residual;
    rep.scalars["residual_energy"] = fit_energy.residual;
    rep.scalars["n_used"] = fit_amp.n_used;
}

void run_evolve(const json& cfg, RunReport& rep) {
    const InitialProfile prof = profile_from(cfg);
    const json m = section(cfg, "model");
    check_keys(m, "model", {"kind", "nu", "gamma"});
    const std::string kind = str_or(m, "kind", "");
    Model model;
    if (kind == "burgers") model = Model::burgers;
    else if (kind == "kdv") model = Model::kdv;
    else if (kind == "ostrovsky") model = Model::ostrovsky;
    else bad("'model.kind' must be burgers, kdv, or ostrovsky");
    ModelParams params;
    params.nu = num_or(m, "nu", 0.1);
    params.gamma = num_or(m, "gamma", 1.0);

    const GridSpec grid = grid_from(cfg, prof, 2048);
    const json times = section(cfg, "times");
    check_keys(times, "times", {"t", "t_end", "outputs", "dt"});
    if (!times.contains("t_end")) bad("'times.t_end' is required for evolve");
    const double t_end = num_or(times, "t_end", 0.0);
    const std::vector<double> outs = outputs_from(times, {t_end});
    const double dt = num_or(times, "dt", 0.0);

    const SolverState state = init_state(model, params, grid, prof);
    rep.scalars["mass_initial"] = mass(state);
    rep.scalars["momentum_initial"] = momentum(state);

    const std::vector<WaveField> fields = integrate(state, t_end, outs, dt);
    json out_times = json::array();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string snap = "snapshot_" + std::to_string(i) + ".csv";
        io::write_field_csv(artifact_path(rep, snap), fields[i]);
        rep.files.push_back(snap);
        const std::string spec_name = "spectrum_" + std::to_string(i) + ".csv";
        io::write_spectrum_csv(artifact_path(rep, spec_name), amplitude_spectrum(fields[i]));
        rep.files.push_back(spec_name);
        out_times.push_back(fields[i].t);
    }
    rep.scalars["output_times"] = out_times;

    const WaveField& last = fields.back();
    const double dx = last.grid.dx();
    double m0 = 0.0, m2 = 0.0, peak = 0.0;
    for (double v : last.values) {
        m0 += v;
        m2 += v * v;
        peak = std::max(peak, std::abs(v));
    }
    rep.scalars["mass_final"] = m0 * dx;
    rep.scalars["momentum_final"] = m2 * dx;
    rep.scalars["max_abs_final"] = peak;

    // Default bands in bin units scaled to physical wavenumbers: small-k
    // [2, 30] for the shock-forming models, large-k [30, n/8] for rotation.
    const double dk = 2.0 * std::numbers::pi / grid.length;
    const bool rotation = model == Model::ostrovsky;
    const BandSpec band = band_from(cfg, (rotation ? 30.0 : 2.0) * dk,
                                    (rotation ? static_cast<double>(grid.n_points / 8) : 30.0) * dk,
                                    true);
    try {
        const SlopeFit fit = fit_slope(amplitude_spectrum(last), band.lo, band.hi, band.use_energy);
        write_json_artifact(rep, "slope_final.json", io::to_json(fit));
        rep.scalars["slope_final"] = fit.slope;
        rep.scalars["residual_final"] = fit.residual;
    } catch (const InsufficientBins& err) {
        rep.scalars["slope_final_error"] = err.what();
    }
}

void run_slope(const json& cfg, RunReport& rep) {
    if (!cfg.contains("input") || !cfg.at("input").is_string())
        bad("slope experiment needs an 'input' spectrum CSV path");
    const BandSpec band = band_from(cfg, 0.0, 0.0, true);
    if (!band.given) bad("slope experiment needs 'fit.band'");
    const SpectrumResult spec = io::read_spectrum_csv(cfg.at("input").get<std::string>());
    const SlopeFit fit = fit_slope(spec, band.lo, band.hi, band.use_energy);
    write_json_artifact(rep, "slope.json", io::to_json(fit));

    rep.scalars["slope"] = fit.slope;
    rep.scalars["intercept"] = fit.intercept;
    rep.scalars["residual"] = fit.residual;
    rep.scalars["n_used"] = fit.n_used;
}

} // namespace

nlohmann::json load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    auto parse_json_text = [&]() {
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded()) throw ConfigError("config: invalid JSON in " + path.string());
        return j;
    };
    const std::string ext = path.extension().string();
    if (ext == ".json") return parse_json_text();
    if (ext == ".toml") return parse_toml(text);
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? parse_json_text() : parse_toml(text);
    }
    throw ConfigError("config: " + path.string() + " is empty");
}

RunReport run_experiment(const nlohmann::json& cfg) {
    if (!cfg.is_object()) bad("config root must be a table");
    check_keys(cfg, "config", {"experiment", "output_dir", "profile", "grid", "model", "times",
                               "fit", "exponent", "bessel_fubini", "input"});
    if (!cfg.contains("experiment") || !cfg.at("experiment").is_string())
        bad("'experiment' (string) is required");
    const std::string name = cfg.at("experiment").get<std::string>();

    RunReport rep;
    rep.experiment = name;
    rep.config = cfg;
    if (const char* env = std::getenv("RIEMANN_SPECTRA_OUT"); env && *env)
        rep.out_dir = fs::path(env);
    else
        rep.out_dir = fs::path(str_or(cfg, "output_dir", "out"));
    fs::create_directories(rep.out_dir);
    rep.scalars = json::object();

    const auto start = std::chrono::steady_clock::now();
    if (name == "breaking") run_breaking(cfg, rep);
    else if (name == "exponent") run_exponent(cfg, rep);
    else if (name == "bessel-fubini") run_bessel_fubini(cfg, rep);
    else if (name == "riemann-spectrum") run_riemann_spectrum(cfg, rep);
    else if (name == "evolve") run_evolve(cfg, rep);
    else if (name == "slope") run_slope(cfg, rep);
    else bad("unknown experiment '" + name + "'");
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (const auto& f : rep.files) {
        std::error_code ec;
        const auto size = fs::file_size(rep.out_dir / f, ec);
        if (ec || size == 0)
            throw MissingArtifact("report: artifact " + f + " is missing or empty");
    }
    return rep;
}

void emit_plot_data(RunReport& rep) {
    if (rep.files.empty()) throw MissingArtifact("report lists no artifacts to plot");
    for (const auto& f : rep.files) {
        std::error_code ec;
        const auto size = fs::file_size(rep.out_dir / f, ec);
        if (ec || size == 0)
            throw MissingArtifact("report: artifact " + f + " is missing or empty");
    }

    const bool burgers_run =
        rep.config.contains("model") && rep.config["model"].value("kind", "") == "burgers";
    const int degeneracy = rep.scalars.value("degeneracy", 1);
    const char* front_slope = (degeneracy == 2) ? "1/5" : "1/3";
    const char* front_rate = (degeneracy == 2) ? "-6/5" : "-4/3";

    std::ostringstream rc;
    rc << "plot recipe for experiment '" << rep.experiment << "'\n"
       << "reference slopes for log-log overlays: -4/3 (amplitude at breaking), "
          "-8/3 (energy at breaking), -2 (late-time small-scale energy), "
          "-6/5 (quintic-degenerate amplitude)\n\n";
    for (const auto& f : rep.files) {
        rc << "file: " << f << '\n';
        if (f.rfind("spectrum", 0) == 0) {
            rc << "  columns: k,amplitude,energy\n"
               << "  plot: energy vs k, log-log; overlay reference slope -8/3\n"
               << "  plot: amplitude vs k, log-log; overlay reference slope -4/3\n";
            if (burgers_run)
                rc << "  note: long after breaking the energy tail follows slope -2\n";
        } else if (f == "harmonics.csv") {
            rc << "  columns: n,amplitude\n"
               << "  plot: amplitude vs n, log-log; overlay reference slope -4/3\n";
        } else if (f == "front.csv") {
            rc << "  columns: r,deviation\n"
               << "  plot: deviation vs r, log-log; overlay reference slope " << front_slope
               << " (matching spectrum amplitude rate " << front_rate << ")\n";
        } else if (f.rfind("snapshot", 0) == 0 || f == "field.csv") {
            rc << "  columns: x,v\n"
               << "  plot: v vs x, linear axes\n";
        } else {
            rc << "  fit summary (JSON)\n";
        }
    }
    rc << "\nscalars:\n";
    for (auto it = rep.scalars.begin(); it != rep.scalars.end(); ++it) {
        if (it.value().is_number())
            rc << "  " << it.key() << " = "
               << io::format_double(it.value().get<double>()) << '\n';
    }

    const fs::path p = rep.out_dir / "recipe.txt";
    std::ofstream out(p);
    if (!out) throw Error("io: cannot open " + p.string() + " for writing");
    out << rc.str();
    out.close();
    rep.files.push_back("recipe.txt");
}

void write_report(const RunReport& rep) {
    json j;
    j["experiment"] = rep.experiment;
    j["config"] = rep.config;
    j["files"] = rep.files;
    j["scalars"] = rep.scalars;
    j["versions"] = json{{"riemann-spectra", kToolVersion}, {"report_format", 1}};
    j["wall_clock_seconds"] = rep.wall_seconds;

    const fs::path p = rep.out_dir / "report.json";
    std::ofstream out(p);
    if (!out) throw Error("io: cannot open " + p.string() + " for writing");
    out << j.dump(2) << '\n';
}

} // namespace rspec
