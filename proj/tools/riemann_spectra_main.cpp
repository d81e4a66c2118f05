#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rspec/errors.hpp"
#include "rspec/experiments.hpp"
#include "rspec/io.hpp"

namespace {

using nlohmann::json;

// Parse "key=value,key=value" (or a bare leading token treated as `kind`)
// into a config table. Values become integers, doubles, or strings.
json parse_kv_list(const std::string& text, const char* flag) {
    json table = json::object();
    std::size_t pos = 0;
    bool first = true;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) {
            if (comma >= text.size()) break;
            throw rspec::ConfigError(std::string("config: empty item in ") + flag);
        }
        const std::size_t eq = item.find('=');
        std::string key, value;
        if (eq == std::string::npos) {
            if (!first)
                throw rspec::ConfigError(std::string("config: expected key=value in ") + flag +
                                         ": '" + item + "'");
            key = "kind";
            value = item;
        } else {
            key = item.substr(0, eq);
            value = item.substr(eq + 1);
        }
        first = false;
        if (key.empty() || value.empty())
            throw rspec::ConfigError(std::string("config: expected key=value in ") + flag + ": '" +
                                     item + "'");
        char* end = nullptr;
        const long long as_int = std::strtoll(value.c_str(), &end, 10);
        if (end && *end == '\0' && value.find_first_of(".eE") == std::string::npos) {
            table[key] = as_int;
            continue;
        }
        const double as_double = std::strtod(value.c_str(), &end);
        if (end && *end == '\0')
            table[key] = as_double;
        else
            table[key] = value;
        if (comma >= text.size()) break;
    }
    return table;
}

struct Overrides {
    std::string experiment;
    std::string profile;
    std::string model;
    std::string band;
    std::string out_dir;
    double t_end = std::numeric_limits<double>::quiet_NaN();
    long grid_n = 0;
};

void apply_overrides(json& cfg, const Overrides& ov) {
    if (!ov.experiment.empty()) cfg["experiment"] = ov.experiment;
    if (!ov.profile.empty()) {
        const json table = parse_kv_list(ov.profile, "--profile");
        for (auto it = table.begin(); it != table.end(); ++it) cfg["profile"][it.key()] = it.value();
    }
    if (!ov.model.empty()) {
        const json table = parse_kv_list(ov.model, "--model");
        for (auto it = table.begin(); it != table.end(); ++it) cfg["model"][it.key()] = it.value();
    }
    if (!ov.band.empty()) {
        const std::size_t comma = ov.band.find(',');
        char* end_lo = nullptr;
        char* end_hi = nullptr;
        double lo = 0.0, hi = 0.0;
        if (comma != std::string::npos) {
            const std::string a = ov.band.substr(0, comma);
            const std::string b = ov.band.substr(comma + 1);
            lo = std::strtod(a.c_str(), &end_lo);
            hi = std::strtod(b.c_str(), &end_hi);
            if (a.empty() || b.empty() || *end_lo != '\0' || *end_hi != '\0')
                end_lo = nullptr;
        }
        if (comma == std::string::npos || end_lo == nullptr)
            throw rspec::ConfigError("config: --band expects K_LO,K_HI");
        cfg["fit"]["band"] = json::array({lo, hi});
    }
    if (!ov.out_dir.empty()) cfg["output_dir"] = ov.out_dir;
    if (!std::isnan(ov.t_end)) cfg["times"]["t_end"] = ov.t_end;
    if (ov.grid_n > 0) cfg["grid"]["n"] = ov.grid_n;
}

int run_one(const json& cfg, const std::string& label) {
    try {
        rspec::RunReport report = rspec::run_experiment(cfg);
        rspec::emit_plot_data(report);
        rspec::write_report(report);
        std::cout << label << ": ok, " << report.files.size() << " files -> "
                  << (report.out_dir / "report.json").string() << " ("
                  << report.wall_seconds << " s)\n";
        for (auto it = report.scalars.begin(); it != report.scalars.end(); ++it) {
            if (it.value().is_number())
                std::cout << "  " << it.key() << " = "
                          << rspec::io::format_double(it.value().get<double>()) << '\n';
        }
        return 0;
    } catch (const rspec::ConfigError& e) {
        std::cerr << label << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << label << ": error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact simple-wave evolution, breaking-point analysis, and "
                 "spectral power-law measurement"};
    app.set_version_flag("--version", rspec::kToolVersion);

    std::string experiment;
    std::vector<std::string> config_paths;
    Overrides ov;
    int jobs = 1;

    app.add_option("experiment", experiment,
                   "experiment: breaking | exponent | bessel-fubini | riemann-spectrum | "
                   "evolve | slope");
    app.add_option("--config", config_paths, "config file (JSON or TOML); repeatable");
    app.add_option("--profile", ov.profile,
                   "profile override, e.g. gaussian,amplitude=1,width=1");
    app.add_option("--model", ov.model, "model override, e.g. burgers,nu=0.1");
    app.add_option("--t-end", ov.t_end, "evolution end time override");
    app.add_option("--grid-n", ov.grid_n, "grid size override (power of two)");
    app.add_option("--band", ov.band, "fit band override K_LO,K_HI");
    app.add_option("--out", ov.out_dir, "output directory override");
    app.add_option("--jobs", jobs, "max parallel processes for multiple configs")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << rspec::kToolVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "config: " << e.what() << '\n';
        return 2;
    }
    ov.experiment = experiment;

    if (config_paths.empty() && experiment.empty()) {
        std::cerr << "config: need an experiment name or --config FILE\n";
        return 2;
    }

    // Assemble one config per run: defaults <- file <- flag overrides.
    std::vector<std::pair<std::string, json>> runs;
    for (const auto& path : config_paths) {
        try {
            json cfg = rspec::load_config(path);
            apply_overrides(cfg, ov);
            runs.emplace_back(path, std::move(cfg));
        } catch (const rspec::ConfigError& e) {
            std::cerr << e.what() << '\n';
            return 2;
        }
    }
    if (runs.empty()) {
        try {
            json cfg = json::object();
            apply_overrides(cfg, ov);
            runs.emplace_back(experiment, std::move(cfg));
        } catch (const rspec::ConfigError& e) {
            std::cerr << e.what() << '\n';
            return 2;
        }
    }

    if (runs.size() == 1 || jobs <= 1) {
        int status = 0;
        for (const auto& [label, cfg] : runs) status = std::max(status, run_one(cfg, label));
        return status;
    }

    // Fan independent configs out across child processes, at most `jobs` live.
    int status = 0;
    int live = 0;
    auto reap = [&](bool block) {
        int wstatus = 0;
        while (live > 0) {
            const pid_t pid = waitpid(-1, &wstatus, block ? 0 : WNOHANG);
            if (pid <= 0) break;
            --live;
            if (WIFEXITED(wstatus)) status = std::max(status, WEXITSTATUS(wstatus));
            else status = std::max(status, 1);
            if (block) break;
        }
    };
    for (const auto& [label, cfg] : runs) {
        while (live >= jobs) reap(true);
        const pid_t pid = fork();
        if (pid < 0) {
            std::cerr << label << ": error: fork failed\n";
            status = std::max(status, 1);
            continue;
        }
        if (pid == 0) std::exit(run_one(cfg, label));
        ++live;
        reap(false);
    }
    while (live > 0) reap(true);
    return status;
}
