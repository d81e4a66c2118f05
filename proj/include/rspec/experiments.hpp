#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rspec {

inline constexpr const char* kToolVersion = "0.1.0";

// Outcome of one experiment: artifact names are relative to out_dir and are
// guaranteed to exist and be non-empty when run_experiment returns.
struct RunReport {
    std::string experiment;
    nlohmann::json config; // echo of the input config (resolved values land in scalars)
    std::vector<std::string> files;
    nlohmann::json scalars;
    std::filesystem::path out_dir;
    double wall_seconds = 0.0;
};

// Read a JSON or TOML config (by extension; content is sniffed otherwise).
nlohmann::json load_config(const std::filesystem::path& path);

// Validate the config, fill defaults, run the named experiment, and write
// its CSV/JSON artifacts. The RIEMANN_SPECTRA_OUT environment variable
// overrides the configured output directory.
RunReport run_experiment(const nlohmann::json& config);

// Write recipe.txt describing how to plot each artifact (columns, log-log
// axes, reference slopes); the file is appended to report.files.
void emit_plot_data(RunReport& report);

// Write the report.json manifest into report.out_dir.
void write_report(const RunReport& report);

} // namespace rspec
