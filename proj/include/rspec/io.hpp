#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rspec/analytic.hpp"
#include "rspec/grid.hpp"
#include "rspec/riemann.hpp"
#include "rspec/spectra.hpp"

namespace rspec::io {

// All floating-point output uses 17 significant digits so values round-trip.
std::string format_double(double value);

void write_field_csv(const std::filesystem::path& path, const WaveField& field);
void write_xy_csv(const std::filesystem::path& path, const std::string& col_a,
                  const std::string& col_b, const std::vector<double>& xs,
                  const std::vector<double>& ys);
void write_parametric_csv(const std::filesystem::path& path, const ParametricCurve& curve);
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum);
void write_harmonics_csv(const std::filesystem::path& path, const AmplitudeSpectrum& spectrum);

nlohmann::json to_json(const BreakingPoint& bp);
nlohmann::json to_json(const ExponentFit& fit);
nlohmann::json to_json(const SlopeFit& fit);

// Readers used by tests and the report-integrity check.
SpectrumResult read_spectrum_csv(const std::filesystem::path& path);
std::pair<std::vector<double>, std::vector<double>> read_xy_csv(const std::filesystem::path& path);

} // namespace rspec::io
