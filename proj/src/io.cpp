#include "rspec/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rspec::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("io: cannot open " + path.string() + " for writing");
    return out;
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path,
                                           std::size_t n_columns) {
    std::ifstream in(path);
    if (!in) throw MissingArtifact("io: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("io: " + path.string() + " is empty");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw Error("io: bad number in " + path.string());
            row.push_back(v);
        }
        if (row.size() != n_columns)
            throw Error("io: wrong column count in " + path.string());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_field_csv(const std::filesystem::path& path, const WaveField& field) {
    auto out = open_out(path);
    out << "x,v\n";
    for (std::size_t i = 0; i < field.values.size(); ++i)
        out << format_double(field.grid.x(i)) << ',' << format_double(field.values[i]) << '\n';
}

void write_xy_csv(const std::filesystem::path& path, const std::string& col_a,
                  const std::string& col_b, const std::vector<double>& xs,
                  const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw DomainError("io: column lengths differ");
    auto out = open_out(path);
    out << col_a << ',' << col_b << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << format_double(xs[i]) << ',' << format_double(ys[i]) << '\n';
}

void write_parametric_csv(const std::filesystem::path& path, const ParametricCurve& curve) {
    auto out = open_out(path);
    out << "zeta,x,v\n";
    for (std::size_t i = 0; i < curve.zeta.size(); ++i)
        out << format_double(curve.zeta[i]) << ',' << format_double(curve.x[i]) << ','
            << format_double(curve.v[i]) << '\n';
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum) {
    auto out = open_out(path);
    out << "k,amplitude,energy\n";
    for (std::size_t i = 0; i < spectrum.k.size(); ++i)
        out << format_double(spectrum.k[i]) << ',' << format_double(spectrum.amplitude[i])
            << ',' << format_double(spectrum.energy[i]) << '\n';
}

void write_harmonics_csv(const std::filesystem::path& path, const AmplitudeSpectrum& spectrum) {
    auto out = open_out(path);
    out << "n,amplitude\n";
    for (std::size_t i = 0; i < spectrum.amplitude.size(); ++i)
        out << (i + 1) << ',' << format_double(spectrum.amplitude[i]) << '\n';
}

nlohmann::json to_json(const BreakingPoint& bp) {
    return {{"zeta_b", bp.zeta_b}, {"t_b", bp.t_b},   {"x_b", bp.x_b},
            {"v_b", bp.v_b},       {"f3", bp.f3},     {"degeneracy", bp.degeneracy}};
}

nlohmann::json to_json(const ExponentFit& fit) {
    return {{"exponent", fit.exponent},   {"amplitude", fit.amplitude},
            {"window", {fit.r_min, fit.r_max}}, {"residual", fit.residual},
            {"n_samples", fit.n_samples}};
}

nlohmann::json to_json(const SlopeFit& fit) {
    return {{"slope", fit.slope},   {"intercept", fit.intercept},
            {"band", {fit.k_lo, fit.k_hi}}, {"residual", fit.residual},
            {"n_used", fit.n_used}};
}

SpectrumResult read_spectrum_csv(const std::filesystem::path& path) {
    const auto rows = read_rows(path, 3);
    SpectrumResult s;
    for (const auto& row : rows) {
        s.k.push_back(row[0]);
        s.amplitude.push_back(row[1]);
        s.energy.push_back(row[2]);
    }
    return s;
}

std::pair<std::vector<double>, std::vector<double>> read_xy_csv(
    const std::filesystem::path& path) {
    const auto rows = read_rows(path, 2);
    std::pair<std::vector<double>, std::vector<double>> xy;
    for (const auto& row : rows) {
        xy.first.push_back(row[0]);
        xy.second.push_back(row[1]);
    }
    return xy;
}

} // namespace rspec::io
