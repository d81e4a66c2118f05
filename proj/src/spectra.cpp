#include "rspec/spectra.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "linear_fit.hpp"
#include "rspec/fft.hpp"

namespace rspec {

SpectrumResult amplitude_spectrum(const WaveField& field) {
    field.grid.validate(true);
    if (!field.grid.periodic)
        throw DomainError("spectra: amplitude spectrum requires a periodic grid");
    if (field.values.size() != field.grid.n_points)
        throw DomainError("spectra: field length does not match its grid");

    const std::size_t n = field.grid.n_points;
    const auto u_hat = fft_forward_real(field.values);

    SpectrumResult out;
    out.t = field.t;
    const std::size_t n_bins = n / 2 - 1; // k = 0 and Nyquist excluded
    out.k.resize(n_bins);
    out.amplitude.resize(n_bins);
    out.energy.resize(n_bins);
    const double dk = 2.0 * std::numbers::pi / field.grid.length;
    for (std::size_t j = 1; j < n / 2; ++j) {
        const double amp = 2.0 * std::abs(u_hat[j]) / static_cast<double>(n);
        out.k[j - 1] = dk * static_cast<double>(j);
        out.amplitude[j - 1] = amp;
        out.energy[j - 1] = amp * amp;
    }
    return out;
}

SpectrumResult harmonic_spectrum(const AmplitudeSpectrum& spectrum) {
    SpectrumResult out;
    out.t = spectrum.t;
    out.k.resize(spectrum.amplitude.size());
    out.amplitude.resize(spectrum.amplitude.size());
    out.energy.resize(spectrum.amplitude.size());
    for (std::size_t j = 0; j < spectrum.amplitude.size(); ++j) {
        const double amp = std::abs(spectrum.amplitude[j]);
        out.k[j] = static_cast<double>(j + 1);
        out.amplitude[j] = amp;
        out.energy[j] = amp * amp;
    }
    return out;
}

SlopeFit fit_slope(const SpectrumResult& spectrum, double k_lo, double k_hi,
                   bool use_energy) {
    if (!(k_lo > 0.0) || !(k_hi > k_lo))
        throw DomainError("spectra: fit band must satisfy 0 < k_lo < k_hi");

    std::vector<double> log_k, log_v;
    const double lo = k_lo * (1.0 - 1e-12);
    const double hi = k_hi * (1.0 + 1e-12);
    for (std::size_t j = 0; j < spectrum.k.size(); ++j) {
        const double k = spectrum.k[j];
        if (k < lo || k > hi) continue;
        const double value = use_energy ? spectrum.energy[j] : spectrum.amplitude[j];
        if (value < 1e-30) continue;
        log_k.push_back(std::log(k));
        log_v.push_back(std::log(value));
    }
    if (log_k.size() < 8)
        throw InsufficientBins("spectra: fewer than 8 usable bins in the fit band");

    const detail::LineFit line = detail::fit_line(log_k, log_v);
    SlopeFit fit;
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.k_lo = k_lo;
    fit.k_hi = k_hi;
    fit.residual = line.residual_rms;
    fit.n_used = static_cast<int>(log_k.size());
    return fit;
}

double parseval_residual(const WaveField& field) {
    field.grid.validate(true);
    if (!field.grid.periodic)
        throw DomainError("spectra: Parseval check requires a periodic grid");
    const std::size_t n = field.grid.n_points;
    const double dx = field.grid.dx();

    double physical = 0.0;
    for (double v : field.values) physical += v * v;
    physical *= dx;
    if (physical == 0.0) throw ZeroField("spectra: zero field has no Parseval residual");

    const auto u_hat = fft_forward_real(field.values);
    double spectral = 0.0;
    for (const auto& c : u_hat) spectral += std::norm(c);
    spectral *= field.grid.length / (static_cast<double>(n) * static_cast<double>(n));

    return std::abs(physical - spectral) / physical;
}

} // namespace rspec
