#pragma once

#include <cstddef>
#include <vector>

#include "rspec/analytic.hpp"
#include "rspec/errors.hpp"
#include "rspec/grid.hpp"

namespace rspec {

// Single-sided discrete spectrum: k[j] = 2*pi*(j+1)/length, amplitude scaled
// so a pure sine of amplitude A shows A at its bin, energy = amplitude^2.
struct SpectrumResult {
    std::vector<double> k;
    std::vector<double> amplitude;
    std::vector<double> energy;
    double t = 0.0;
};

// Least-squares power-law fit of a spectrum over a wavenumber band.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0; // of ln(value) vs ln(k)
    double k_lo = 0.0;
    double k_hi = 0.0;
    double residual = 0.0; // RMS in log space
    int n_used = 0;
};

SpectrumResult amplitude_spectrum(const WaveField& field);

// View a harmonic-amplitude series as a spectrum with k = harmonic index.
SpectrumResult harmonic_spectrum(const AmplitudeSpectrum& spectrum);

// OLS of ln(value) on ln(k) over k in [k_lo, k_hi]; bins below 1e-30 are
// dropped. Throws InsufficientBins when fewer than 8 usable bins remain.
SlopeFit fit_slope(const SpectrumResult& spectrum, double k_lo, double k_hi,
                   bool use_energy = false);

// |physical energy - spectral energy| / physical energy (Parseval check).
double parseval_residual(const WaveField& field);

} // namespace rspec
