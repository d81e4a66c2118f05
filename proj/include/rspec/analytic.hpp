#pragma once

#include <cstddef>
#include <vector>

#include "rspec/errors.hpp"
#include "rspec/grid.hpp"

namespace rspec {

// Bessel function of the first kind J_n(x) for integer n >= 0, accurate to
// about 1e-12 absolute error for n up to 1e6.
double bessel_j(int n, double x);

// Harmonic amplitudes of a wave, indexed from the fundamental.
struct AmplitudeSpectrum {
    std::vector<double> amplitude; // amplitude[j] belongs to harmonic j+1
    double t = 0.0;

    std::size_t n_harmonics() const { return amplitude.size(); }
};

// Harmonic amplitudes 2 J_n(n t) / (n t) of the pre-breaking evolution of a
// unit sine wave; valid for 0 < t <= 1 (breaking occurs at t = 1).
AmplitudeSpectrum bessel_fubini_spectrum(double t, std::size_t n_harmonics);

// The same solution summed in physical space on a [0, 2 pi) grid.
WaveField bessel_fubini_field(double t, const GridSpec& grid, std::size_t n_harmonics);

} // namespace rspec
