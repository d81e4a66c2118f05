#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "rspec/errors.hpp"
#include "rspec/spectra.hpp"

using namespace rspec;

namespace {

constexpr double kPi = std::numbers::pi;

WaveField make_field(std::size_t n, double x_lo, double length,
                     const std::function<double(double)>& f) {
    GridSpec grid{n, x_lo, length, true};
    WaveField field{grid, std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) field.values[i] = f(grid.x(i));
    return field;
}

} // namespace

TEST_CASE("a pure sine lands in exactly one bin with its amplitude") {
    const auto field = make_field(64, 0.0, 2.0 * kPi,
                                  [](double x) { return 0.7 * std::sin(3.0 * x + 0.4); });
    const SpectrumResult spec = amplitude_spectrum(field);
    REQUIRE(spec.k.size() == 31); // bins 1..N/2-1
    for (std::size_t j = 0; j < spec.k.size(); ++j) {
        CHECK(spec.k[j] == doctest::Approx(static_cast<double>(j + 1)).epsilon(1e-14));
        const double expected = (j + 1 == 3) ? 0.7 : 0.0;
        CHECK(spec.amplitude[j] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(spec.energy[j] ==
              doctest::Approx(spec.amplitude[j] * spec.amplitude[j]).epsilon(1e-12));
    }
}

TEST_CASE("gaussian spectrum matches the continuous transform") {
    const double length = 40.0;
    const auto field =
        make_field(4096, -20.0, length, [](double x) { return std::exp(-x * x); });
    const SpectrumResult spec = amplitude_spectrum(field);
    // Continuous transform of exp(-x^2) is sqrt(pi) exp(-k^2/4); on a box of
    // size L the bin amplitude is 2/L times that.
    for (std::size_t j = 0; j < spec.k.size(); ++j) {
        const double k = spec.k[j];
        if (k > 5.0) break;
        const double expected = 2.0 / length * std::sqrt(kPi) * std::exp(-k * k / 4.0);
        CHECK(spec.amplitude[j] == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("spectrum wavenumbers reflect the box size") {
    const auto field = make_field(256, -20.0, 40.0, [](double x) { return std::exp(-x * x); });
    const SpectrumResult spec = amplitude_spectrum(field);
    CHECK(spec.k[0] == doctest::Approx(2.0 * kPi / 40.0).epsilon(1e-14));
    CHECK(spec.k[9] == doctest::Approx(10.0 * 2.0 * kPi / 40.0).epsilon(1e-14));
}

TEST_CASE("spectrum scales linearly and ignores translation") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> amp(0.1, 1.0);
    std::vector<double> a(8), phi(8);
    for (int m = 0; m < 8; ++m) {
        a[m] = amp(rng);
        phi[m] = amp(rng) * 6.0;
    }
    auto wave = [&](double shift) {
        return make_field(512, 0.0, 2.0 * kPi, [&, shift](double x) {
            double s = 0.0;
            for (int m = 0; m < 8; ++m) s += a[m] * std::sin((m + 1) * (x + shift) + phi[m]);
            return s;
        });
    };
    const SpectrumResult base = amplitude_spectrum(wave(0.0));
    const SpectrumResult shifted = amplitude_spectrum(wave(1.234));

    WaveField doubled = wave(0.0);
    for (double& v : doubled.values) v *= 2.0;
    const SpectrumResult twice = amplitude_spectrum(doubled);

    for (std::size_t j = 0; j < 16; ++j) {
        CHECK(shifted.amplitude[j] == doctest::Approx(base.amplitude[j]).epsilon(1e-11));
        CHECK(twice.amplitude[j] == doctest::Approx(2.0 * base.amplitude[j]).epsilon(1e-12));
    }
}

TEST_CASE("parseval residual is tiny for smooth fields and rejects zero fields") {
    const auto field = make_field(1024, 0.0, 2.0 * kPi, [](double x) {
        return std::sin(x) + 0.3 * std::cos(5.0 * x) + 0.01 * std::sin(40.0 * x);
    });
    CHECK(parseval_residual(field) < 1e-13);

    const auto zero = make_field(64, 0.0, 2.0 * kPi, [](double) { return 0.0; });
    CHECK_THROWS_AS(parseval_residual(zero), ZeroField);
}

TEST_CASE("slope fit is exact on an exact power law") {
    const auto field = make_field(1024, 0.0, 2.0 * kPi, [](double x) {
        double s = 0.0;
        for (int k = 1; k <= 100; ++k) s += std::pow(k, -4.0 / 3.0) * std::sin(k * x + 0.1 * k);
        return s;
    });
    const SpectrumResult spec = amplitude_spectrum(field);
    const SlopeFit amp_fit = fit_slope(spec, 5.0, 80.0, false);
    CHECK(std::abs(amp_fit.slope + 4.0 / 3.0) < 1e-12);
    CHECK(amp_fit.residual < 1e-12);
    CHECK(amp_fit.n_used == 76);

    const SlopeFit energy_fit = fit_slope(spec, 5.0, 80.0, true);
    CHECK(std::abs(energy_fit.slope + 8.0 / 3.0) < 1e-10);
    CHECK(energy_fit.slope == doctest::Approx(2.0 * amp_fit.slope).epsilon(1e-12));
}

TEST_CASE("slope fit includes both band edges") {
    const auto field = make_field(256, 0.0, 2.0 * kPi, [](double x) {
        double s = 0.0;
        for (int k = 1; k <= 60; ++k) s += std::pow(k, -2.0) * std::sin(k * x);
        return s;
    });
    const SlopeFit fit = fit_slope(amplitude_spectrum(field), 10.0, 20.0, false);
    CHECK(fit.n_used == 11);
    CHECK(fit.k_lo == doctest::Approx(10.0));
    CHECK(fit.k_hi == doctest::Approx(20.0));
}

TEST_CASE("slope of a flat spectrum is zero") {
    const auto field = make_field(256, 0.0, 2.0 * kPi, [](double x) {
        double s = 0.0;
        for (int k = 1; k <= 100; ++k) s += std::sin(k * x + 0.77 * k);
        return s;
    });
    const SlopeFit fit = fit_slope(amplitude_spectrum(field), 2.0, 90.0, false);
    CHECK(std::abs(fit.slope) < 1e-10);
}

TEST_CASE("slope is invariant under amplitude scaling") {
    const auto field = make_field(512, 0.0, 2.0 * kPi, [](double x) {
        double s = 0.0;
        for (int k = 1; k <= 120; ++k) s += std::pow(k, -1.7) * std::sin(k * x + k);
        return s;
    });
    WaveField scaled = field;
    for (double& v : scaled.values) v *= 3.7;
    const SlopeFit a = fit_slope(amplitude_spectrum(field), 3.0, 100.0, false);
    const SlopeFit b = fit_slope(amplitude_spectrum(scaled), 3.0, 100.0, false);
    CHECK(std::abs(a.slope - b.slope) < 1e-12);
    CHECK(b.intercept - a.intercept == doctest::Approx(std::log(3.7)).epsilon(1e-10));
}

TEST_CASE("slope fit reports unusable bands") {
    const auto field = make_field(128, 0.0, 2.0 * kPi,
                                  [](double x) { return std::sin(x); });
    const SpectrumResult spec = amplitude_spectrum(field);
    CHECK_THROWS_AS(fit_slope(spec, 2.0, 6.0, false), InsufficientBins);     // band too narrow
    CHECK_THROWS_AS(fit_slope(spec, 500.0, 900.0, false), InsufficientBins); // beyond Nyquist
    CHECK_THROWS_AS(fit_slope(spec, 6.0, 2.0, false), DomainError);
}

TEST_CASE("spectrum analysis rejects non-periodic or tiny grids") {
    GridSpec bad{64, 0.0, 1.0, false};
    WaveField field{bad, std::vector<double>(64, 1.0), 0.0};
    CHECK_THROWS_AS(amplitude_spectrum(field), DomainError);

    GridSpec odd{96, 0.0, 1.0, true};
    WaveField field2{odd, std::vector<double>(96, 1.0), 0.0};
    CHECK_THROWS_AS(amplitude_spectrum(field2), DomainError);
}

TEST_CASE("harmonic series view keeps indices and squares energies") {
    AmplitudeSpectrum h;
    h.t = 0.5;
    h.amplitude = {1.0, 0.25, 0.111, 0.0625};
    const SpectrumResult spec = harmonic_spectrum(h);
    REQUIRE(spec.k.size() == 4);
    CHECK(spec.k[0] == 1.0);
    CHECK(spec.k[3] == 4.0);
    CHECK(spec.energy[1] == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(spec.t == 0.5);
}
