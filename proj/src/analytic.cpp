#include "rspec/analytic.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace rspec {

namespace {

// Backward-recurrence evaluation normalized with J0 + 2 J2 + 2 J4 + ... = 1.
// The start order sits far enough above max(n, x) that the unwanted solution
// is damped below 1e-12 relative.
double bessel_miller(int n, double x) {
    const double top = std::max(static_cast<double>(n), x);
    const int offset = std::max(40, static_cast<int>(std::ceil(13.0 * std::cbrt(top))));
    const int start = std::max(n, static_cast<int>(std::ceil(x))) + offset;

    double f_kp1 = 0.0;
    double f_k = 1e-30;
    double result = 0.0;
    bool captured = false;
    if (start == n) {
        result = f_k;
        captured = true;
    }
    double sum_even = (start % 2 == 0) ? f_k : 0.0;
    for (int k = start; k >= 1; --k) {
        const double f_km1 = (2.0 * k / x) * f_k - f_kp1;
        f_kp1 = f_k;
        f_k = f_km1;
        const int idx = k - 1;
        if (idx == n) {
            result = f_k;
            captured = true;
        }
        if (idx >= 2 && idx % 2 == 0) sum_even += f_k;
        if (std::abs(f_k) > 1e270) {
            constexpr double scale = 1e-270;
            f_k *= scale;
            f_kp1 *= scale;
            sum_even *= scale;
            if (captured) result *= scale;
        }
    }
    const double norm = f_k + 2.0 * sum_even;
    return result / norm;
}

} // namespace

double bessel_j(int n, double x) {
    if (n < 0) throw DomainError("bessel_j: order must be nonnegative");
    if (!std::isfinite(x)) throw DomainError("bessel_j: argument must be finite");
    double sign = 1.0;
    if (x < 0.0) {
        x = -x;
        if (n % 2 == 1) sign = -1.0;
    }
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (n > 0) {
        // |J_n(x)| <= (x/2)^n / n!; skip the recurrence when that bound
        // underflows to well below the accuracy target.
        const double log_bound = n * std::log(0.5 * x) - std::lgamma(n + 1.0);
        if (log_bound < -740.0) return 0.0;
    }
    return sign * bessel_miller(n, x);
}

AmplitudeSpectrum bessel_fubini_spectrum(double t, std::size_t n_harmonics) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("bessel_fubini: time must be positive");
    if (t > 1.0 + 1e-12)
        throw DomainError("bessel_fubini: series is valid only up to breaking at t = 1");
    if (n_harmonics < 1 || n_harmonics > 1000000)
        throw DomainError("bessel_fubini: harmonic count must be in [1, 1e6]");
    AmplitudeSpectrum spec;
    spec.t = t;
    spec.amplitude.resize(n_harmonics);
    for (std::size_t j = 0; j < n_harmonics; ++j) {
        const double n = static_cast<double>(j + 1);
        spec.amplitude[j] = 2.0 * bessel_j(static_cast<int>(j + 1), n * t) / (n * t);
    }
    return spec;
}

WaveField bessel_fubini_field(double t, const GridSpec& grid, std::size_t n_harmonics) {
    grid.validate(false);
    if (!grid.periodic || std::abs(grid.x_lo) > 1e-12 ||
        std::abs(grid.length - 2.0 * std::numbers::pi) > 1e-10)
        throw DomainError("bessel_fubini: field requires a periodic [0, 2 pi) grid");
    const AmplitudeSpectrum spec = bessel_fubini_spectrum(t, n_harmonics);

    WaveField field;
    field.grid = grid;
    field.t = t;
    field.values.assign(grid.n_points, 0.0);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        double acc = 0.0;
        // Sum smallest harmonics first to limit rounding error.
        for (std::size_t j = n_harmonics; j-- > 0;) {
            const double n = static_cast<double>(j + 1);
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            acc += sign * spec.amplitude[j] * std::sin(n * x);
        }
        field.values[i] = acc;
    }
    return field;
}

} // namespace rspec
