#ifndef RSPEC_PROFILES_HPP
#define RSPEC_PROFILES_HPP

#include <string>
#include <vector>

#include "rspec/errors.hpp"

namespace rspec {

enum class ProfileKind { gaussian, sine, quintic_degenerate, tabulated };

// Initial wave profile F with analytic derivatives. Analytic kinds support
// orders 0..5; tabulated data supports orders 0..1 only. Periodic kinds fold
// the argument into the fundamental domain; non-periodic kinds reject
// arguments outside it.
class InitialProfile {
public:
    // a * exp(-(x/w)^2) on a periodic box wide enough that |F| < 1e-12 at the
    // edges (at least [-20, 20)).
    static InitialProfile gaussian(double amplitude, double width);

    // a * sin(m x) on [0, 2*pi).
    static InitialProfile sine(double amplitude, int wavenumber);

    // Profile whose slope minimum at x = 0 is quartically flat:
    // F'(x) = -exp(-x^4) * cutoff(x / L), so F'(0) = -1, derivatives 2..4
    // vanish at 0 and the fifth derivative is exactly 24. F itself is the
    // antiderivative decaying to 0 on the right, evaluated by quadrature.
    static InitialProfile quintic_degenerate(double cutoff_width);

    // Monotone cubic (Fritsch-Carlson) interpolant of sampled data; shape
    // preserving, so no spurious slope minima appear between samples.
    static InitialProfile tabulated(std::vector<double> xs, std::vector<double> fs);

    // F^(order)(x). Throws UnsupportedDerivativeOrder beyond the kind's
    // supported order and DomainError outside a non-periodic domain.
    double eval(double x, int order = 0) const;

    double operator()(double x) const { return eval(x, 0); }

    ProfileKind kind() const { return kind_; }
    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    double length() const { return x_hi_ - x_lo_; }
    bool periodic() const { return periodic_; }
    int max_derivative_order() const { return max_order_; }

    // Kind parameters, used for reporting.
    double amplitude() const { return amplitude_; }
    double width() const { return width_; }
    int wavenumber() const { return wavenumber_; }

private:
    InitialProfile() = default;

    double eval_gaussian(double x, int order) const;
    double eval_sine(double x, int order) const;
    double eval_quintic(double x, int order) const;
    double eval_tabulated(double x, int order) const;

    double fold(double x) const;

    ProfileKind kind_ = ProfileKind::gaussian;
    double x_lo_ = 0.0;
    double x_hi_ = 0.0;
    bool periodic_ = false;
    int max_order_ = 5;

    double amplitude_ = 0.0;
    double width_ = 0.0;
    int wavenumber_ = 0;

    // tabulated data and precomputed segment slopes
    std::vector<double> xs_, fs_, ms_;
};

} // namespace rspec

#endif
