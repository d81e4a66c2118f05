#ifndef RSPEC_RIEMANN_HPP
#define RSPEC_RIEMANN_HPP

#include <functional>
#include <span>
#include <vector>

#include "rspec/grid.hpp"
#include "rspec/profiles.hpp"

namespace rspec {

// Where and when the characteristics of v_t + v v_x = 0 first cross.
// zeta_b minimizes F'; t_b = -1/F'(zeta_b); the wave arrives at
// x_b = zeta_b + t_b F(zeta_b) with value v_b = F(zeta_b). degeneracy p = 1
// for the generic cube-root front (F''' > 0), p = 2 when F''' and F'''' also
// vanish and the first surviving derivative is the fifth.
struct BreakingPoint {
    double zeta_b = 0.0;
    double t_b = 0.0;
    double x_b = 0.0;
    double v_b = 0.0;
    double f3 = 0.0; // F'''(zeta_b)
    int degeneracy = 1;
};

// Exact solution sampled along characteristics: x = zeta + t F(zeta),
// v = F(zeta). Valid at any t >= 0; folded marks a multivalued x traversal.
struct ParametricCurve {
    std::vector<double> zeta;
    std::vector<double> x;
    std::vector<double> v;
    double t = 0.0;
    bool folded = false;
};

// Power-law fit |v - v_b| ~ amplitude * r^exponent near the breaking point.
struct ExponentFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    double residual = 0.0;
    int n_samples = 0;
};

// Strictly increasing speed map v = V(u) with its derivative.
struct SpeedMap {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

// Locates the global slope minimum by dense scan plus bisection on F''.
// Throws NoBreaking if F' >= 0 everywhere and UnsupportedDerivativeOrder for
// kinds without second derivatives.
BreakingPoint find_breaking(const InitialProfile& profile);

// Characteristic samples at the given zeta values.
ParametricCurve sample_parametric(const InitialProfile& profile, double t,
                                  std::span<const double> zetas);

// Single-valued wave value at (x, t) for 0 <= t <= t_b, by bracketed
// bisection with Newton polish on zeta + t F(zeta) = x. The overload taking a
// BreakingPoint skips recomputing the breaking time.
double eval_implicit(const InitialProfile& profile, double x, double t);
double eval_implicit(const InitialProfile& profile, double x, double t,
                     const BreakingPoint& bp);

// Wave resampled onto a uniform grid through the characteristic map, with the
// zeta mesh refined geometrically toward zeta_b so the front stays resolved
// at t = t_b.
WaveField resample_uniform(const InitialProfile& profile, double t, const GridSpec& grid);

// Fits the one-sided local exponent of |v(x_b + r) - v_b| at t = t_b over
// log-spaced r in [r_min, r_max], inverting the characteristic relation for
// each sample. Throws WindowTooWide when the fit residual exceeds 0.1.
ExponentFit local_exponent(const InitialProfile& profile, double r_min, double r_max,
                           int n_samples = 48);
ExponentFit local_exponent(const InitialProfile& profile, const BreakingPoint& bp,
                           double r_min, double r_max, int n_samples = 48);

// Same fit applied to field samples around (x_center, v_center), using the
// grid points nearest each log-spaced offset.
ExponentFit field_local_exponent(const WaveField& field, double x_center, double v_center,
                                 double r_min, double r_max, int n_samples = 48);

// Maps wave speeds back to the physical variable: u_i = V^{-1}(v_i) by
// safeguarded Newton. Throws NotInvertible if V' <= 0 anywhere on the
// sampled value range.
WaveField transform_general_speed(const WaveField& field, const SpeedMap& speed);

} // namespace rspec

#endif
