#include "rspec/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "linear_fit.hpp"

namespace rspec {

namespace {

constexpr int kScanPoints = 8192;
constexpr int kMaxIterations = 200;

struct SlopeScan {
    double zeta_min = 0.0;  // argmin of F'
    double slope_min = 0.0; // min of F'
    double f_min = 0.0;     // range of F over the scan
    double f_max = 0.0;
};

SlopeScan scan_profile(const InitialProfile& p) {
    SlopeScan s;
    const double lo = p.x_lo(), hi = p.x_hi();
    const int n = kScanPoints;
    // Periodic domains exclude the right endpoint; closed domains include it.
    const double step = p.periodic() ? (hi - lo) / n : (hi - lo) / (n - 1);
    s.slope_min = std::numeric_limits<double>::infinity();
    s.f_min = std::numeric_limits<double>::infinity();
    s.f_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = lo + step * i;
        const double fp = p.eval(x, 1);
        const double f = p.eval(x, 0);
        if (fp < s.slope_min) {
            s.slope_min = fp;
            s.zeta_min = x;
        }
        s.f_min = std::min(s.f_min, f);
        s.f_max = std::max(s.f_max, f);
    }
    return s;
}

// Breaking time from the slope scan alone; usable for kinds that cannot
// provide second derivatives. Infinity when the profile never steepens.
double breaking_time_estimate(const InitialProfile& p) {
    const SlopeScan s = scan_profile(p);
    if (s.slope_min >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / s.slope_min;
}

double solve_characteristic(const InitialProfile& p, double x, double t, double f_min,
                            double f_max) {
    const double tol = 1e-13 * std::max(1.0, std::abs(x));
    const double pad = 1e-3 * (1.0 + t * (f_max - f_min));
    double lo = x - t * f_max - pad;
    double hi = x - t * f_min + pad;
    if (!p.periodic()) {
        lo = std::max(lo, p.x_lo());
        hi = std::min(hi, p.x_hi());
    }
    auto g = [&](double z) { return z + t * p.eval(z, 0) - x; };
    double glo = g(lo), ghi = g(hi);
    if (glo > 0.0 || ghi < 0.0)
        throw DomainError("riemann: position outside the evolved profile domain");
    double z = 0.5 * (lo + hi);
    double gz = g(z);
    for (int it = 0; it < kMaxIterations; ++it) {
        if (std::abs(gz) <= tol) return p.eval(z, 0);
        if (gz > 0.0) hi = z;
        else lo = z;
        // Newton step when it stays inside the bracket, bisection otherwise.
        double znext = 0.5 * (lo + hi);
        const double gp = 1.0 + t * p.eval(z, 1);
        if (gp > 1e-12) {
            const double cand = z - gz / gp;
            if (cand > lo && cand < hi) znext = cand;
        }
        z = znext;
        gz = g(z);
    }
    if (std::abs(gz) <= tol) return p.eval(z, 0);
    throw ConvergenceFailure("riemann: characteristic root did not converge");
}

} // namespace

BreakingPoint find_breaking(const InitialProfile& profile) {
    const SlopeScan scan = scan_profile(profile);
    if (scan.slope_min >= 0.0)
        throw NoBreaking("riemann: slope never becomes negative, no breaking occurs");

    // F'' changes sign from negative to positive across the slope minimum.
    const double h = (profile.x_hi() - profile.x_lo()) / kScanPoints;
    double lo = scan.zeta_min - h;
    double hi = scan.zeta_min + h;
    if (!profile.periodic()) {
        lo = std::max(lo, profile.x_lo());
        hi = std::min(hi, profile.x_hi());
    }
    double d2lo = profile.eval(lo, 2);
    double d2hi = profile.eval(hi, 2);
    for (int widen = 0; (d2lo >= 0.0 || d2hi <= 0.0) && widen < 8; ++widen) {
        lo -= h;
        hi += h;
        if (!profile.periodic()) {
            lo = std::max(lo, profile.x_lo());
            hi = std::min(hi, profile.x_hi());
        }
        d2lo = profile.eval(lo, 2);
        d2hi = profile.eval(hi, 2);
    }
    if (d2lo >= 0.0 || d2hi <= 0.0)
        throw ConvergenceFailure("riemann: could not bracket the slope minimum");
    for (int it = 0; it < 300 && (hi - lo) > 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi));
         ++it) {
        const double mid = 0.5 * (lo + hi);
        if (profile.eval(mid, 2) < 0.0) lo = mid;
        else hi = mid;
    }

    BreakingPoint bp;
    bp.zeta_b = 0.5 * (lo + hi);
    const double f1 = profile.eval(bp.zeta_b, 1);
    if (f1 >= 0.0) throw ConvergenceFailure("riemann: refined slope minimum is not negative");
    bp.t_b = -1.0 / f1;
    bp.v_b = profile.eval(bp.zeta_b, 0);
    bp.x_b = bp.zeta_b + bp.t_b * bp.v_b;
    bp.f3 = profile.eval(bp.zeta_b, 3);
    bp.degeneracy = 1;
    if (profile.max_derivative_order() >= 5) {
        const double f5 = profile.eval(bp.zeta_b, 5);
        const double threshold = 1e-8 * std::max(1.0, std::abs(f5));
        if (std::abs(bp.f3) <= threshold) {
            if (f5 <= 0.0)
                throw ConvergenceFailure("riemann: slope minimum flat beyond quintic order");
            bp.degeneracy = 2;
        } else if (bp.f3 < 0.0) {
            throw ConvergenceFailure("riemann: negative third derivative at a slope minimum");
        }
    }
    return bp;
}

ParametricCurve sample_parametric(const InitialProfile& profile, double t,
                                  std::span<const double> zetas) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("riemann: time must be nonnegative");
    ParametricCurve curve;
    curve.t = t;
    curve.zeta.assign(zetas.begin(), zetas.end());
    curve.x.resize(zetas.size());
    curve.v.resize(zetas.size());
    for (std::size_t i = 0; i < zetas.size(); ++i) {
        curve.v[i] = profile.eval(zetas[i], 0);
        curve.x[i] = zetas[i] + t * curve.v[i];
    }
    for (std::size_t i = 0; i + 1 < zetas.size(); ++i) {
        if (zetas[i + 1] > zetas[i] && curve.x[i + 1] < curve.x[i]) {
            curve.folded = true;
            break;
        }
    }
    return curve;
}

double eval_implicit(const InitialProfile& profile, double x, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("riemann: time must be nonnegative");
    double t_b;
    try {
        t_b = find_breaking(profile).t_b;
    } catch (const NoBreaking&) {
        t_b = std::numeric_limits<double>::infinity();
    } catch (const UnsupportedDerivativeOrder&) {
        t_b = breaking_time_estimate(profile);
    }
    if (t > t_b * (1.0 + 1e-12))
        throw PostBreaking("riemann: single-valued evaluation past the breaking time");
    const SlopeScan s = scan_profile(profile);
    return solve_characteristic(profile, x, t, s.f_min, s.f_max);
}

double eval_implicit(const InitialProfile& profile, double x, double t,
                     const BreakingPoint& bp) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("riemann: time must be nonnegative");
    if (t > bp.t_b * (1.0 + 1e-12))
        throw PostBreaking("riemann: single-valued evaluation past the breaking time");
    const SlopeScan s = scan_profile(profile);
    return solve_characteristic(profile, x, t, s.f_min, s.f_max);
}

WaveField resample_uniform(const InitialProfile& profile, double t, const GridSpec& grid) {
    grid.validate(false);
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("riemann: time must be nonnegative");

    bool have_bp = false;
    BreakingPoint bp;
    try {
        bp = find_breaking(profile);
        have_bp = true;
    } catch (const NoBreaking&) {
    } catch (const UnsupportedDerivativeOrder&) {
        const double t_est = breaking_time_estimate(profile);
        if (t > t_est * (1.0 + 1e-12))
            throw PostBreaking("riemann: resample requested past the breaking time");
    }
    if (have_bp && t > bp.t_b * (1.0 + 1e-12))
        throw PostBreaking("riemann: resample requested past the breaking time");

    const SlopeScan scan = scan_profile(profile);
    const double grid_hi = grid.x_lo + grid.length;
    const double pad = 1e-3 * (1.0 + t * (scan.f_max - scan.f_min));
    double zeta_lo = grid.x_lo - std::max(0.0, t * scan.f_max) - pad;
    double zeta_hi = grid_hi - std::min(0.0, t * scan.f_min) + pad;
    if (!profile.periodic()) {
        zeta_lo = std::max(zeta_lo, profile.x_lo());
        zeta_hi = std::min(zeta_hi, profile.x_hi());
    }

    const std::size_t n_base = std::max<std::size_t>(std::size_t{1} << 20, 8 * grid.n_points);
    std::vector<double> zeta;
    zeta.reserve(n_base + 256);
    const double h0 = (zeta_hi - zeta_lo) / static_cast<double>(n_base);
    for (std::size_t i = 0; i <= n_base; ++i)
        zeta.push_back(zeta_lo + h0 * static_cast<double>(i));

    // At the breaking time the map is cubically flat at zeta_b; stack
    // geometrically shrinking offsets so the front is resolved to 1e-9.
    if (have_bp && std::abs(t - bp.t_b) <= 1e-9 * std::max(1.0, bp.t_b) &&
        bp.zeta_b > zeta_lo && bp.zeta_b < zeta_hi) {
        zeta.push_back(bp.zeta_b);
        for (double d = h0; d > 2.5e-10; d *= 0.8) {
            if (bp.zeta_b - d > zeta_lo) zeta.push_back(bp.zeta_b - d);
            if (bp.zeta_b + d < zeta_hi) zeta.push_back(bp.zeta_b + d);
        }
        std::sort(zeta.begin(), zeta.end());
        zeta.erase(std::unique(zeta.begin(), zeta.end()), zeta.end());
    }

    std::vector<double> xs(zeta.size()), vs(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        vs[i] = profile.eval(zeta[i], 0);
        xs[i] = zeta[i] + t * vs[i];
    }
    // The map is nondecreasing for t <= t_b; clamp away rounding jitter so
    // binary search stays valid.
    for (std::size_t i = 1; i < xs.size(); ++i) xs[i] = std::max(xs[i], xs[i - 1]);

    if (grid.x_lo < xs.front() || grid_hi > xs.back())
        throw DomainError("riemann: grid extends beyond the evolved profile domain");

    WaveField field;
    field.grid = grid;
    field.t = t;
    field.values.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double xq = grid.x(i);
        auto it = std::upper_bound(xs.begin(), xs.end(), xq);
        std::size_t j = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
        if (j + 1 >= xs.size()) j = xs.size() - 2;
        const double gap = xs[j + 1] - xs[j];
        if (gap <= 0.0) {
            field.values[i] = vs[j];
        } else {
            const double w = (xq - xs[j]) / gap;
            field.values[i] = vs[j] + w * (vs[j + 1] - vs[j]);
        }
    }
    return field;
}

ExponentFit local_exponent(const InitialProfile& profile, double r_min, double r_max,
                           int n_samples) {
    return local_exponent(profile, find_breaking(profile), r_min, r_max, n_samples);
}

ExponentFit local_exponent(const InitialProfile& profile, const BreakingPoint& bp,
                           double r_min, double r_max, int n_samples) {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("riemann: window must satisfy 0 < r_min < r_max");
    if (n_samples < 16) throw DomainError("riemann: exponent fit needs at least 16 samples");

    const double t_b = bp.t_b;
    auto offset = [&](double eta) {
        return eta + t_b * (profile.eval(bp.zeta_b + eta, 0) - bp.v_b);
    };
    const double eta_max = profile.periodic()
                               ? profile.length()
                               : profile.x_hi() - bp.zeta_b;

    std::vector<double> log_r, log_d;
    log_r.reserve(n_samples);
    log_d.reserve(n_samples);
    const double ratio = r_max / r_min;
    for (int k = 0; k < n_samples; ++k) {
        const double frac = (n_samples == 1) ? 0.0 : static_cast<double>(k) / (n_samples - 1);
        const double r = r_min * std::pow(ratio, frac);
        // Bracket the inverse of the monotone offset map and bisect.
        double guess;
        if (bp.degeneracy == 2) {
            const double f5 = profile.eval(bp.zeta_b, 5);
            guess = std::pow(120.0 * r / (t_b * f5), 0.2);
        } else {
            guess = std::cbrt(6.0 * r / (t_b * std::max(bp.f3, 1e-300)));
        }
        double hi = std::min(1.5 * guess, eta_max);
        int grow = 0;
        while (offset(hi) < r) {
            hi = std::min(2.0 * hi, eta_max);
            if (++grow > 100 || (hi >= eta_max && offset(hi) < r))
                throw WindowTooWide("riemann: window extends past the profile domain");
        }
        double lo = 0.0;
        for (int it = 0; it < kMaxIterations && (hi - lo) > 1e-15 * hi + 1e-18; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (offset(mid) < r) lo = mid;
            else hi = mid;
        }
        const double eta = 0.5 * (lo + hi);
        const double d = std::abs(profile.eval(bp.zeta_b + eta, 0) - bp.v_b);
        if (d > 0.0) {
            log_r.push_back(std::log(r));
            log_d.push_back(std::log(d));
        }
    }
    if (log_r.size() < 8)
        throw ConvergenceFailure("riemann: too few valid samples for the exponent fit");

    const detail::LineFit line = detail::fit_line(log_r, log_d);
    ExponentFit fit;
    fit.exponent = line.slope;
    fit.amplitude = std::exp(line.intercept);
    fit.r_min = r_min;
    fit.r_max = r_max;
    fit.residual = line.residual_rms;
    fit.n_samples = static_cast<int>(log_r.size());
    if (fit.residual > 0.1)
        throw WindowTooWide("riemann: power-law fit residual exceeds 0.1, window too wide");
    return fit;
}

ExponentFit field_local_exponent(const WaveField& field, double x_center, double v_center,
                                 double r_min, double r_max, int n_samples) {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw DomainError("riemann: window must satisfy 0 < r_min < r_max");
    if (n_samples < 16) throw DomainError("riemann: exponent fit needs at least 16 samples");
    const double dx = field.grid.dx();
    std::vector<double> log_r, log_d;
    std::size_t last_idx = static_cast<std::size_t>(-1);
    const double ratio = r_max / r_min;
    for (int k = 0; k < n_samples; ++k) {
        const double frac = (n_samples == 1) ? 0.0 : static_cast<double>(k) / (n_samples - 1);
        const double r = r_min * std::pow(ratio, frac);
        const double target = x_center + r;
        const double pos = (target - field.grid.x_lo) / dx;
        if (pos < 0.0 || pos > static_cast<double>(field.grid.n_points - 1)) continue;
        const std::size_t idx = static_cast<std::size_t>(std::llround(pos));
        if (idx == last_idx) continue;
        last_idx = idx;
        const double actual_r = field.grid.x(idx) - x_center;
        if (actual_r <= 0.0) continue;
        const double d = std::abs(field.values[idx] - v_center);
        if (d <= 0.0) continue;
        log_r.push_back(std::log(actual_r));
        log_d.push_back(std::log(d));
    }
    if (log_r.size() < 8)
        throw InsufficientBins("riemann: too few distinct grid samples in the window");
    const detail::LineFit line = detail::fit_line(log_r, log_d);
    ExponentFit fit;
    fit.exponent = line.slope;
    fit.amplitude = std::exp(line.intercept);
    fit.r_min = r_min;
    fit.r_max = r_max;
    fit.residual = line.residual_rms;
    fit.n_samples = static_cast<int>(log_r.size());
    if (fit.residual > 0.1)
        throw WindowTooWide("riemann: power-law fit residual exceeds 0.1, window too wide");
    return fit;
}

WaveField transform_general_speed(const WaveField& field, const SpeedMap& speed) {
    if (!speed.value || !speed.derivative)
        throw DomainError("riemann: speed map needs value and derivative callables");
    WaveField out;
    out.grid = field.grid;
    out.t = field.t;
    out.values.resize(field.values.size());
    if (field.values.empty()) return out;

    double u_prev = field.values.front();
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const double v = field.values[i];
        const double tol = 1e-13 * std::max(1.0, std::abs(v));
        // Expand a bracket around the previous solution, then safeguarded Newton.
        double lo = u_prev, hi = u_prev, step = std::max(1.0, std::abs(v));
        int guard = 0;
        while (speed.value(lo) > v) {
            hi = lo;
            lo -= step;
            step *= 2.0;
            if (++guard > kMaxIterations)
                throw NotInvertible("riemann: speed map could not be bracketed for a sampled value");
        }
        step = std::max(1.0, std::abs(v));
        while (speed.value(hi) < v) {
            lo = std::max(lo, hi);
            hi += step;
            step *= 2.0;
            if (++guard > kMaxIterations)
                throw NotInvertible("riemann: speed map could not be bracketed for a sampled value");
        }
        double u = 0.5 * (lo + hi);
        double res = speed.value(u) - v;
        bool converged = false;
        for (int it = 0; it < kMaxIterations; ++it) {
            if (std::abs(res) <= tol) {
                converged = true;
                break;
            }
            if (res > 0.0) hi = u;
            else lo = u;
            const double dv = speed.derivative(u);
            if (dv <= 0.0)
                throw NotInvertible("riemann: speed map derivative not positive");
            double unext = u - res / dv;
            if (!(unext > lo && unext < hi)) unext = 0.5 * (lo + hi);
            u = unext;
            res = speed.value(u) - v;
        }
        if (!converged && std::abs(res) > tol)
            throw ConvergenceFailure("riemann: speed map inversion did not converge");
        out.values[i] = u;
        u_prev = u;
    }

    // The map must be strictly increasing on the whole sampled range, not just
    // at the solutions.
    const auto [umin_it, umax_it] = std::minmax_element(out.values.begin(), out.values.end());
    const double umin = *umin_it, umax = *umax_it;
    const int n_check = 2048;
    for (int i = 0; i <= n_check; ++i) {
        const double u = umin + (umax - umin) * static_cast<double>(i) / n_check;
        if (speed.derivative(u) <= 0.0)
            throw NotInvertible("riemann: speed map derivative not positive on the value range");
    }
    return out;
}

} // namespace rspec
