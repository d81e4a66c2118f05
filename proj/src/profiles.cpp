#include "rspec/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace rspec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// exp(-x^4) is below 1e-18 past this point, so integrals are truncated here.
constexpr double kQuarticCut = 2.6;

// 16-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence.
struct GaussRule {
    std::array<double, 16> node{};
    std::array<double, 16> weight{};
};

const GaussRule& gauss16() {
    static const GaussRule rule = [] {
        GaussRule r;
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15) break;
            }
            r.node[i] = x;
            r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

// C5 cutoff: 1 for |u| <= 1/2, 0 for |u| >= 1, in between one minus the
// fifth-order smoothstep (degree-11 polynomial, five vanishing derivatives at
// both junctions). order <= 4 derivatives are continuous everywhere.
double cutoff_c5(double u, int order) {
    const double a = std::abs(u);
    if (a <= 0.5) return order == 0 ? 1.0 : 0.0;
    if (a >= 1.0) return 0.0;
    const double t = 2.0 * a - 1.0; // in (0, 1)
    static const double c[6] = {462.0, -1980.0, 3465.0, -3080.0, 1386.0, -252.0};
    // s(t) = sum c[j] t^(6+j); differentiate term by term.
    double val = 0.0;
    for (int j = 0; j < 6; ++j) {
        double coef = c[j];
        int p = 6 + j;
        for (int d = 0; d < order; ++d) {
            coef *= p;
            --p;
        }
        if (p >= 0) val += coef * std::pow(t, p);
    }
    double chi = (order == 0) ? 1.0 - val : -val;
    // chain rule for t = 2|u| - 1
    double scale = 1.0;
    for (int d = 0; d < order; ++d) scale *= 2.0;
    if (order % 2 == 1 && u < 0.0) scale = -scale;
    return chi * scale;
}

// P_k with d^k/dx^k exp(-x^4) = P_k(x) exp(-x^4); P_{k+1} = P_k' - 4 x^3 P_k.
double quartic_poly(int k, double x) {
    const double x2 = x * x, x3 = x2 * x, x4 = x2 * x2;
    switch (k) {
        case 0: return 1.0;
        case 1: return -4.0 * x3;
        case 2: return -12.0 * x2 + 16.0 * x3 * x3;
        case 3: return -24.0 * x + 168.0 * x4 * x - 64.0 * x4 * x4 * x;
        case 4:
            return -24.0 + 720.0 * x4 - 1056.0 * x4 * x4 + 256.0 * x4 * x4 * x4;
        default: throw Error("profiles: quartic derivative order out of range");
    }
}

double binom(int n, int k) {
    static const double table[5][5] = {{1, 0, 0, 0, 0},
                                       {1, 1, 0, 0, 0},
                                       {1, 2, 1, 0, 0},
                                       {1, 3, 3, 1, 0},
                                       {1, 4, 6, 4, 1}};
    return table[n][k];
}

} // namespace

InitialProfile InitialProfile::gaussian(double amplitude, double width) {
    if (!(amplitude > 0.0)) throw DomainError("profiles: gaussian amplitude must be positive");
    if (!(width > 0.0)) throw DomainError("profiles: gaussian width must be positive");
    InitialProfile p;
    p.kind_ = ProfileKind::gaussian;
    p.amplitude_ = amplitude;
    p.width_ = width;
    // Half-width so the periodic images at the box edge stay below 1e-12.
    const double needed = width * std::sqrt(std::log(amplitude * 1e12)) + width;
    const double half = std::max(20.0, needed);
    p.x_lo_ = -half;
    p.x_hi_ = half;
    p.periodic_ = true;
    p.max_order_ = 5;
    return p;
}

InitialProfile InitialProfile::sine(double amplitude, int wavenumber) {
    if (!(amplitude > 0.0)) throw DomainError("profiles: sine amplitude must be positive");
    if (wavenumber < 1) throw DomainError("profiles: sine wavenumber must be a positive integer");
    InitialProfile p;
    p.kind_ = ProfileKind::sine;
    p.amplitude_ = amplitude;
    p.wavenumber_ = wavenumber;
    p.x_lo_ = 0.0;
    p.x_hi_ = 2.0 * kPi;
    p.periodic_ = true;
    p.max_order_ = 5;
    return p;
}

InitialProfile InitialProfile::quintic_degenerate(double cutoff_width) {
    if (!(cutoff_width > 0.0)) throw DomainError("profiles: cutoff width must be positive");
    InitialProfile p;
    p.kind_ = ProfileKind::quintic_degenerate;
    p.width_ = cutoff_width;
    p.amplitude_ = 1.0;
    p.x_lo_ = -2.0 * cutoff_width;
    p.x_hi_ = 2.0 * cutoff_width;
    p.periodic_ = false;
    p.max_order_ = 5;
    return p;
}

InitialProfile InitialProfile::tabulated(std::vector<double> xs, std::vector<double> fs) {
    if (xs.size() != fs.size()) throw DomainError("profiles: tabulated arrays differ in length");
    if (xs.size() < 4) throw DomainError("profiles: tabulated needs at least 4 samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw DomainError("profiles: tabulated abscissae must be strictly increasing");
    InitialProfile p;
    p.kind_ = ProfileKind::tabulated;
    p.x_lo_ = xs.front();
    p.x_hi_ = xs.back();
    p.periodic_ = false;
    p.max_order_ = 1;

    // Fritsch-Carlson slopes: harmonic-mean weighting inside monotone runs,
    // zero at local extrema, shape-preserving three-point ends.
    const std::size_t n = xs.size();
    std::vector<double> h(n - 1), d(n - 1), m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = xs[i + 1] - xs[i];
        d[i] = (fs[i + 1] - fs[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) s = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) s = 3.0 * d0;
        return s;
    };
    m[0] = end_slope(h[0], h[1], d[0], d[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);

    p.xs_ = std::move(xs);
    p.fs_ = std::move(fs);
    p.ms_ = std::move(m);
    return p;
}

double InitialProfile::fold(double x) const {
    if (!periodic_) {
        const double slack = 1e-9 * (1.0 + std::abs(x_hi_) + std::abs(x_lo_));
        if (x < x_lo_ - slack || x > x_hi_ + slack)
            throw DomainError("profiles: argument outside non-periodic domain");
        return std::clamp(x, x_lo_, x_hi_);
    }
    const double len = length();
    double y = std::fmod(x - x_lo_, len);
    if (y < 0.0) y += len;
    return x_lo_ + y;
}

double InitialProfile::eval(double x, int order) const {
    if (!std::isfinite(x)) throw DomainError("profiles: argument must be finite");
    if (order < 0) throw DomainError("profiles: derivative order must be nonnegative");
    if (order > max_order_)
        throw UnsupportedDerivativeOrder("profiles: derivative order " + std::to_string(order) +
                                         " unsupported for this kind");
    const double y = fold(x);
    switch (kind_) {
        case ProfileKind::gaussian: return eval_gaussian(y, order);
        case ProfileKind::sine: return eval_sine(y, order);
        case ProfileKind::quintic_degenerate: return eval_quintic(y, order);
        case ProfileKind::tabulated: return eval_tabulated(y, order);
    }
    throw Error("profiles: unreachable kind");
}

double InitialProfile::eval_gaussian(double x, int order) const {
    // d^n/du^n exp(-u^2) = (-1)^n H_n(u) exp(-u^2) with Hermite H_n.
    const double u = x / width_;
    const double e = std::exp(-u * u);
    double hermite;
    switch (order) {
        case 0: hermite = 1.0; break;
        case 1: hermite = 2.0 * u; break;
        case 2: hermite = 4.0 * u * u - 2.0; break;
        case 3: hermite = u * (8.0 * u * u - 12.0); break;
        case 4: hermite = (16.0 * u * u - 48.0) * u * u + 12.0; break;
        case 5: hermite = u * ((32.0 * u * u - 160.0) * u * u + 120.0); break;
        default: throw UnsupportedDerivativeOrder("profiles: gaussian order out of range");
    }
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return amplitude_ * sign * hermite * e / std::pow(width_, order);
}

double InitialProfile::eval_sine(double x, int order) const {
    const double m = static_cast<double>(wavenumber_);
    const double arg = m * x;
    const double scale = amplitude_ * std::pow(m, order);
    switch (order % 4) {
        case 0: return scale * std::sin(arg);
        case 1: return scale * std::cos(arg);
        case 2: return -scale * std::sin(arg);
        default: return -scale * std::cos(arg);
    }
}

double InitialProfile::eval_quintic(double x, int order) const {
    const double L = width_;
    if (order == 0) {
        // F(x) = integral_x^inf exp(-s^4) cutoff(s/L) ds, truncated where the
        // integrand is below 1e-18. Panels split at the cutoff junctions so
        // every panel integrand is analytic.
        const double hi = std::min(L, kQuarticCut);
        double lo = std::max(x, -std::min(L, kQuarticCut));
        if (lo >= hi) return 0.0;
        std::vector<double> cuts = {lo, hi};
        for (double c : {-L, -L / 2.0, L / 2.0, L}) {
            if (c > lo && c < hi) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        const GaussRule& g = gauss16();
        double total = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double a = cuts[s], b = cuts[s + 1];
            const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 0.2)));
            const double h = (b - a) / panels;
            for (int p = 0; p < panels; ++p) {
                const double mid = a + h * (p + 0.5);
                const double half = 0.5 * h;
                double acc = 0.0;
                for (int q = 0; q < 16; ++q) {
                    const double sx = mid + half * g.node[q];
                    acc += g.weight[q] * std::exp(-sx * sx * sx * sx) * cutoff_c5(sx / L, 0);
                }
                total += acc * half;
            }
        }
        return total;
    }
    // F^(1+k) = sum_j C(k,j) * d^(k-j)[-exp(-s^4)] * d^j[cutoff(s/L)].
    const int k = order - 1;
    double sum = 0.0;
    const double e = std::exp(-x * x * x * x);
    for (int j = 0; j <= k; ++j) {
        const double chi_j = cutoff_c5(x / L, j) / std::pow(L, j);
        if (chi_j == 0.0) continue;
        sum += binom(k, j) * (-quartic_poly(k - j, x) * e) * chi_j;
    }
    return sum;
}

double InitialProfile::eval_tabulated(double x, int order) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (i + 1 >= xs_.size()) i = xs_.size() - 2;
    const double h = xs_[i + 1] - xs_[i];
    const double s = (x - xs_[i]) / h;
    const double f0 = fs_[i], f1 = fs_[i + 1];
    const double m0 = ms_[i] * h, m1 = ms_[i + 1] * h;
    if (order == 0) {
        const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        const double h10 = s * (1.0 - s) * (1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        return h00 * f0 + h10 * m0 + h01 * f1 + h11 * m1;
    }
    const double d00 = 6.0 * s * (s - 1.0);
    const double d10 = (1.0 - s) * (1.0 - 3.0 * s);
    const double d01 = -6.0 * s * (s - 1.0);
    const double d11 = s * (3.0 * s - 2.0);
    return (d00 * f0 + d10 * m0 + d01 * f1 + d11 * m1) / h;
}

} // namespace rspec
