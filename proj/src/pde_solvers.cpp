#include "rspec/pde_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>

#include "rspec/fft.hpp"

namespace rspec {

namespace {

using cvec = std::vector<std::complex<double>>;

struct SpectralOps {
    std::size_t n = 0;
    std::vector<double> k;    // signed physical wavenumbers
    std::vector<char> keep;   // 2/3-rule dealiasing mask

    SpectralOps(std::size_t n_points, double length) : n(n_points), k(n_points), keep(n_points) {
        const double dk = 2.0 * std::numbers::pi / length;
        const long third = static_cast<long>(n_points / 3);
        for (std::size_t j = 0; j < n_points; ++j) {
            const long m = (j <= n_points / 2) ? static_cast<long>(j)
                                               : static_cast<long>(j) - static_cast<long>(n_points);
            k[j] = dk * static_cast<double>(m);
            keep[j] = std::labs(m) <= third ? 1 : 0;
        }
    }
};

void apply_mask(const SpectralOps& ops, cvec& v) {
    for (std::size_t j = 0; j < ops.n; ++j)
        if (!ops.keep[j]) v[j] = 0.0;
}

void enforce_real_symmetry(cvec& v) {
    const std::size_t n = v.size();
    v[0] = std::complex<double>(v[0].real(), 0.0);
    v[n / 2] = std::complex<double>(v[n / 2].real(), 0.0);
    for (std::size_t j = 1; j < n / 2; ++j) {
        const std::complex<double> avg = 0.5 * (v[j] + std::conj(v[n - j]));
        v[j] = avg;
        v[n - j] = std::conj(avg);
    }
}

// Half-step integrating factor exp(L dt/2) for the model's linear part.
cvec linear_half_factor(const SolverState& s, const SpectralOps& ops, double dt) {
    cvec e(ops.n);
    for (std::size_t j = 0; j < ops.n; ++j) {
        const double k = ops.k[j];
        switch (s.model) {
        case Model::burgers:
            e[j] = std::exp(-s.params.nu * k * k * dt * 0.5);
            break;
        case Model::kdv:
            e[j] = std::exp(std::complex<double>(0.0, k * k * k * dt * 0.5));
            break;
        case Model::ostrovsky:
            e[j] = (j == 0) ? 1.0
                            : std::exp(std::complex<double>(0.0, -s.params.gamma * dt * 0.5 / k));
            break;
        }
    }
    return e;
}

// Spectral nonlinear term from physical samples: the models share the
// quadratic flux -c (u^2)_x with c = 1/2 (burgers, ostrovsky) or 3 (kdv).
cvec nonlinear_from_u(const SolverState& s, const SpectralOps& ops,
                      std::vector<double>& u_sq, const std::vector<double>& u) {
    for (std::size_t i = 0; i < u.size(); ++i) u_sq[i] = u[i] * u[i];
    cvec w = fft_forward_real(u_sq);
    const double c = (s.model == Model::kdv) ? 3.0 : 0.5;
    for (std::size_t j = 0; j < ops.n; ++j) {
        if (!ops.keep[j]) {
            w[j] = 0.0;
            continue;
        }
        w[j] *= std::complex<double>(0.0, -c * ops.k[j]);
    }
    if (s.model == Model::ostrovsky) w[0] = 0.0;
    return w;
}

cvec nonlinear(const SolverState& s, const SpectralOps& ops, std::vector<double>& u_sq,
               const cvec& u_hat) {
    const std::vector<double> u = fft_inverse_real(u_hat);
    return nonlinear_from_u(s, ops, u_sq, u);
}

void check_blowup(const SolverState& s, const std::vector<double>& u) {
    double peak = 0.0;
    for (double v : u) peak = std::max(peak, std::abs(v));
    if (!std::isfinite(peak) || (s.initial_max > 0.0 && peak > 1e3 * s.initial_max)) {
        std::ostringstream msg;
        msg << "pde: amplitude blow-up at t = " << s.t;
        throw BlowUp(msg.str());
    }
}

void step_inplace(SolverState& s, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("pde: step size must be positive");
    const std::size_t n = s.grid.n_points;
    const SpectralOps ops(n, s.grid.length);
    std::vector<double> u_sq(n);

    const cvec e = linear_half_factor(s, ops, dt);
    cvec e2(n);
    for (std::size_t j = 0; j < n; ++j) e2[j] = e[j] * e[j];

    const std::vector<double> u0 = fft_inverse_real(s.u_hat);
    check_blowup(s, u0);

    const cvec a = nonlinear_from_u(s, ops, u_sq, u0);

    cvec tmp(n);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = e[j] * (s.u_hat[j] + 0.5 * dt * a[j]);
    const cvec b = nonlinear(s, ops, u_sq, tmp);

    for (std::size_t j = 0; j < n; ++j) tmp[j] = e[j] * s.u_hat[j] + 0.5 * dt * b[j];
    const cvec c = nonlinear(s, ops, u_sq, tmp);

    for (std::size_t j = 0; j < n; ++j) tmp[j] = e2[j] * s.u_hat[j] + dt * e[j] * c[j];
    const cvec d = nonlinear(s, ops, u_sq, tmp);

    for (std::size_t j = 0; j < n; ++j) {
        s.u_hat[j] = e2[j] * s.u_hat[j] +
                     (dt / 6.0) * (e2[j] * a[j] + 2.0 * e[j] * (b[j] + c[j]) + d[j]);
    }
    apply_mask(ops, s.u_hat);
    if (s.model == Model::ostrovsky) {
        s.u_hat[0] = 0.0;
        if (std::abs(s.u_hat[0]) > 1e-10)
            throw NonZeroMean("pde: zero-mean projection drifted");
    }
    s.t += dt;
}

SolverState stepped_copy(const SolverState& state, Model expected, double dt) {
    if (state.model != expected)
        throw DomainError("pde: stepper called with a state of another model");
    SolverState s = state;
    step_inplace(s, dt);
    return s;
}

void validate_model_setup(Model model, const ModelParams& params, const GridSpec& grid) {
    grid.validate(true);
    if (!grid.periodic) throw DomainError("pde: solvers need a periodic grid");
    if (model == Model::burgers && !(params.nu > 0.0))
        throw DomainError("pde: viscosity must be positive");
    if (model == Model::ostrovsky && !(params.gamma > 0.0))
        throw DomainError("pde: rotation parameter must be positive");
}

SolverState init_from_samples(Model model, const ModelParams& params, const GridSpec& grid,
                              const std::vector<double>& u) {
    double peak = 0.0, mean = 0.0;
    for (double v : u) {
        peak = std::max(peak, std::abs(v));
        mean += v;
    }
    mean /= static_cast<double>(u.size());
    if (model == Model::ostrovsky && peak > 0.0 && std::abs(mean) > 1e-12 * peak)
        throw NonZeroMean("pde: rotation model requires a zero-mean profile");

    SolverState s;
    s.model = model;
    s.params = params;
    s.grid = grid;
    s.t = 0.0;
    s.initial_max = peak;
    s.u_hat = fft_forward_real(u);
    enforce_real_symmetry(s.u_hat);
    const SpectralOps ops(grid.n_points, grid.length);
    apply_mask(ops, s.u_hat);
    if (model == Model::ostrovsky) s.u_hat[0] = 0.0;
    return s;
}

} // namespace

SolverState init_state(Model model, const ModelParams& params, const GridSpec& grid,
                       const InitialProfile& profile) {
    validate_model_setup(model, params, grid);
    if (!profile.periodic() ||
        std::abs(profile.length() - grid.length) > 1e-9 * grid.length)
        throw DomainError("pde: profile must be periodic with the grid period");

    std::vector<double> u(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) u[i] = profile.eval(grid.x(i), 0);
    return init_from_samples(model, params, grid, u);
}

SolverState init_state(Model model, const ModelParams& params, const GridSpec& grid,
                       const std::vector<double>& samples) {
    validate_model_setup(model, params, grid);
    if (samples.size() != grid.n_points)
        throw DomainError("pde: sample count does not match the grid");
    return init_from_samples(model, params, grid, samples);
}

SolverState step_burgers(const SolverState& state, double dt) {
    return stepped_copy(state, Model::burgers, dt);
}

SolverState step_kdv(const SolverState& state, double dt) {
    return stepped_copy(state, Model::kdv, dt);
}

SolverState step_ostrovsky(const SolverState& state, double dt) {
    return stepped_copy(state, Model::ostrovsky, dt);
}

double stable_dt(const SolverState& state) {
    const std::vector<double> u = fft_inverse_real(state.u_hat);
    double peak = 0.0;
    for (double v : u) peak = std::max(peak, std::abs(v));
    const double speed = (state.model == Model::kdv) ? 6.0 * peak : peak;
    const double k_active = (2.0 * std::numbers::pi / state.grid.length) *
                            static_cast<double>(state.grid.n_points / 3);
    if (!(speed > 0.0) || !(k_active > 0.0)) return 1e6;
    return 0.5 / (k_active * speed);
}

std::vector<WaveField> integrate(const SolverState& state, double t_end,
                                 std::vector<double> output_times, double dt_override) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t_end));
    if (t_end < state.t - tol) throw DomainError("pde: end time precedes the state time");
    if (output_times.empty()) output_times.push_back(t_end);
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        if (output_times[i] < state.t - tol || output_times[i] > t_end + tol)
            throw DomainError("pde: output times must lie between the state time and t_end");
        if (i > 0 && output_times[i] < output_times[i - 1])
            throw DomainError("pde: output times must be sorted");
    }

    SolverState s = state;
    const double dt = (dt_override > 0.0) ? dt_override : stable_dt(s);
    std::vector<WaveField> snapshots;
    snapshots.reserve(output_times.size());
    for (double target : output_times) {
        while (s.t < target - 1e-12 * std::max(1.0, std::abs(target))) {
            step_inplace(s, std::min(dt, target - s.t));
        }
        s.t = target;
        snapshots.push_back(to_field(s));
    }
    return snapshots;
}

WaveField to_field(const SolverState& state) {
    WaveField f;
    f.grid = state.grid;
    f.t = state.t;
    f.values = fft_inverse_real(state.u_hat);
    return f;
}

double mass(const SolverState& state) {
    return state.u_hat[0].real() * state.grid.length / static_cast<double>(state.grid.n_points);
}

double momentum(const SolverState& state) {
    double sum = 0.0;
    for (const auto& c : state.u_hat) sum += std::norm(c);
    const double n = static_cast<double>(state.grid.n_points);
    return sum * state.grid.length / (n * n);
}

} // namespace rspec
