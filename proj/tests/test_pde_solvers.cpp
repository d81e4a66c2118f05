#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "rspec/errors.hpp"
#include "rspec/pde_solvers.hpp"
#include "rspec/profiles.hpp"
#include "rspec/spectra.hpp"

using namespace rspec;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sine_samples(const GridSpec& grid, double amp, int wavenumber,
                                 double phase = 0.0, double offset = 0.0) {
    std::vector<double> u(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        u[i] = offset + amp * std::sin(wavenumber * grid.x(i) + phase);
    return u;
}

std::vector<double> soliton_samples(const GridSpec& grid, double kappa, double x0) {
    std::vector<double> u(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double s = 1.0 / std::cosh(kappa * (grid.x(i) - x0));
        u[i] = 2.0 * kappa * kappa * s * s;
    }
    return u;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double field_mass(const WaveField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.dx();
}

double field_momentum(const WaveField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return s * f.grid.dx();
}

} // namespace

TEST_CASE("initialization reproduces a sine exactly and computes its invariants") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const auto samples = sine_samples(grid, 0.5, 1);
    const SolverState state = init_state(Model::burgers, {}, grid, samples);

    CHECK(max_abs_diff(to_field(state).values, samples) < 1e-13);
    CHECK(std::abs(mass(state)) < 1e-14);
    CHECK(momentum(state) == doctest::Approx(kPi * 0.25).epsilon(1e-12));

    const SpectrumResult spec = amplitude_spectrum(to_field(state));
    CHECK(spec.amplitude[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(spec.amplitude[1] == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("initialization accepts a matching periodic profile and rejects a mismatch") {
    GridSpec wide{1024, -20.0, 40.0, true};
    const auto gauss = InitialProfile::gaussian(1.0, 1.0);
    const SolverState state = init_state(Model::burgers, {}, wide, gauss);
    const WaveField f = to_field(state);
    double worst = 0.0;
    for (std::size_t i = 0; i < wide.n_points; i += 7)
        worst = std::max(worst, std::abs(f.values[i] - gauss.eval(wide.x(i))));
    CHECK(worst < 1e-12);

    GridSpec tiny{256, 0.0, 2.0 * kPi, true};
    CHECK_THROWS_AS(init_state(Model::burgers, {}, tiny, gauss), DomainError);
}

TEST_CASE("rotation model requires zero mean and keeps it") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    CHECK_THROWS_AS(init_state(Model::ostrovsky, {}, grid, sine_samples(grid, 1.0, 1, 0.0, 0.1)),
                    NonZeroMean);

    SolverState state = init_state(Model::ostrovsky, {}, grid, sine_samples(grid, 1.0, 1));
    for (int i = 0; i < 5; ++i) state = step_ostrovsky(state, 1e-3);
    CHECK(std::abs(state.u_hat[0]) == 0.0);
    CHECK(std::abs(mass(state)) == 0.0);
}

TEST_CASE("linear regimes are integrated exactly by the integrating factor") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};

    SUBCASE("diffusive decay") {
        const double eps = 1e-8, nu = 0.1, T = 0.1;
        ModelParams params;
        params.nu = nu;
        const SolverState s0 = init_state(Model::burgers, params, grid, sine_samples(grid, eps, 1));
        const WaveField f = integrate(s0, T, {T}).back();
        const auto expected = sine_samples(grid, eps * std::exp(-nu * T), 1);
        CHECK(max_abs_diff(f.values, expected) / eps < 1e-8);
    }

    SUBCASE("dispersive phase advance") {
        const double eps = 1e-10, T = 1.0;
        // cos(x + t) solves the linearized equation: omega = -k^3 = -1.
        const SolverState s0 =
            init_state(Model::kdv, {}, grid, sine_samples(grid, eps, 1, kPi / 2.0));
        const WaveField f = integrate(s0, T, {T}).back();
        const auto expected = sine_samples(grid, eps, 1, kPi / 2.0 + T);
        CHECK(max_abs_diff(f.values, expected) / eps < 1e-8);
    }

    SUBCASE("rotational phase retreat") {
        const double eps = 1e-10, gamma = 1.0, T = 1.0;
        ModelParams params;
        params.gamma = gamma;
        // sin(k x - (gamma/k) t) for k = 2.
        const SolverState s0 =
            init_state(Model::ostrovsky, params, grid, sine_samples(grid, eps, 2));
        const WaveField f = integrate(s0, T, {T}).back();
        const auto expected = sine_samples(grid, eps, 2, -gamma * T / 2.0);
        CHECK(max_abs_diff(f.values, expected) / eps < 1e-8);
    }
}

TEST_CASE("advection preserves the mean") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const SolverState s0 =
        init_state(Model::burgers, {}, grid, sine_samples(grid, 1.0, 1, 0.0, 0.1));
    const WaveField f = integrate(s0, 0.5, {0.5}).back();
    CHECK(field_mass(f) == doctest::Approx(0.1 * 2.0 * kPi).epsilon(1e-13));
}

TEST_CASE("viscous evolution never gains energy") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const SolverState s0 = init_state(Model::burgers, {}, grid, sine_samples(grid, 1.0, 1));
    const auto fields = integrate(s0, 2.0, {0.5, 1.0, 1.5, 2.0});
    double prev = momentum(s0);
    for (const WaveField& f : fields) {
        const double cur = field_momentum(f);
        CHECK(cur <= prev * (1.0 + 1e-12));
        prev = cur;
    }
    CHECK(prev < 0.9 * momentum(s0)); // the shock actually dissipates
}

TEST_CASE("spectral state keeps conjugate symmetry under stepping") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    SolverState state = init_state(Model::kdv, {}, grid, sine_samples(grid, 1.0, 1));
    const double dt = stable_dt(state);
    for (int i = 0; i < 10; ++i) state = step_kdv(state, dt);
    const std::size_t n = grid.n_points;
    for (std::size_t j = 1; j < n / 2; ++j) {
        const auto a = state.u_hat[j];
        const auto b = std::conj(state.u_hat[n - j]);
        CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
    }
    CHECK(std::abs(state.u_hat[0].imag()) == 0.0);
}

TEST_CASE("stability bound follows the advective scale") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const double k_active = static_cast<double>(grid.n_points / 3);
    const SolverState burgers = init_state(Model::burgers, {}, grid, sine_samples(grid, 2.0, 1));
    CHECK(stable_dt(burgers) == doctest::Approx(0.5 / (k_active * 2.0)).epsilon(1e-12));
    const SolverState kdv = init_state(Model::kdv, {}, grid, sine_samples(grid, 2.0, 1));
    CHECK(stable_dt(kdv) == doctest::Approx(0.5 / (k_active * 12.0)).epsilon(1e-12));
}

TEST_CASE("solitary wave translates at speed four kappa squared") {
    GridSpec grid{1024, 0.0, 10.0 * kPi, true};
    const double x0 = 5.0 * kPi, T = 0.5;
    const SolverState s0 = init_state(Model::kdv, {}, grid, soliton_samples(grid, 1.0, x0));

    const double mass0 = mass(s0);
    const double mom0 = momentum(s0);

    const WaveField f = integrate(s0, T, {T}).back();
    const auto expected = soliton_samples(grid, 1.0, x0 + 4.0 * T);
    CHECK(max_abs_diff(f.values, expected) < 1e-6);

    CHECK(std::abs(field_mass(f) - mass0) < 1e-12);
    CHECK(std::abs(field_momentum(f) - mom0) / mom0 < 1e-9);
}

TEST_CASE("time stepping converges at fourth order") {
    GridSpec grid{1024, 0.0, 10.0 * kPi, true};
    const double x0 = 5.0 * kPi, T = 0.25;
    const SolverState s0 = init_state(Model::kdv, {}, grid, soliton_samples(grid, 1.0, x0));
    const auto exact = soliton_samples(grid, 1.0, x0 + 4.0 * T);

    auto error_at = [&](double dt) {
        const WaveField f = integrate(s0, T, {T}, dt).back();
        return max_abs_diff(f.values, exact);
    };
    const double e1 = error_at(2e-3);
    const double e2 = error_at(1e-3);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.8);
    CHECK(order <= 4.5);
}

TEST_CASE("an unstable step size is reported as blow-up") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const SolverState s0 = init_state(Model::kdv, {}, grid, sine_samples(grid, 1.0, 1));
    CHECK_THROWS_AS(integrate(s0, 10.0, {10.0}, 1.0), BlowUp);
}

TEST_CASE("steppers reject states from a different model") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const SolverState s0 = init_state(Model::burgers, {}, grid, sine_samples(grid, 1.0, 1));
    CHECK_THROWS_AS(step_kdv(s0, 1e-3), DomainError);
    CHECK_THROWS_AS(step_ostrovsky(s0, 1e-3), DomainError);
}

TEST_CASE("integration validates its time arguments") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const SolverState s0 = init_state(Model::kdv, {}, grid, sine_samples(grid, 1.0, 1));
    CHECK_THROWS_AS(integrate(s0, -1.0, {}), DomainError);
    CHECK_THROWS_AS(integrate(s0, 1.0, {2.0}), DomainError);
    CHECK_THROWS_AS(integrate(s0, 1.0, {-0.5, 1.0}), DomainError);
}

TEST_CASE("zero-length integration returns the initial data") {
    GridSpec grid{256, 0.0, 2.0 * kPi, true};
    const auto samples = sine_samples(grid, 1.0, 1);
    const SolverState s0 = init_state(Model::kdv, {}, grid, samples);
    const auto fields = integrate(s0, 0.0, {});
    REQUIRE(fields.size() == 1);
    CHECK(fields[0].t == 0.0);
    CHECK(max_abs_diff(fields[0].values, samples) < 1e-14);
}
