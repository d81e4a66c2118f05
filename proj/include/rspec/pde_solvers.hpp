#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rspec/errors.hpp"
#include "rspec/grid.hpp"
#include "rspec/profiles.hpp"

namespace rspec {

enum class Model { burgers, kdv, ostrovsky };

struct ModelParams {
    double nu = 0.1;    // burgers viscosity
    double gamma = 1.0; // ostrovsky rotation
};

// Spectral state of one model run. u_hat keeps exact conjugate symmetry so
// inverse transforms stay real; the top third of modes is always zero.
struct SolverState {
    Model model = Model::burgers;
    ModelParams params;
    GridSpec grid;
    std::vector<std::complex<double>> u_hat;
    double t = 0.0;
    double initial_max = 0.0; // blow-up reference amplitude
};

// Transform profile samples into a dealiased spectral state.
SolverState init_state(Model model, const ModelParams& params, const GridSpec& grid,
                       const InitialProfile& profile);

// Same, from raw grid samples (one value per grid point).
SolverState init_state(Model model, const ModelParams& params, const GridSpec& grid,
                       const std::vector<double>& samples);

// One integrating-factor RK4 step of the matching model.
SolverState step_burgers(const SolverState& state, double dt);
SolverState step_kdv(const SolverState& state, double dt);
SolverState step_ostrovsky(const SolverState& state, double dt);

// Conservative advective CFL bound for the dealiased nonlinear term.
double stable_dt(const SolverState& state);

// March to each output time with fixed steps, shrinking the final substep to
// land exactly; empty output_times means a single snapshot at t_end.
// dt_override > 0 replaces the stability-bound step.
std::vector<WaveField> integrate(const SolverState& state, double t_end,
                                 std::vector<double> output_times,
                                 double dt_override = 0.0);

WaveField to_field(const SolverState& state);

double mass(const SolverState& state);     // integral of u
double momentum(const SolverState& state); // integral of u^2

} // namespace rspec
