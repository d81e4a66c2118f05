#ifndef RSPEC_GRID_HPP
#define RSPEC_GRID_HPP

#include <cstddef>
#include <vector>

#include "rspec/errors.hpp"

namespace rspec {

// Uniform spatial grid over [x_lo, x_lo + length), endpoint excluded.
struct GridSpec {
    std::size_t n_points = 0;
    double x_lo = 0.0;
    double length = 0.0;
    bool periodic = true;

    double dx() const { return length / static_cast<double>(n_points); }

    double x(std::size_t i) const { return x_lo + dx() * static_cast<double>(i); }

    std::vector<double> coordinates() const {
        std::vector<double> xs(n_points);
        for (std::size_t i = 0; i < n_points; ++i) xs[i] = x(i);
        return xs;
    }

    // Spectral grids must be power-of-two sized; sampling-only grids need not be.
    void validate(bool require_power_of_two = true) const {
        if (n_points < 16)
            throw DomainError("grid: n_points must be at least 16");
        if (require_power_of_two && (n_points & (n_points - 1)) != 0)
            throw DomainError("grid: n_points must be a power of two");
        if (!(length > 0.0))
            throw DomainError("grid: length must be positive");
    }
};

// Real-valued samples of a wave on a uniform grid at one instant.
struct WaveField {
    GridSpec grid;
    std::vector<double> values;
    double t = 0.0;
};

} // namespace rspec

#endif
