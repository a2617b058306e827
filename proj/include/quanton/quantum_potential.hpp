#pragma once

#include <vector>

#include "quanton/confined_states.hpp"
#include "quanton/core.hpp"

namespace quanton {

/// Sampled quantum potential. Values at invalid points are zero and carry no meaning.
struct QField {
    Grid grid;
    std::vector<double> q_values;
    std::vector<bool> valid;

    [[nodiscard]] std::size_t valid_count() const;
};

/// Q of the (nx, ny) tube eigenmode: (nx^2 + ny^2) pi^2 hbar^2 / (2 m a^2).
/// The (1,1) case is pi^2 hbar^2 / (m a^2); other modes are an extension of the same formula.
/// Identical to transverse_energy(nx, ny, a, units) bit for bit.
double q_tube_analytic(double a, int nx, int ny, const UnitSystem& units);

/// Q of the circle mode sin(n s / rho0): n^2 hbar^2 / (2 m rho0^2); hbar^2/(8 m rho0^2) for n = 1/2.
double q_circle_analytic(double rho0, HalfInteger n, const UnitSystem& units);

/// Q = -(hbar^2 / 2m) (D^2 R) / R with the 3-point central Laplacian summed over axes.
/// Boundary points, nodes (|R| <= node_epsilon) and their stencil neighbours are masked.
QField q_field_numeric(const RealField& amplitude, const UnitSystem& units,
                       double node_epsilon = kDefaultNodeEpsilon);

struct UniformityReport {
    double mean;
    double max_deviation;
    bool uniform;
};

/// Mean of Q over valid points and the largest deviation from it.
UniformityReport q_uniformity_check(const QField& qf, double tol);

}  // namespace quanton
