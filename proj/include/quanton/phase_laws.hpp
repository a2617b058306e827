#pragma once

#include <string>

#include "quanton/confined_states.hpp"
#include "quanton/core.hpp"

namespace quanton {

/// An accumulated action and the same quantity in radians (action / hbar).
///
/// Actions are reported positive. The confined path lags the free one: the
/// wavefunction picks up exp(-i action / hbar).
struct PhaseResult {
    double action = 0.0;
    double phase_rad = 0.0;
    std::string convention_note;
};

/// Confinement phase of a tube in the adiabatic (first-order) approximation:
/// E_T * m L / p, which is pi^2 hbar^2 L / (p a^2) for the (1,1) mode.
PhaseResult levy_leblond_action(const TubeConfig& cfg, const UnitSystem& units);

/// Action Q * dt accumulated by exp(-i Q dt / hbar).
PhaseResult q_dt_action(double q, double dt, const UnitSystem& units);

/// Exact mode-matching action (p - p') L. Throws PhysicsError "below cutoff" for evanescent incidence.
PhaseResult exact_tube_action(const TubeConfig& cfg, const UnitSystem& units);

/// Q_circle * 2 pi rho0 m / p; pi hbar^2 / (4 rho0 p) for n = 1/2.
PhaseResult circle_action(const CircleConfig& cfg, const UnitSystem& units);

struct HeisenbergReport {
    /// Circle action of this mode at rho0 p = hbar (pi hbar / 4 for n = 1/2).
    double action_bound;
    /// rho0 p / hbar.
    double saturating_product;
    /// circle_action for the given config.
    double action;
    /// False when rho0 p < hbar, where the semiclassical traversal picture no longer applies.
    bool within_validity;
    std::string note;
};

/// Saturation of the circle action at the uncertainty limit rho0 p ~ hbar.
HeisenbergReport heisenberg_bound(const CircleConfig& cfg, const UnitSystem& units);

}  // namespace quanton
