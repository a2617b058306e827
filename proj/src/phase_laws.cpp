#include "quanton/phase_laws.hpp"

#include <cmath>
#include <numbers>

#include "quanton/quantum_potential.hpp"

namespace quanton {

namespace {

constexpr const char* kLagNote = "transmitted wave lags: psi -> exp(-i action/hbar) psi";

PhaseResult make_phase(double action, const UnitSystem& units, std::string note = kLagNote) {
    return {action, action / units.hbar, std::move(note)};
}

}  // namespace

PhaseResult levy_leblond_action(const TubeConfig& cfg, const UnitSystem& units) {
    cfg.validate();
    const double e_t = transverse_energy(cfg.nx, cfg.ny, cfg.a, units);
    return make_phase(e_t * traversal_time(cfg.L, cfg.p, units), units);
}

PhaseResult q_dt_action(double q, double dt, const UnitSystem& units) {
    units.validate();
    if (!std::isfinite(q)) throw DomainError("quantum potential must be finite");
    if (!(std::isfinite(dt) && dt >= 0.0)) throw DomainError("time interval dt must be nonnegative and finite");
    return make_phase(q * dt, units, "psi(t + dt) = exp(-i Q dt/hbar) psi(t)");
}

PhaseResult exact_tube_action(const TubeConfig& cfg, const UnitSystem& units) {
    const Kinematics k = kinematics(cfg, units);
    if (k.evanescent()) throw PhysicsError("below cutoff: p^2 < 2 m E_T, no propagating mode");
    // p - p' = 2 m E_T / (p + p') avoids cancellation for p >> sqrt(2 m E_T).
    const double dp = 2.0 * units.mass * k.transverse_energy / (cfg.p + *k.p_prime);
    return make_phase(dp * cfg.L, units);
}

PhaseResult circle_action(const CircleConfig& cfg, const UnitSystem& units) {
    cfg.validate();
    const double q = q_circle_analytic(cfg.rho0, cfg.n, units);
    return make_phase(q * traversal_time(2.0 * std::numbers::pi * cfg.rho0, cfg.p, units), units);
}

HeisenbergReport heisenberg_bound(const CircleConfig& cfg, const UnitSystem& units) {
    cfg.validate();
    units.validate();
    // action = pi n^2 hbar^2 / (rho0 p); at rho0 p = hbar this is pi n^2 hbar.
    const double n = cfg.n.value();
    const double bound = std::numbers::pi * n * n * units.hbar;
    const double product = cfg.rho0 * cfg.p / units.hbar;
    const double action = circle_action(cfg, units).action;
    const bool valid = product >= 1.0;
    std::string note = valid ? "rho0 p >= hbar: action bounded by its value at rho0 p = hbar"
                             : "sub-Heisenberg regime, formula outside validity";
    return {bound, product, action, valid, std::move(note)};
}

}  // namespace quanton
