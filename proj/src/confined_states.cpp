#include "quanton/confined_states.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace quanton {

namespace {

constexpr double pi = std::numbers::pi;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_span(const Grid1D& axis, double lo, double hi, const char* what) {
    const double tol = 1e-9 * std::max(1.0, std::abs(hi - lo));
    if (std::abs(axis.origin() - lo) > tol || std::abs(axis.last() - hi) > tol) {
        throw DomainError(std::string("grid must span ") + what);
    }
}

/// sin(m pi u) at u = i / (count - 1), measured from the nearer wall. Walls are exact zeros, and samples
/// next to the far wall keep full relative precision (sin(m pi - x) loses it when m pi is rounded).
double standing_wave(int half_turns, std::size_t i, std::size_t count) {
    const std::size_t last = count - 1;
    const bool far_half = 2 * i > last;
    const double u = static_cast<double>(far_half ? last - i : i) / static_cast<double>(last);
    const double v = std::sin(half_turns * pi * u);
    // sin(m pi (1 - u)) = (-1)^(m+1) sin(m pi u)
    return far_half && half_turns % 2 == 0 ? -v : v;
}

}  // namespace

HalfInteger HalfInteger::from_value(double n) {
    const double twice = 2.0 * n;
    if (!std::isfinite(twice) || twice < 1.0 || twice != std::round(twice) || twice > 1e9) {
        throw DomainError("mode number must be a positive integer or half-integer, got " + std::to_string(n));
    }
    return HalfInteger(static_cast<int>(twice));
}

void TubeConfig::validate() const {
    if (!positive_finite(a)) throw DomainError("tube side a must be positive and finite");
    if (!(std::isfinite(L) && L >= 0.0)) throw DomainError("tube length L must be nonnegative and finite");
    if (nx < 1 || ny < 1) throw DomainError("transverse quantum numbers nx, ny must be >= 1");
    if (!positive_finite(p)) throw DomainError("incident momentum p must be positive and finite");
}

void CircleConfig::validate() const {
    if (!positive_finite(rho0)) throw DomainError("circle radius rho0 must be positive and finite");
    if (!positive_finite(p)) throw DomainError("incident momentum p must be positive and finite");
}

double transverse_energy(int nx, int ny, double a, const UnitSystem& units) {
    units.validate();
    if (!positive_finite(a)) throw DomainError("tube side a must be positive and finite");
    if (nx < 1 || ny < 1) throw DomainError("transverse quantum numbers nx, ny must be >= 1");
    const double n2 = static_cast<double>(nx) * nx + static_cast<double>(ny) * ny;
    return n2 * pi * pi * units.hbar * units.hbar / (2.0 * units.mass * a * a);
}

Kinematics kinematics(const TubeConfig& cfg, const UnitSystem& units) {
    cfg.validate();
    const double e_total = cfg.p * cfg.p / (2.0 * units.mass);
    const double e_t = transverse_energy(cfg.nx, cfg.ny, cfg.a, units);
    const double p2 = cfg.p * cfg.p;
    const double d = p2 - 2.0 * units.mass * e_t;
    Kinematics k{e_total, e_t, std::nullopt};
    if (d >= -1e-12 * p2) k.p_prime = std::sqrt(std::max(d, 0.0));
    return k;
}

RealField tube_mode_field(const TubeConfig& cfg, const Grid2D& grid) {
    cfg.validate();
    require_span(grid.x, 0.0, cfg.a, "[0, a] along x");
    require_span(grid.y, 0.0, cfg.a, "[0, a] along y");
    const std::size_t nx = grid.x.count();
    const std::size_t ny = grid.y.count();
    auto factor = [](int n, const Grid1D& axis, std::size_t i) { return standing_wave(n, i, axis.count()); };
    std::vector<double> fx(nx), fy(ny);
    for (std::size_t i = 0; i < nx; ++i) fx[i] = factor(cfg.nx, grid.x, i);
    for (std::size_t j = 0; j < ny; ++j) fy[j] = factor(cfg.ny, grid.y, j);
    std::vector<double> values(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) values[i + nx * j] = fx[i] * fy[j];
    }
    return {Grid(grid), std::move(values)};
}

RealField circle_mode_field(const CircleConfig& cfg, const Grid1D& grid) {
    cfg.validate();
    require_span(grid, 0.0, 2.0 * pi * cfg.rho0, "s in [0, 2 pi rho0]");
    // sin(n s / rho0) = sin(2n pi s / (2 pi rho0)): 2n half-turns over the loop.
    std::vector<double> values(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i) values[i] = standing_wave(cfg.n.twice(), i, grid.count());
    return {Grid(grid), std::move(values)};
}

double traversal_time(double length, double p, const UnitSystem& units) {
    units.validate();
    if (!(std::isfinite(p) && p > 0.0)) throw DomainError("momentum p must be positive and finite");
    if (!(std::isfinite(length) && length >= 0.0)) throw DomainError("path length must be nonnegative and finite");
    return units.mass * length / p;
}

}  // namespace quanton
