#pragma once

#include <optional>

#include "quanton/core.hpp"

namespace quanton {

/// Positive integer or half-integer mode number, stored as 2n.
class HalfInteger {
public:
    explicit HalfInteger(int twice) : twice_(twice) {
        if (twice <= 0) throw DomainError("mode number 2n must be a positive integer");
    }

    /// Accepts 0.5, 1, 1.5, ...; anything else is a domain error.
    static HalfInteger from_value(double n);

    [[nodiscard]] int twice() const { return twice_; }
    [[nodiscard]] double value() const { return 0.5 * twice_; }

    friend bool operator==(HalfInteger, HalfInteger) = default;

private:
    int twice_;
};

/// Square tube of side a and length L, transverse mode (nx, ny), incident momentum p.
struct TubeConfig {
    double a = 1.0;
    double L = 1.0;
    int nx = 1;
    int ny = 1;
    double p = 1.0;

    void validate() const;
};

/// Circle of radius rho0 tangent to the incident line, mode sin(n s / rho0).
struct CircleConfig {
    double rho0 = 1.0;
    HalfInteger n{1};
    double p = 1.0;

    void validate() const;
};

struct Kinematics {
    double total_energy;
    double transverse_energy;
    /// Longitudinal momentum inside the tube; empty below cutoff.
    std::optional<double> p_prime;

    [[nodiscard]] bool evanescent() const { return !p_prime.has_value(); }
};

/// E_T = (nx^2 + ny^2) pi^2 hbar^2 / (2 m a^2).
double transverse_energy(int nx, int ny, double a, const UnitSystem& units);

/// Energy matching across the tube mouth: p'^2/2m + E_T = p^2/2m.
/// Incidence exactly at cutoff (to 1e-12 relative) gives p' = 0.
Kinematics kinematics(const TubeConfig& cfg, const UnitSystem& units);

/// sin(nx pi x / a) sin(ny pi y / a) on a grid spanning [0,a]x[0,a]. Unit peak amplitude.
RealField tube_mode_field(const TubeConfig& cfg, const Grid2D& grid);

/// sin(n s / rho0) on a grid spanning s in [0, 2 pi rho0]; node at the tangent point s = 0.
RealField circle_mode_field(const CircleConfig& cfg, const Grid1D& grid);

/// Classical transit time m * length / p.
double traversal_time(double length, double p, const UnitSystem& units);

}  // namespace quanton
