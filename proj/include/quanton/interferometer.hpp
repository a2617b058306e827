#pragma once

#include <vector>

#include "quanton/confined_states.hpp"
#include "quanton/core.hpp"

namespace quanton {

/// Straight line with a tangent circle: the flow splits at the tangent point and recombines there.
struct TwoPathConfig {
    CircleConfig circle;
    double a_straight = 1.0 / 1.4142135623730951;
    double a_circle = 1.0 / 1.4142135623730951;
    /// Ordinary path-length phase p 2 pi rho0 / hbar of the circle path.
    bool include_dynamical = true;
    /// Quantum-potential (confinement) phase of the circle path.
    bool include_quantum_potential = true;

    /// a_straight^2 + a_circle^2 = 1 to 1e-9, both nonnegative.
    void validate() const;
};

/// Circle-path phase relative to the straight path, in radians:
/// (p 2 pi rho0 [if dynamical] - circle_action [if quantum potential]) / hbar.
double path_phase_difference(const TwoPathConfig& cfg, const UnitSystem& units);

/// |a_s + a_c exp(i dphi)|^2, clamped to [(a_s - a_c)^2, (a_s + a_c)^2].
double intensity(const TwoPathConfig& cfg, const UnitSystem& units);

enum class SweepParameter { p, rho0 };

struct SweepRange {
    double lo;
    double hi;
    int count;
};

/// A located intensity maximum: dphi(value) = 2 pi order.
struct FringeMaximum {
    long order;
    double value;
};

struct FringeScan {
    SweepParameter parameter;
    std::vector<double> values;
    std::vector<double> intensities;
    std::vector<double> phase_differences;
    /// Maxima inside [lo, hi], refined by root finding, increasing in value. Empty when dphi is constant.
    std::vector<FringeMaximum> maxima;
};

/// Sweep p or rho0 over `count` evenly spaced values (both ends included).
FringeScan fringe_scan(const TwoPathConfig& cfg, SweepParameter parameter, const SweepRange& range,
                       const UnitSystem& units);

const char* to_string(SweepParameter parameter);

}  // namespace quanton
