#include "quanton/interferometer.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>

#include "quanton/phase_laws.hpp"

namespace quanton {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

TwoPathConfig with_value(TwoPathConfig cfg, SweepParameter parameter, double value) {
    (parameter == SweepParameter::p ? cfg.circle.p : cfg.circle.rho0) = value;
    return cfg;
}

}  // namespace

const char* to_string(SweepParameter parameter) { return parameter == SweepParameter::p ? "p" : "rho0"; }

void TwoPathConfig::validate() const {
    circle.validate();
    if (!(a_straight >= 0.0 && a_circle >= 0.0)) throw DomainError("split amplitudes must be nonnegative");
    if (std::abs(a_straight * a_straight + a_circle * a_circle - 1.0) > 1e-9) {
        throw DomainError("split amplitudes must satisfy a_straight^2 + a_circle^2 = 1");
    }
}

double path_phase_difference(const TwoPathConfig& cfg, const UnitSystem& units) {
    cfg.validate();
    units.validate();
    double action = 0.0;
    if (cfg.include_dynamical) action += cfg.circle.p * two_pi * cfg.circle.rho0;
    if (cfg.include_quantum_potential) action -= circle_action(cfg.circle, units).action;
    return action / units.hbar;
}

double intensity(const TwoPathConfig& cfg, const UnitSystem& units) {
    const double dphi = path_phase_difference(cfg, units);
    const double as = cfg.a_straight;
    const double ac = cfg.a_circle;
    const double i = as * as + ac * ac + 2.0 * as * ac * std::cos(dphi);
    return std::clamp(i, (as - ac) * (as - ac), (as + ac) * (as + ac));
}

FringeScan fringe_scan(const TwoPathConfig& cfg, SweepParameter parameter, const SweepRange& range,
                       const UnitSystem& units) {
    cfg.validate();
    units.validate();
    if (!(std::isfinite(range.lo) && range.lo > 0.0)) {
        throw DomainError(std::string("sweep of ") + to_string(parameter) + " must stay positive");
    }
    if (!(std::isfinite(range.hi) && range.hi > range.lo)) throw DomainError("sweep range needs hi > lo");
    if (range.count < 2) throw DomainError("sweep count must be >= 2");

    FringeScan scan{parameter, {}, {}, {}, {}};
    const auto n = static_cast<std::size_t>(range.count);
    scan.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double v = i + 1 == n ? range.hi : range.lo + t * (range.hi - range.lo);
        const TwoPathConfig point = with_value(cfg, parameter, v);
        scan.values.push_back(v);
        scan.phase_differences.push_back(path_phase_difference(point, units));
        scan.intensities.push_back(intensity(point, units));
    }

    if (!cfg.include_dynamical && !cfg.include_quantum_potential) return scan;

    // dphi is strictly increasing in both p and rho0 whenever either term is on.
    const auto dphi = [&](double v) { return path_phase_difference(with_value(cfg, parameter, v), units); };
    const double lo_phase = dphi(range.lo);
    const double hi_phase = dphi(range.hi);
    const auto first = static_cast<long>(std::ceil(lo_phase / two_pi));
    const auto last = static_cast<long>(std::floor(hi_phase / two_pi));
    for (long k = first; k <= last; ++k) {
        const double target = two_pi * static_cast<double>(k);
        const auto f = [&](double v) { return dphi(v) - target; };
        const double f_lo = f(range.lo);
        const double f_hi = f(range.hi);
        double root;
        if (f_lo == 0.0) {
            root = range.lo;
        } else if (f_hi == 0.0) {
            root = range.hi;
        } else if (f_lo > 0.0 || f_hi < 0.0) {
            continue;  // rounding at an end point
        } else {
            std::uintmax_t max_iter = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(
                f, range.lo, range.hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
            root = 0.5 * (a + b);
        }
        scan.maxima.push_back({k, root});
    }
    return scan;
}

}  // namespace quanton
