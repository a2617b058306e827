#include "quanton/core.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace quanton {

void UnitSystem::validate() const {
    if (!(std::isfinite(hbar) && hbar > 0.0)) throw DomainError("hbar must be positive and finite");
    if (!(std::isfinite(mass) && mass > 0.0)) throw DomainError("mass must be positive and finite");
}

Grid1D::Grid1D(double origin, double spacing, std::size_t count)
    : origin_(origin), spacing_(spacing), count_(count) {
    if (!std::isfinite(origin)) throw DomainError("grid origin must be finite");
    if (!(std::isfinite(spacing) && spacing > 0.0)) throw DomainError("grid spacing must be positive and finite");
    if (count < 3) throw DomainError("grid needs at least 3 points, got " + std::to_string(count));
}

Grid1D Grid1D::spanning(double lo, double hi, std::size_t count) {
    if (count < 3) throw DomainError("grid needs at least 3 points, got " + std::to_string(count));
    if (!(hi > lo)) throw DomainError("grid span must satisfy hi > lo");
    return {lo, (hi - lo) / static_cast<double>(count - 1), count};
}

Grid1D Grid1D::periodic(double lo, double length, std::size_t count) {
    if (count < 3) throw DomainError("grid needs at least 3 points, got " + std::to_string(count));
    if (!(length > 0.0)) throw DomainError("periodic domain length must be positive");
    return {lo, length / static_cast<double>(count), count};
}

Grid::Grid(const Grid1D& axis) : axes_{axis} {}

Grid::Grid(const Grid2D& grid) : axes_{grid.x, grid.y} {}

std::size_t Grid::size() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.count();
    return n;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes_) v *= a.spacing();
    return v;
}

namespace {

bool is_finite(double v) { return std::isfinite(v); }
bool is_finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

template <class T>
SampledField<T>::SampledField(Grid grid, std::vector<T> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        throw DomainError("sample count " + std::to_string(samples_.size()) + " does not match grid size " +
                          std::to_string(grid_.size()));
    }
    for (const auto& v : samples_) {
        if (!is_finite(v)) throw DomainError("sampled field contains non-finite values");
    }
}

template class SampledField<double>;
template class SampledField<cplx>;

double wrap_phase(double radians) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(radians, two_pi);  // [-pi, pi]
    if (w <= -std::numbers::pi) w += two_pi;
    return w + 0.0;  // no negative zero
}

PolarPair polar_decompose(const ComplexField& psi, const UnitSystem& units, double node_epsilon) {
    units.validate();
    if (!(node_epsilon > 0.0)) throw DomainError("node_epsilon must be positive");

    const Grid& grid = psi.grid();
    const std::size_t n = psi.size();
    std::vector<double> amplitude(n);
    std::vector<double> action(n, 0.0);
    std::vector<bool> valid(n, false);

    bool any = false;
    const std::size_t len = grid.line_length();
    for (std::size_t line = 0; line < grid.line_count(); ++line) {
        bool started = false;
        double previous = 0.0;  // unwrapped phase of the last unmasked sample on this line
        for (std::size_t ix = 0; ix < len; ++ix) {
            const std::size_t i = ix + line * len;
            amplitude[i] = std::abs(psi[i]);
            if (amplitude[i] <= node_epsilon) continue;
            const double raw = std::arg(psi[i]);
            const double unwrapped = started ? previous + wrap_phase(raw - previous) : raw;
            previous = unwrapped;
            started = true;
            action[i] = units.hbar * unwrapped;
            valid[i] = true;
            any = true;
        }
    }
    if (!any) throw PhysicsError("field is null: no sample exceeds node_epsilon");

    return {RealField(grid, std::move(amplitude)), RealField(grid, std::move(action)), std::move(valid),
            node_epsilon};
}

ComplexField recompose(const PolarPair& pair, const UnitSystem& units) {
    units.validate();
    const std::size_t n = pair.amplitude.size();
    std::vector<cplx> psi(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        if (!pair.valid[i] || pair.amplitude[i] <= pair.node_epsilon) continue;
        psi[i] = std::polar(pair.amplitude[i], pair.action[i] / units.hbar);
    }
    return {pair.amplitude.grid(), std::move(psi)};
}

}  // namespace quanton
