#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "quanton/errors.hpp"

namespace quanton {

using cplx = std::complex<double>;

inline constexpr double kDefaultNodeEpsilon = 1e-10;

/// Values of hbar and m defining the working unit convention.
struct UnitSystem {
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const;
};

/// Uniform axis: x_i = origin + i * spacing, i in [0, count).
class Grid1D {
public:
    Grid1D(double origin, double spacing, std::size_t count);

    /// Grid with `count` points from `lo` to `hi` inclusive.
    static Grid1D spanning(double lo, double hi, std::size_t count);

    /// Periodic grid of `count` points covering [lo, lo + length) (right end excluded).
    static Grid1D periodic(double lo, double length, std::size_t count);

    [[nodiscard]] double origin() const { return origin_; }
    [[nodiscard]] double spacing() const { return spacing_; }
    [[nodiscard]] std::size_t count() const { return count_; }
    [[nodiscard]] double coordinate(std::size_t i) const { return origin_ + static_cast<double>(i) * spacing_; }
    [[nodiscard]] double last() const { return coordinate(count_ - 1); }

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double origin_;
    double spacing_;
    std::size_t count_;
};

struct Grid2D {
    Grid1D x;
    Grid1D y;
};

/// A 1D or 2D uniform grid. Flat indices run x-fastest: i = ix + nx * iy.
class Grid {
public:
    Grid(const Grid1D& axis);  // NOLINT(google-explicit-constructor)
    Grid(const Grid2D& grid);  // NOLINT(google-explicit-constructor)

    [[nodiscard]] std::size_t dims() const { return axes_.size(); }
    [[nodiscard]] const Grid1D& axis(std::size_t d) const { return axes_.at(d); }
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::size_t line_length() const { return axes_[0].count(); }
    [[nodiscard]] std::size_t line_count() const { return size() / line_length(); }
    /// Volume element (h or hx*hy) used for grid sums.
    [[nodiscard]] double cell_volume() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::vector<Grid1D> axes_;
};

/// Samples of a real or complex function, one per grid point, all finite.
template <class T>
class SampledField {
public:
    SampledField(Grid grid, std::vector<T> samples);
    explicit SampledField(Grid grid) : SampledField(grid, std::vector<T>(grid.size())) {}

    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] std::size_t size() const { return samples_.size(); }
    [[nodiscard]] std::span<const T> samples() const { return samples_; }
    [[nodiscard]] const T& operator[](std::size_t i) const { return samples_[i]; }

    /// Sample access by axis indices (iy ignored for 1D grids).
    [[nodiscard]] const T& at(std::size_t ix, std::size_t iy = 0) const {
        return samples_[ix + grid_.line_length() * iy];
    }

private:
    Grid grid_;
    std::vector<T> samples_;
};

using RealField = SampledField<double>;
using ComplexField = SampledField<cplx>;

extern template class SampledField<double>;
extern template class SampledField<cplx>;

/// Polar form psi = R exp(iS/hbar). S is meaningful only where `valid` is set.
struct PolarPair {
    RealField amplitude;
    RealField action;
    std::vector<bool> valid;
    double node_epsilon = kDefaultNodeEpsilon;
};

/// R = |psi|; S = hbar * arg(psi) unwrapped along each x-line, masked where R <= node_epsilon.
/// Unwrapping restarts after a masked gap relative to the last unmasked sample.
PolarPair polar_decompose(const ComplexField& psi, const UnitSystem& units,
                          double node_epsilon = kDefaultNodeEpsilon);

/// Inverse of polar_decompose; masked points map to zero.
ComplexField recompose(const PolarPair& pair, const UnitSystem& units);

/// Wrap an angle into (-pi, pi].
double wrap_phase(double radians);

}  // namespace quanton
