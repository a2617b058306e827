#include "quanton/quantum_potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quanton {

std::size_t QField::valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

double q_tube_analytic(double a, int nx, int ny, const UnitSystem& units) {
    return transverse_energy(nx, ny, a, units);
}

double q_circle_analytic(double rho0, HalfInteger n, const UnitSystem& units) {
    units.validate();
    if (!(std::isfinite(rho0) && rho0 > 0.0)) throw DomainError("circle radius rho0 must be positive and finite");
    const double nv = n.value();
    return nv * nv * units.hbar * units.hbar / (2.0 * units.mass * rho0 * rho0);
}

QField q_field_numeric(const RealField& amplitude, const UnitSystem& units, double node_epsilon) {
    units.validate();
    if (!(node_epsilon > 0.0)) throw DomainError("node_epsilon must be positive");
    const Grid& grid = amplitude.grid();
    const std::size_t dims = grid.dims();
    for (std::size_t d = 0; d < dims; ++d) {
        if (grid.axis(d).count() < 3) throw DomainError("q_field_numeric needs at least 3 points per axis");
    }

    const std::size_t nx = grid.axis(0).count();
    const std::size_t ny = dims == 2 ? grid.axis(1).count() : 1;
    const std::size_t n = grid.size();
    const auto R = amplitude.samples();

    std::vector<bool> node(n);
    for (std::size_t i = 0; i < n; ++i) node[i] = std::abs(R[i]) <= node_epsilon;

    const double prefactor = -units.hbar * units.hbar / (2.0 * units.mass);
    const double inv_hx2 = 1.0 / (grid.axis(0).spacing() * grid.axis(0).spacing());
    const double inv_hy2 = dims == 2 ? 1.0 / (grid.axis(1).spacing() * grid.axis(1).spacing()) : 0.0;

    QField qf{grid, std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
    for (std::size_t iy = 0; iy < ny; ++iy) {
        if (dims == 2 && (iy == 0 || iy + 1 == ny)) continue;
        for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
            const std::size_t i = ix + nx * iy;
            if (node[i] || node[i - 1] || node[i + 1]) continue;
            double lap = (R[i - 1] - 2.0 * R[i] + R[i + 1]) * inv_hx2;
            if (dims == 2) {
                if (node[i - nx] || node[i + nx]) continue;
                lap += (R[i - nx] - 2.0 * R[i] + R[i + nx]) * inv_hy2;
            }
            qf.q_values[i] = prefactor * lap / R[i];
            qf.valid[i] = true;
        }
    }
    return qf;
}

UniformityReport q_uniformity_check(const QField& qf, double tol) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < qf.q_values.size(); ++i) {
        if (!qf.valid[i]) continue;
        sum += qf.q_values[i];
        ++count;
    }
    if (count == 0) throw PhysicsError("quantum potential has no valid points");
    const double mean = sum / static_cast<double>(count);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < qf.q_values.size(); ++i) {
        if (qf.valid[i]) max_dev = std::max(max_dev, std::abs(qf.q_values[i] - mean));
    }
    return {mean, max_dev, max_dev <= tol};
}

}  // namespace quanton
