#pragma once

#include <vector>

#include "quanton/core.hpp"
#include "quanton/quantum_potential.hpp"

namespace quanton {

/// Wavefunction frames psi(t_k) on one shared grid with a uniform time step.
class WaveSeries {
public:
    WaveSeries(std::vector<double> times, std::vector<ComplexField> frames);

    [[nodiscard]] std::size_t size() const { return frames_.size(); }
    [[nodiscard]] const std::vector<double>& times() const { return times_; }
    [[nodiscard]] const std::vector<ComplexField>& frames() const { return frames_; }
    [[nodiscard]] const ComplexField& frame(std::size_t k) const { return frames_[k]; }
    [[nodiscard]] const Grid& grid() const { return frames_.front().grid(); }
    [[nodiscard]] double dt() const { return dt_; }

private:
    std::vector<double> times_;
    std::vector<ComplexField> frames_;
    double dt_;
};

/// Central difference stencil in time.
/// central3: (psi[k+1] - psi[k-1]) / 2dt, O(dt^2), exact up to quadratics.
/// central5: (-psi[k+2] + 8 psi[k+1] - 8 psi[k-1] + psi[k-2]) / 12dt, O(dt^4), exact up to quartics.
enum class TimeStencil { central3, central5 };

/// Time derivative at the interior frames of a series.
struct DerivativeSeries {
    std::vector<double> times;
    std::vector<ComplexField> frames;
};

/// One (central3) or two (central5) frames are dropped at each end.
DerivativeSeries time_derivative(const WaveSeries& series, TimeStencil stencil = TimeStencil::central3);

enum class TransportLaw { simon, quantum_potential };

struct TransportReport {
    TransportLaw law;
    std::vector<double> times;
    std::vector<RealField> pointwise_residual;
    /// max |r| over valid points of all frames.
    double max_residual = 0.0;
    /// Root mean over frames of the grid L2 norm squared of r.
    double l2_residual = 0.0;
    /// max over frames of |sum_i r_i dV|, the inner-product form of the law.
    double integrated_residual = 0.0;
};

/// r = Im(psi* dpsi/dt); vanishes iff the series is parallel-transported in the Berry/Simon sense.
TransportReport simon_residual(const WaveSeries& series, TimeStencil stencil = TimeStencil::central3);

/// r = Im(psi* dpsi/dt) + Q |psi|^2 / hbar with constant Q.
TransportReport qp_transport_residual(const WaveSeries& series, double q, const UnitSystem& units,
                                      TimeStencil stencil = TimeStencil::central3);

/// Same law with a sampled Q. Points where Q is masked are excluded from the aggregates; if they carry
/// more than `max_unsupported_fraction` of the probability of any frame, Q is undefined on the support.
TransportReport qp_transport_residual(const WaveSeries& series, const QField& q, const UnitSystem& units,
                                      TimeStencil stencil = TimeStencil::central3,
                                      double max_unsupported_fraction = 1e-2);

/// max |dS/dt + Q| over points unmasked in every frame, with S from polar_decompose and a central3
/// difference in time. Throws "undersampled in time" when S moves more than a quarter cycle
/// (pi hbar / 2) between consecutive frames at any point.
double action_rate_check(const WaveSeries& series, double q, const UnitSystem& units,
                         double node_epsilon = kDefaultNodeEpsilon);

}  // namespace quanton
