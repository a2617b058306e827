#include "quanton/parallel_transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace quanton {

WaveSeries::WaveSeries(std::vector<double> times, std::vector<ComplexField> frames)
    : times_(std::move(times)), frames_(std::move(frames)), dt_(0.0) {
    if (frames_.size() < 3) throw DomainError("wave series needs at least 3 frames");
    if (times_.size() != frames_.size()) throw DomainError("wave series needs one time per frame");
    for (const auto& f : frames_) {
        if (!(f.grid() == frames_.front().grid())) throw DomainError("wave series frames must share one grid");
    }
    dt_ = (times_.back() - times_.front()) / static_cast<double>(times_.size() - 1);
    if (!(dt_ > 0.0)) throw DomainError("wave series times must be strictly increasing");
    for (std::size_t k = 1; k < times_.size(); ++k) {
        const double step = times_[k] - times_[k - 1];
        if (!(step > 0.0)) throw DomainError("wave series times must be strictly increasing");
        if (std::abs(step - dt_) > 1e-9 * dt_) throw DomainError("wave series time step is not uniform");
    }
}

DerivativeSeries time_derivative(const WaveSeries& series, TimeStencil stencil) {
    const std::size_t reach = stencil == TimeStencil::central3 ? 1 : 2;
    if (series.size() < 2 * reach + 1) {
        throw DomainError("series too short for the requested time stencil");
    }
    const double dt = series.dt();
    const std::size_t n = series.grid().size();
    std::vector<double> times;
    std::vector<ComplexField> frames;
    for (std::size_t k = reach; k + reach < series.size(); ++k) {
        std::vector<cplx> d(n);
        if (stencil == TimeStencil::central3) {
            const auto& prev = series.frame(k - 1);
            const auto& next = series.frame(k + 1);
            for (std::size_t i = 0; i < n; ++i) d[i] = (next[i] - prev[i]) / (2.0 * dt);
        } else {
            const auto& m2 = series.frame(k - 2);
            const auto& m1 = series.frame(k - 1);
            const auto& p1 = series.frame(k + 1);
            const auto& p2 = series.frame(k + 2);
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * dt);
            }
        }
        times.push_back(series.times()[k]);
        frames.emplace_back(series.grid(), std::move(d));
    }
    return {std::move(times), std::move(frames)};
}

namespace {

// Shared residual loop. `q_at(i)` returns Q at point i (or NaN when masked).
template <class QAt>
TransportReport transport_residual(const WaveSeries& series, TransportLaw law, double inv_hbar, QAt q_at,
                                   TimeStencil stencil, double max_unsupported_fraction) {
    const DerivativeSeries deriv = time_derivative(series, stencil);
    const std::size_t offset = stencil == TimeStencil::central3 ? 1 : 2;
    const Grid& grid = series.grid();
    const std::size_t n = grid.size();
    const double dv = grid.cell_volume();

    TransportReport report{law, deriv.times, {}, 0.0, 0.0, 0.0};
    double l2_sum = 0.0;
    for (std::size_t k = 0; k < deriv.frames.size(); ++k) {
        const auto& psi = series.frame(k + offset);
        const auto& dpsi = deriv.frames[k];
        std::vector<double> r(n, 0.0);
        double frame_l2 = 0.0;
        double frame_integral = 0.0;
        double total_weight = 0.0;
        double unsupported_weight = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double density = std::norm(psi[i]);
            total_weight += density;
            const double q = q_at(i);
            if (std::isnan(q)) {
                unsupported_weight += density;
                continue;
            }
            r[i] = (std::conj(psi[i]) * dpsi[i]).imag() + q * density * inv_hbar;
            report.max_residual = std::max(report.max_residual, std::abs(r[i]));
            frame_l2 += r[i] * r[i] * dv;
            frame_integral += r[i] * dv;
        }
        if (total_weight > 0.0 && unsupported_weight > max_unsupported_fraction * total_weight) {
            throw PhysicsError("Q undefined on support: masked quantum potential carries " +
                               std::to_string(unsupported_weight / total_weight) + " of the probability");
        }
        l2_sum += frame_l2;
        report.integrated_residual = std::max(report.integrated_residual, std::abs(frame_integral));
        report.pointwise_residual.emplace_back(grid, std::move(r));
    }
    report.l2_residual = std::sqrt(l2_sum / static_cast<double>(deriv.frames.size()));
    return report;
}

}  // namespace

TransportReport simon_residual(const WaveSeries& series, TimeStencil stencil) {
    return transport_residual(series, TransportLaw::simon, 0.0, [](std::size_t) { return 0.0; }, stencil, 1.0);
}

TransportReport qp_transport_residual(const WaveSeries& series, double q, const UnitSystem& units,
                                      TimeStencil stencil) {
    units.validate();
    if (!std::isfinite(q)) throw DomainError("quantum potential must be finite");
    return transport_residual(series, TransportLaw::quantum_potential, 1.0 / units.hbar,
                              [q](std::size_t) { return q; }, stencil, 1.0);
}

TransportReport qp_transport_residual(const WaveSeries& series, const QField& q, const UnitSystem& units,
                                      TimeStencil stencil, double max_unsupported_fraction) {
    units.validate();
    if (!(q.grid == series.grid())) throw DomainError("quantum potential grid differs from the series grid");
    const auto q_at = [&q](std::size_t i) {
        return q.valid[i] ? q.q_values[i] : std::numeric_limits<double>::quiet_NaN();
    };
    return transport_residual(series, TransportLaw::quantum_potential, 1.0 / units.hbar, q_at, stencil,
                              max_unsupported_fraction);
}

double action_rate_check(const WaveSeries& series, double q, const UnitSystem& units, double node_epsilon) {
    units.validate();
    const std::size_t n = series.grid().size();
    const std::size_t frames = series.size();

    std::vector<PolarPair> polar;
    polar.reserve(frames);
    for (const auto& f : series.frames()) polar.push_back(polar_decompose(f, units, node_epsilon));

    const double quarter_cycle = 0.5 * std::numbers::pi * units.hbar;
    const double cycle = 2.0 * std::numbers::pi * units.hbar;
    const double dt = series.dt();
    double max_dev = 0.0;
    bool any = false;
    std::vector<double> s(frames);
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (const auto& pp : polar) ok = ok && pp.valid[i];
        if (!ok) continue;
        s[0] = polar[0].action[i];
        for (std::size_t k = 1; k < frames; ++k) {
            const double raw = polar[k].action[i] - s[k - 1];
            const double step = raw - cycle * std::round(raw / cycle);
            if (std::abs(step) > quarter_cycle) {
                throw PhysicsError("undersampled in time: phase moves " + std::to_string(step / units.hbar) +
                                   " rad between frames");
            }
            s[k] = s[k - 1] + step;
        }
        for (std::size_t k = 1; k + 1 < frames; ++k) {
            const double rate = (s[k + 1] - s[k - 1]) / (2.0 * dt);
            max_dev = std::max(max_dev, std::abs(rate + q));
        }
        any = true;
    }
    if (!any) throw PhysicsError("field is null: no point is unmasked in every frame");
    return max_dev;
}

}  // namespace quanton
