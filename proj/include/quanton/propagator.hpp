#pragma once

#include <optional>
#include <vector>

#include "quanton/confined_states.hpp"
#include "quanton/core.hpp"
#include "quanton/parallel_transport.hpp"

namespace quanton {

/// Either a constant energy or a potential sampled on the propagation grid.
class Potential {
public:
    Potential(double constant) : constant_(constant) {}  // NOLINT(google-explicit-constructor)
    Potential(RealField sampled) : sampled_(std::move(sampled)) {}  // NOLINT(google-explicit-constructor)

    [[nodiscard]] bool is_constant() const { return !sampled_.has_value(); }
    [[nodiscard]] double constant() const { return constant_; }
    [[nodiscard]] const RealField& sampled() const { return *sampled_; }
    [[nodiscard]] double max_abs() const;

private:
    double constant_ = 0.0;
    std::optional<RealField> sampled_;
};

/// Gaussian packet on a periodic grid:
/// psi(x) = (2 pi sx^2)^(-1/4) exp(-(x - x0)^2 / (4 sx^2) + i p0 (x - x0) / hbar), sx = hbar / (2 sigma_p).
struct Wavepacket {
    double center_x = 0.0;
    double center_p = 1.0;
    double sigma_p = 0.1;
    Grid1D grid;

    /// sigma_p / center_p <= 0.2 and at least 8 points per wavelength at center_p + 4 sigma_p.
    void validate(const UnitSystem& units) const;
    [[nodiscard]] ComplexField sample(const UnitSystem& units) const;
};

struct PropagationRun {
    std::vector<double> times;
    std::vector<ComplexField> frames;
    Potential potential;
    double dt;
    int steps;
    /// max |norm(t) - norm(0)| over every step.
    double max_norm_drift;

    [[nodiscard]] const ComplexField& final_frame() const { return frames.back(); }
    /// The recorded frames as a WaveSeries (needs at least 3 frames).
    [[nodiscard]] WaveSeries as_series() const { return {times, frames}; }
};

/// Strang split-step evolution of i hbar dpsi/dt = (p^2/2m + V) psi on a periodic power-of-two grid:
/// exp(-iV dt/2hbar) F^-1 exp(-i hbar k^2 dt/2m) F exp(-iV dt/2hbar) per step.
/// Frames are recorded at t = 0, every `record_every` steps, and at the end. Negative dt runs backwards.
PropagationRun split_step_evolve(const ComplexField& psi0, const Potential& potential, double dt, int steps,
                                 const UnitSystem& units, int record_every = 0);

enum class TransmissionModel { first_order, exact };

/// Pure-phase tube transmission: every momentum component p above cutoff is multiplied by exp(-i theta(p)),
/// theta = (p - p'(p)) L / hbar (exact) or E_T m L / (p hbar) (first_order). Components with p at or below
/// cutoff never enter the tube and pass through unchanged; the packet precondition keeps their weight
/// beyond four standard deviations.
ComplexField tube_transmit_packet(const Wavepacket& packet, const TubeConfig& cfg, const UnitSystem& units,
                                  TransmissionModel model);

/// arg <reference|shifted> in (-pi, pi]. Throws "fields orthogonal" when the normalized overlap is below 1e-6.
double extract_phase_shift(const ComplexField& reference, const ComplexField& shifted);

/// |DFT| of a field on its grid (unnormalized forward transform).
std::vector<double> momentum_amplitudes(const ComplexField& psi);

/// sqrt(sum |psi|^2 dx).
double field_norm(const ComplexField& psi);

}  // namespace quanton
