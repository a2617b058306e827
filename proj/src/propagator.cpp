#include "quanton/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace quanton {

namespace {

constexpr double pi = std::numbers::pi;

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// In-place forward/backward transform pair over an owned buffer.
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        buffer_ = fftw_alloc_complex(n);
        if (buffer_ == nullptr) throw std::bad_alloc();
        std::lock_guard lock(planner_mutex());
        const int size = static_cast<int>(n);
        forward_ = fftw_plan_dft_1d(size, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(size, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
        fftw_free(buffer_);
    }

    // fftw_complex is layout-compatible with std::complex<double>.
    cplx* data() { return reinterpret_cast<cplx*>(buffer_); }
    std::size_t size() const { return n_; }
    void forward() { fftw_execute(forward_); }
    /// Unnormalized; callers fold the 1/N into their multipliers.
    void backward() { fftw_execute(backward_); }

private:
    std::size_t n_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Angular wavenumber of DFT bin j on a periodic grid of n points with spacing h.
double wavenumber(std::size_t j, std::size_t n, double h) {
    const double signed_j = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    return 2.0 * pi * signed_j / (static_cast<double>(n) * h);
}

const Grid1D& line_grid(const ComplexField& psi) {
    if (psi.grid().dims() != 1) throw DomainError("propagation requires a 1D grid");
    return psi.grid().axis(0);
}

double sum_density(std::span<const cplx> values, double h) {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * h;
}

}  // namespace

double Potential::max_abs() const {
    if (is_constant()) return std::abs(constant_);
    double m = 0.0;
    for (double v : sampled_->samples()) m = std::max(m, std::abs(v));
    return m;
}

void Wavepacket::validate(const UnitSystem& units) const {
    units.validate();
    if (!std::isfinite(center_x)) throw DomainError("packet center_x must be finite");
    if (!(std::isfinite(center_p) && center_p > 0.0)) throw DomainError("packet center_p must be positive");
    if (!(std::isfinite(sigma_p) && sigma_p > 0.0)) throw DomainError("packet sigma_p must be positive");
    if (sigma_p / center_p > 0.2) throw DomainError("packet too broad: sigma_p / center_p must be <= 0.2");
    const double wavelength = 2.0 * pi * units.hbar / (center_p + 4.0 * sigma_p);
    if (wavelength / grid.spacing() < 8.0) {
        throw DomainError("grid under-resolves the packet: need >= 8 points per wavelength");
    }
}

ComplexField Wavepacket::sample(const UnitSystem& units) const {
    validate(units);
    const double sx = units.hbar / (2.0 * sigma_p);
    const double norm = std::pow(2.0 * pi * sx * sx, -0.25);
    std::vector<cplx> values(grid.count());
    for (std::size_t i = 0; i < grid.count(); ++i) {
        const double dx = grid.coordinate(i) - center_x;
        values[i] = norm * std::exp(-dx * dx / (4.0 * sx * sx)) * std::polar(1.0, center_p * dx / units.hbar);
    }
    return {Grid(grid), std::move(values)};
}

double field_norm(const ComplexField& psi) {
    return std::sqrt(sum_density(psi.samples(), psi.grid().cell_volume()));
}

PropagationRun split_step_evolve(const ComplexField& psi0, const Potential& potential, double dt, int steps,
                                 const UnitSystem& units, int record_every) {
    units.validate();
    const Grid1D& axis = line_grid(psi0);
    const std::size_t n = axis.count();
    if (!is_power_of_two(n)) throw DomainError("split-step grid size must be a power of two, got " + std::to_string(n));
    if (!(std::isfinite(dt) && dt != 0.0)) throw DomainError("time step must be finite and nonzero");
    if (steps < 1) throw DomainError("steps must be >= 1");
    if (!potential.is_constant() && !(potential.sampled().grid() == psi0.grid())) {
        throw DomainError("potential grid differs from the wavefunction grid");
    }
    if (std::abs(dt) * potential.max_abs() / units.hbar >= 0.5) {
        throw DomainError("time step too large: |dt| max|V| / hbar must be < 0.5");
    }
    if (record_every <= 0) record_every = steps;

    const double h = axis.spacing();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<cplx> kinetic(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = wavenumber(j, n, h);
        kinetic[j] = std::polar(inv_n, -units.hbar * k * k * dt / (2.0 * units.mass));
    }
    std::vector<cplx> half_potential;
    if (potential.is_constant()) {
        half_potential.assign(1, std::polar(1.0, -potential.constant() * dt / (2.0 * units.hbar)));
    } else {
        half_potential.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            half_potential[i] = std::polar(1.0, -potential.sampled()[i] * dt / (2.0 * units.hbar));
        }
    }
    auto apply_potential = [&](cplx* psi) {
        if (half_potential.size() == 1) {
            const cplx f = half_potential[0];
            for (std::size_t i = 0; i < n; ++i) psi[i] *= f;
        } else {
            for (std::size_t i = 0; i < n; ++i) psi[i] *= half_potential[i];
        }
    };

    FftPlan plan(n);
    cplx* psi = plan.data();
    std::copy(psi0.samples().begin(), psi0.samples().end(), psi);
    const double norm0 = sum_density({psi, n}, h);

    PropagationRun run{{0.0}, {psi0}, potential, dt, steps, 0.0};
    for (int step = 1; step <= steps; ++step) {
        apply_potential(psi);
        plan.forward();
        for (std::size_t j = 0; j < n; ++j) psi[j] *= kinetic[j];
        plan.backward();
        apply_potential(psi);

        run.max_norm_drift = std::max(run.max_norm_drift, std::abs(sum_density({psi, n}, h) - norm0));
        if (step % record_every == 0 || step == steps) {
            run.times.push_back(step * dt);
            run.frames.emplace_back(psi0.grid(), std::vector<cplx>(psi, psi + n));
        }
    }
    return run;
}

std::vector<double> momentum_amplitudes(const ComplexField& psi) {
    const std::size_t n = line_grid(psi).count();
    FftPlan plan(n);
    std::copy(psi.samples().begin(), psi.samples().end(), plan.data());
    plan.forward();
    std::vector<double> amplitudes(n);
    for (std::size_t j = 0; j < n; ++j) amplitudes[j] = std::abs(plan.data()[j]);
    return amplitudes;
}

ComplexField tube_transmit_packet(const Wavepacket& packet, const TubeConfig& cfg, const UnitSystem& units,
                                  TransmissionModel model) {
    cfg.validate();
    packet.validate(units);
    const std::size_t n = packet.grid.count();
    if (!is_power_of_two(n)) throw DomainError("packet grid size must be a power of two, got " + std::to_string(n));

    const double e_t = transverse_energy(cfg.nx, cfg.ny, cfg.a, units);
    const double cutoff = std::sqrt(2.0 * units.mass * e_t);
    if (packet.center_p - 4.0 * packet.sigma_p <= cutoff) {
        throw PhysicsError("evanescent components: packet support reaches below the tube cutoff");
    }

    ComplexField psi = packet.sample(units);
    if (cfg.L == 0.0) return psi;

    const double h = packet.grid.spacing();
    FftPlan plan(n);
    cplx* data = plan.data();
    std::copy(psi.samples().begin(), psi.samples().end(), data);
    plan.forward();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double p = units.hbar * wavenumber(j, n, h);
        double theta = 0.0;
        if (p > cutoff) {
            if (model == TransmissionModel::exact) {
                const double p_prime = std::sqrt(p * p - 2.0 * units.mass * e_t);
                theta = 2.0 * units.mass * e_t / (p + p_prime) * cfg.L / units.hbar;
            } else {
                theta = e_t * units.mass * cfg.L / (p * units.hbar);
            }
        }
        data[j] *= std::polar(inv_n, -theta);
    }
    plan.backward();
    return {psi.grid(), std::vector<cplx>(data, data + n)};
}

double extract_phase_shift(const ComplexField& reference, const ComplexField& shifted) {
    if (!(reference.grid() == shifted.grid())) throw DomainError("fields must share one grid");
    cplx overlap{0.0, 0.0};
    double norm_ref = 0.0;
    double norm_shift = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        overlap += std::conj(reference[i]) * shifted[i];
        norm_ref += std::norm(reference[i]);
        norm_shift += std::norm(shifted[i]);
    }
    const double scale = std::sqrt(norm_ref * norm_shift);
    if (!(scale > 0.0) || std::abs(overlap) <= 1e-6 * scale) {
        throw PhysicsError("fields orthogonal: overlap too small to define a phase");
    }
    return wrap_phase(std::arg(overlap));
}

}  // namespace quanton
