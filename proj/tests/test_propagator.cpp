#include <doctest.h>

#include <cmath>

#include "quanton/phase_laws.hpp"
#include "quanton/propagator.hpp"
#include "test_support.hpp"

using namespace quanton;
using quanton::testing::Gen;
using quanton::testing::pi;

namespace {

Wavepacket small_packet(double x0 = -10.0) {
    return {x0, 5.0, 0.5, Grid1D::periodic(-32.0, 64.0, 1024)};
}

double expectation_x(const ComplexField& psi) {
    const Grid1D& g = psi.grid().axis(0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        num += g.coordinate(i) * std::norm(psi[i]);
        den += std::norm(psi[i]);
    }
    return num / den;
}

double variance_x(const ComplexField& psi) {
    const Grid1D& g = psi.grid().axis(0);
    const double mean = expectation_x(psi);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        num += (g.coordinate(i) - mean) * (g.coordinate(i) - mean) * std::norm(psi[i]);
        den += std::norm(psi[i]);
    }
    return num / den;
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Independent oracle: arg of the Gaussian-weighted mean of exp(-i theta(p)) over the continuous
/// momentum distribution, by trapezoid quadrature over +-12 sigma.
double packet_phase_oracle(double p0, double sigma_p, auto&& theta) {
    const int n = 24001;
    const double lo = p0 - 12 * sigma_p, hi = p0 + 12 * sigma_p;
    const double h = (hi - lo) / (n - 1);
    std::complex<double> sum{};
    for (int i = 0; i < n; ++i) {
        const double p = lo + i * h;
        const double w = std::exp(-(p - p0) * (p - p0) / (2 * sigma_p * sigma_p)) * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
        sum += w * std::polar(1.0, -theta(p));
    }
    return std::arg(sum);
}

}  // namespace

TEST_CASE("Wavepacket validation and sampling") {
    const Wavepacket w = small_packet();
    const ComplexField psi = w.sample({});
    CHECK(field_norm(psi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation_x(psi) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(variance_x(psi) == doctest::Approx(1.0).epsilon(1e-10));  // sx = hbar / (2 sigma_p) = 1

    Wavepacket broad = w;
    broad.sigma_p = 1.1;
    CHECK_THROWS_AS(broad.validate({}), DomainError);
    Wavepacket coarse = w;
    coarse.grid = Grid1D::periodic(-32.0, 64.0, 64);
    CHECK_THROWS_AS(coarse.validate({}), DomainError);
    Wavepacket backwards = w;
    backwards.center_p = -5.0;
    CHECK_THROWS_AS(backwards.validate({}), DomainError);
}

TEST_CASE("split_step_evolve: plane wave acquires exactly exp(-i hbar k^2 t / 2m)") {
    const Grid1D g = Grid1D::periodic(0.0, 2 * pi, 64);
    const UnitSystem u{0.7, 1.3};
    for (int mode : {0, 1, 5, -7, 31}) {
        const ComplexField psi = quanton::testing::make_complex(g, [&](double x, double) { return std::polar(1.0, mode * x); });
        const PropagationRun run = split_step_evolve(psi, 0.0, 1e-2, 100, u);
        const cplx expected = std::polar(1.0, -u.hbar * mode * mode * 1.0 / (2 * u.mass));
        for (std::size_t i = 0; i < psi.size(); ++i) {
            CHECK(std::abs(run.final_frame()[i] - expected * psi[i]) <= 1e-12);
        }
    }
}

TEST_CASE("split_step_evolve: constant potential factorizes as exp(-i V t / hbar)") {
    const ComplexField psi = small_packet().sample({});
    const double v = pi * pi;
    const PropagationRun free = split_step_evolve(psi, 0.0, 1e-3, 500, {});
    const PropagationRun shifted = split_step_evolve(psi, v, 1e-3, 500, {});
    const cplx factor = std::polar(1.0, -v * 0.5);
    double err = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) err = std::max(err, std::abs(shifted.final_frame()[i] - factor * free.final_frame()[i]));
    CHECK(err <= 1e-10);
    CHECK(shifted.max_norm_drift <= 1e-12);

    // Same through a sampled (but constant) potential.
    const RealField sampled = quanton::testing::make_real(psi.grid(), [&](double, double) { return v; });
    CHECK(max_abs_diff(split_step_evolve(psi, sampled, 1e-3, 500, {}).final_frame(), shifted.final_frame()) <= 1e-10);
}

TEST_CASE("split_step_evolve: free packet follows Ehrenfest and spreads as the closed form") {
    const Wavepacket w = small_packet();
    const UnitSystem u{1.0, 2.0};
    const PropagationRun run = split_step_evolve(w.sample(u), 0.0, 1e-3, 2000, u, 500);
    CHECK(run.frames.size() == 5);
    for (std::size_t k = 0; k < run.frames.size(); ++k) {
        const double t = run.times[k];
        CHECK(run.times[k] == doctest::Approx(0.5 * static_cast<double>(k)).epsilon(1e-12));
        CHECK(expectation_x(run.frames[k]) == doctest::Approx(-10.0 + 5.0 * t / 2.0).epsilon(1e-9));
        const double spread = u.hbar * t / (2.0 * u.mass);  // sx^2 = 1
        CHECK(variance_x(run.frames[k]) == doctest::Approx(1.0 + spread * spread).epsilon(1e-9));
    }
}

TEST_CASE("property: split-step is unitary and reversible for random potentials") {
    Gen gen(61);
    for (int trial = 0; trial < 8; ++trial) {
        const Wavepacket w = small_packet(gen.uniform(-15, 15));
        const double depth = gen.uniform(-20, 20);
        const double width = gen.uniform(0.5, 5.0);
        const double c = gen.uniform(-20, 20);
        const RealField v = quanton::testing::make_real(
            Grid(w.grid), [&](double x, double) { return depth * std::exp(-(x - c) * (x - c) / (width * width)); });
        const ComplexField psi0 = w.sample({});
        const double dt = gen.uniform(1e-4, 5e-3);
        const int steps = gen.integer(50, 300);
        const PropagationRun forward = split_step_evolve(psi0, v, dt, steps, {});
        CHECK(forward.max_norm_drift <= 1e-12);
        CHECK(field_norm(forward.final_frame()) == doctest::Approx(1.0).epsilon(1e-12));
        const PropagationRun back = split_step_evolve(forward.final_frame(), v, -dt, steps, {});
        CHECK(max_abs_diff(back.final_frame(), psi0) <= 1e-8);
    }
}

TEST_CASE("split_step_evolve: recorded frames and precondition errors") {
    const Wavepacket w = small_packet();
    const ComplexField psi = w.sample({});
    const PropagationRun r = split_step_evolve(psi, 0.0, 1e-3, 10, {}, 3);
    CHECK(r.frames.size() == 5);  // 0, 3, 6, 9, 10
    CHECK(r.times.back() == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK_THROWS_AS(static_cast<void>(r.as_series()), DomainError);  // the final step breaks the uniform spacing
    CHECK(split_step_evolve(psi, 0.0, 1e-3, 9, {}, 3).as_series().size() == 4);

    const Grid1D odd = Grid1D::periodic(0.0, 1.0, 100);
    const ComplexField bad = quanton::testing::make_complex(odd, [](double, double) { return cplx{1, 0}; });
    CHECK_THROWS_AS(split_step_evolve(bad, 0.0, 1e-3, 1, {}), DomainError);
    CHECK_THROWS_AS(split_step_evolve(psi, 0.0, 0.0, 1, {}), DomainError);
    CHECK_THROWS_AS(split_step_evolve(psi, 0.0, 1e-3, 0, {}), DomainError);
    CHECK_THROWS_AS(split_step_evolve(psi, 1000.0, 1e-3, 1, {}), DomainError);
    const RealField mismatched = quanton::testing::make_real(Grid(Grid1D::periodic(0.0, 1.0, 1024)),
                                                             [](double, double) { return 0.0; });
    CHECK_THROWS_AS(split_step_evolve(psi, mismatched, 1e-3, 1, {}), DomainError);
    const Grid1D ax = Grid1D::spanning(0, 1, 8);
    const ComplexField flat2d = quanton::testing::make_complex(Grid(Grid2D{ax, ax}), [](double, double) { return cplx{1, 0}; });
    CHECK_THROWS_AS(split_step_evolve(flat2d, 0.0, 1e-3, 1, {}), DomainError);
}

TEST_CASE("tube_transmit_packet: exact model reproduces the mode-matching phase") {
    const Wavepacket w{0.0, 100.0, 0.05, Grid1D::periodic(-81.92, 163.84, 32768)};
    const TubeConfig tube{1.0, 100.0, 1, 1, 100.0};
    const ComplexField in = w.sample({});
    const ComplexField exact = tube_transmit_packet(w, tube, {}, TransmissionModel::exact);
    const ComplexField first = tube_transmit_packet(w, tube, {}, TransmissionModel::first_order);

    const double phi_exact = extract_phase_shift(in, exact);
    const double phi_first = extract_phase_shift(in, first);
    // -(p - p') L mod 2 pi at the packet centre
    CHECK(std::abs(wrap_phase(phi_exact - 2.6918909458336081)) <= 0.01);
    CHECK(std::abs(wrap_phase(phi_exact + exact_tube_action(tube, {}).phase_rad)) <= 0.01);
    CHECK(std::abs(wrap_phase(phi_first + levy_leblond_action(tube, {}).phase_rad)) <= 0.01);

    const double e_t = transverse_energy(1, 1, 1.0, {});
    const double oracle_exact = packet_phase_oracle(100.0, 0.05, [&](double p) {
        return 2 * e_t / (p + std::sqrt(p * p - 2 * e_t)) * 100.0;
    });
    const double oracle_first = packet_phase_oracle(100.0, 0.05, [&](double p) { return e_t * 100.0 / p; });
    CHECK(std::abs(wrap_phase(phi_exact - oracle_exact)) <= 1e-9);
    CHECK(std::abs(wrap_phase(phi_first - oracle_first)) <= 1e-9);
    // The two models differ by (exact - first order) action at the centre.
    CHECK(wrap_phase(phi_first - phi_exact) == doctest::Approx(0.0048752674).epsilon(1e-4));

    // A pure phase per momentum component leaves the spectrum and the norm untouched.
    const std::vector<double> before = momentum_amplitudes(in);
    const std::vector<double> after = momentum_amplitudes(exact);
    double peak = 0.0, dev = 0.0;
    for (std::size_t j = 0; j < before.size(); ++j) {
        peak = std::max(peak, before[j]);
        dev = std::max(dev, std::abs(before[j] - after[j]));
    }
    CHECK(dev <= 1e-10 * peak);
    CHECK(field_norm(exact) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tube_transmit_packet: zero length and evanescent packets") {
    const Wavepacket w{0.0, 20.0, 0.5, Grid1D::periodic(-32.0, 64.0, 2048)};
    const ComplexField in = w.sample({});
    const ComplexField through = tube_transmit_packet(w, {1.0, 0.0, 1, 1, 20.0}, {}, TransmissionModel::exact);
    CHECK(max_abs_diff(in, through) == 0.0);

    // Cutoff for a = 1, (1,1): sqrt(2) pi = 4.44; the packet reaches down to 20 - 4 * 4 = 4.
    const Wavepacket straddling{0.0, 20.0, 4.0, Grid1D::periodic(-32.0, 64.0, 4096)};
    CHECK_THROWS_WITH_AS(tube_transmit_packet(straddling, {1.0, 1.0, 1, 1, 20.0}, {}, TransmissionModel::exact),
                         doctest::Contains("evanescent components"), PhysicsError);
    const Wavepacket odd{0.0, 20.0, 0.5, Grid1D::periodic(-32.0, 64.0, 2000)};
    CHECK_THROWS_AS(tube_transmit_packet(odd, {1.0, 1.0, 1, 1, 20.0}, {}, TransmissionModel::exact), DomainError);
}

TEST_CASE("extract_phase_shift examples") {
    const ComplexField psi = small_packet().sample({});
    auto rotated = [&](double phase) {
        std::vector<cplx> v(psi.samples().begin(), psi.samples().end());
        for (auto& z : v) z *= std::polar(2.5, phase);
        return ComplexField(psi.grid(), std::move(v));
    };
    CHECK(extract_phase_shift(psi, psi) == 0.0);
    CHECK(extract_phase_shift(psi, rotated(0.3)) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(extract_phase_shift(psi, rotated(-2.0)) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(extract_phase_shift(psi, rotated(7.0)) == doctest::Approx(7.0 - 2 * pi).epsilon(1e-13));
    CHECK(extract_phase_shift(psi, rotated(pi)) == doctest::Approx(pi).epsilon(1e-14));

    const ComplexField far = small_packet(20.0).sample({});
    CHECK_THROWS_WITH_AS(extract_phase_shift(psi, far), doctest::Contains("fields orthogonal"), PhysicsError);
    const ComplexField other = Wavepacket{0.0, 5.0, 0.5, Grid1D::periodic(-32.0, 64.0, 2048)}.sample({});
    CHECK_THROWS_AS(extract_phase_shift(psi, other), DomainError);
}

TEST_CASE("momentum_amplitudes of a plane wave is one bin of height N") {
    const Grid1D g = Grid1D::periodic(0.0, 2 * pi, 32);
    const ComplexField psi = quanton::testing::make_complex(g, [](double x, double) { return std::polar(1.0, 3 * x); });
    const std::vector<double> a = momentum_amplitudes(psi);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(j == 3 ? 32.0 : 0.0).scale(1.0).epsilon(1e-12));
}
