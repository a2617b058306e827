// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quanton/cli.hpp"
#include "quanton/interferometer.hpp"
#include "quanton/parallel_transport.hpp"
#include "quanton/phase_laws.hpp"
#include "quanton/propagator.hpp"
#include "quanton/quantum_potential.hpp"

using namespace quanton;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

double max_q_error(const QField& qf, double expected) {
    double err = 0.0;
    for (std::size_t i = 0; i < qf.q_values.size(); ++i) {
        if (qf.valid[i]) err = std::max(err, std::abs(qf.q_values[i] - expected));
    }
    return err;
}

WaveSeries rotating(const RealField& r, double q, double dt, std::size_t frames) {
    std::vector<double> times;
    std::vector<ComplexField> fs;
    for (std::size_t k = 0; k < frames; ++k) {
        const double t = static_cast<double>(k) * dt;
        std::vector<cplx> v(r.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = r[i] * std::polar(1.0, -q * t);
        times.push_back(t);
        fs.emplace_back(r.grid(), std::move(v));
    }
    return {std::move(times), std::move(fs)};
}

RealField tube_ground(std::size_t points) {
    const Grid1D axis = Grid1D::spanning(0.0, 1.0, points);
    return tube_mode_field({1.0, 1.0, 1, 1, 10.0}, {axis, axis});
}

double max_density(const RealField& r) {
    double m = 0.0;
    for (double v : r.samples()) m = std::max(m, v * v);
    return m;
}

Verdict criterion1() {
    const TubeConfig t100{1.0, 100.0, 1, 1, 100.0};
    const TubeConfig t200{1.0, 100.0, 1, 1, 200.0};
    const double ll = levy_leblond_action(t100, {}).action;
    const double ex = exact_tube_action(t100, {}).action;
    const double gap = (ex - ll) / ll;
    const double gap200 = (exact_tube_action(t200, {}).action - levy_leblond_action(t200, {}).action) /
                          levy_leblond_action(t200, {}).action;
    // Independent oracle: (p - sqrt(p^2 - 2 pi^2)) L in long double.
    const long double p = 100.0L;
    const long double pi_l = 3.14159265358979323846264338327950288L;
    const double oracle = static_cast<double>((p - std::sqrt(p * p - 2.0L * pi_l * pi_l)) * 100.0L);
    const bool ok = std::abs(ll - pi * pi) <= 1e-12 * pi * pi && std::abs(ex - oracle) <= 1e-12 * oracle &&
                    std::abs(ex - 9.874466) <= 1e-5 * ex && gap >= 4.5e-4 && gap <= 5.5e-4 &&
                    gap / gap200 >= 3.6 && gap / gap200 <= 4.4;
    return {ok, fmt("first_order=%.15f exact=%.15f (oracle %.15f) gap=%.6e gap_ratio(p->2p)=%.5f", ll, ex, oracle,
                    gap, gap / gap200)};
}

Verdict criterion2() {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
        // first half uniform, second half log-uniform over [0.1, 1000]
        auto draw = [&] {
            return trial < 1000 ? std::uniform_real_distribution<double>(0.1, 1000.0)(rng) : log_uniform(rng, 0.1, 1000.0);
        };
        const double p = draw(), a = draw(), length = draw();
        const double composed = q_tube_analytic(a, 1, 1, {}) * traversal_time(length, p, {});
        const double direct = levy_leblond_action({a, length, 1, 1, p}, {}).action;
        worst = std::max(worst, std::abs(composed - direct) / std::abs(direct));
    }
    return {worst <= 1e-12, fmt("2000 random (p, a, L): max relative difference %.3e", worst)};
}

Verdict criterion3() {
    const QField tube = q_field_numeric(tube_ground(401), {});
    const UniformityReport tu = q_uniformity_check(tube, 1e-2);
    const CircleConfig circle{1.0, HalfInteger(1), 1.0};
    const QField circ = q_field_numeric(circle_mode_field(circle, Grid1D::spanning(0.0, 2 * pi, 4096)), {});
    const UniformityReport cu = q_uniformity_check(circ, 1e-2);

    std::vector<double> tube_err, circle_err;
    for (std::size_t n : {51u, 101u, 201u, 401u}) {
        tube_err.push_back(max_q_error(q_field_numeric(tube_ground(n), {}), pi * pi));
    }
    for (std::size_t n : {513u, 1025u, 2049u, 4097u}) {
        circle_err.push_back(max_q_error(q_field_numeric(circle_mode_field(circle, Grid1D::spanning(0.0, 2 * pi, n)), {}), 0.125));
    }
    bool rates_ok = true;
    std::string rates;
    for (const auto* errs : {&tube_err, &circle_err}) {
        for (std::size_t i = 1; i < errs->size(); ++i) {
            const double ratio = (*errs)[i - 1] / (*errs)[i];
            rates_ok = rates_ok && ratio >= 3.5 && ratio <= 4.5;
            rates += fmt(" %.4f", ratio);
        }
        rates += errs == &tube_err ? " |" : "";
    }
    const bool ok = std::abs(tu.mean - pi * pi) <= 1e-3 && tu.max_deviation <= 1e-2 &&
                    std::abs(cu.mean - 0.125) <= 1e-5 && rates_ok;
    return {ok, fmt("tube mean=%.9f maxdev=%.3e; circle mean=%.11f; rates tube|circle:%s", tu.mean, tu.max_deviation,
                    cu.mean, rates.c_str())};
}

Verdict criterion4() {
    const RealField r = tube_ground(101);
    const WaveSeries s = rotating(r, pi * pi, 1e-4, 64);
    const double rmax = max_density(r);
    const TransportReport qp5 = qp_transport_residual(s, pi * pi, {}, TimeStencil::central5);
    const TransportReport qp3 = qp_transport_residual(s, pi * pi, {}, TimeStencil::central3);
    const TransportReport simon = simon_residual(s, TimeStencil::central5);
    const double simon_rel = simon.max_residual / (pi * pi * rmax);
    const bool ok = qp5.max_residual <= 1e-6 * rmax && std::abs(simon_rel - 1.0) <= 1e-2;
    return {ok, fmt("qp residual (5-point)=%.3e max|R|^2 [3-point: %.6e]; simon/(Q max|R|^2)=%.8f",
                    qp5.max_residual / rmax, qp3.max_residual / rmax, simon_rel)};
}

Verdict criterion5() {
    const WaveSeries s = rotating(tube_ground(101), pi * pi, 1e-4, 64);
    const double dev = action_rate_check(s, pi * pi, {});
    return {dev <= 1e-5 && dev / (pi * pi) <= 1e-6, fmt("max |dS/dt + Q|=%.3e (%.3e of Q)", dev, dev / (pi * pi))};
}

Verdict criterion6() {
    const Wavepacket w{0.0, 10.0, 0.5, Grid1D::periodic(-64.0, 128.0, 4096)};
    const ComplexField psi = w.sample({});
    const PropagationRun free = split_step_evolve(psi, 0.0, 1e-3, 1000, {});
    const PropagationRun with_v = split_step_evolve(psi, pi * pi, 1e-3, 1000, {});
    const cplx factor = std::polar(1.0, -pi * pi);
    double err = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        err = std::max(err, std::abs(with_v.final_frame()[i] - factor * free.final_frame()[i]));
    }
    const double drift = std::max(free.max_norm_drift, with_v.max_norm_drift);
    return {err <= 1e-10 && drift <= 1e-10, fmt("pointwise error=%.3e norm drift=%.3e", err, drift)};
}

Verdict criterion7() {
    const Wavepacket w{0.0, 100.0, 0.05, Grid1D::periodic(-81.92, 163.84, 32768)};
    const TubeConfig tube{1.0, 100.0, 1, 1, 100.0};
    const double measured = extract_phase_shift(w.sample({}), tube_transmit_packet(w, tube, {}, TransmissionModel::exact));
    const double expected = wrap_phase(-exact_tube_action(tube, {}).phase_rad);
    const double miss = std::abs(wrap_phase(measured - expected));
    return {miss <= 0.01, fmt("packet phase=%.10f expected=%.10f difference=%.3e rad", measured, expected, miss)};
}

Verdict criterion8() {
    const double action = circle_action({1.0, HalfInteger(1), 10.0}, {}).action;
    TwoPathConfig cfg;
    cfg.circle = {1.0, HalfInteger(1), 10.0};
    const SweepRange range{0.9, 1.1, 401};
    const FringeScan with_q = fringe_scan(cfg, SweepParameter::rho0, range, {});
    TwoPathConfig no_q = cfg;
    no_q.include_quantum_potential = false;
    const FringeScan without_q = fringe_scan(no_q, SweepParameter::rho0, range, {});

    auto bisect = [](const TwoPathConfig& c, long k) {
        double lo = 0.9, hi = 1.1;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            TwoPathConfig m = c;
            m.circle.rho0 = mid;
            (path_phase_difference(m, {}) < 2 * pi * static_cast<double>(k) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    double root_err = 0.0, shift_err = 0.0;
    int compared = 0;
    for (const FringeMaximum& m : with_q.maxima) root_err = std::max(root_err, std::abs(m.value - bisect(cfg, m.order)));
    for (const FringeMaximum& m : without_q.maxima) root_err = std::max(root_err, std::abs(m.value - bisect(no_q, m.order)));
    for (const FringeMaximum& m : with_q.maxima) {
        for (const FringeMaximum& w : without_q.maxima) {
            if (w.order != m.order) continue;
            const double k = static_cast<double>(m.order);
            const double offset = (std::sqrt(k * k + 0.5) - k) / 20.0;  // hbar (sqrt(k^2 + 2 n^2) - k) / (2 p)
            shift_err = std::max(shift_err, std::abs((m.value - w.value) - offset));
            ++compared;
        }
    }
    const bool ok = std::abs(action - pi / 40) <= 1e-12 * pi / 40 && !with_q.maxima.empty() && compared > 0 &&
                    root_err <= 1e-9 && shift_err <= 1e-9;
    return {ok, fmt("circle action=%.15f; %zu maxima, max |root - bisection|=%.2e; %d shifts, max offset error=%.2e",
                    action, with_q.maxima.size(), root_err, compared, shift_err)};
}

Verdict criterion9() {
    std::mt19937_64 rng(9);
    double worst_excess = -INFINITY;
    for (int trial = 0; trial < 1000; ++trial) {
        const double hbar = log_uniform(rng, 0.1, 10.0);
        const double rho0 = log_uniform(rng, 1e-3, 1e3);
        const double p = hbar * log_uniform(rng, 1.0, 1e6) / rho0;
        const double action = circle_action({rho0, HalfInteger(1), p}, {hbar, 1.0}).action;
        worst_excess = std::max(worst_excess, action - pi * hbar / 4);
    }
    double approach = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double action = circle_action({1.0, HalfInteger(1), 1.0 + eps}, {}).action;
        approach = std::abs(pi / 4 - action);
        if (approach > eps) return {false, fmt("no approach to the bound at rho0 p = 1 + %.0e", eps)};
    }
    return {worst_excess <= 1e-12, fmt("max (action - pi hbar/4)=%.3e; gap at rho0 p = 1 + 1e-8: %.3e",
                                       worst_excess, approach)};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict criterion10() {
    const std::vector<std::string> args = {"tube-phase", "--p", "100", "--a", "1", "--L", "100", "--nx", "1", "--ny", "1"};
    std::ostringstream first, second, err;
    const int s1 = cli::run(args, first, err);
    const int s2 = cli::run(args, second, err);
    const std::string golden = slurp(std::filesystem::path(QUANTON_GOLDEN_DIR) / "tube_phase_p100_a1_L100.json");
    const bool ok = s1 == 0 && s2 == 0 && first.str() == second.str() && !golden.empty() && first.str() == golden;
    return {ok, fmt("two runs identical: %s; golden record (%zu bytes) identical: %s",
                    first.str() == second.str() ? "yes" : "no", golden.size(), first.str() == golden ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::function<Verdict()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                             criterion6, criterion7, criterion8, criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds >= 10.0) {
            v.pass = false;
            v.detail += fmt(" [over time budget: %.1f s]", seconds);
        }
        std::printf("criterion %2zu: %s  %s  (%.2f s)\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds);
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
