#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qosc/coupling.hpp"
#include "qosc/errors.hpp"
#include "qosc/quadrature.hpp"
#include "test_helpers.hpp"

using namespace qosc;

TEST_CASE("schedule evaluation matches the defining families") {
    CHECK(eval_coupling(CouplingSchedule::switched(1.0, 2.0), 1.0) == 1.0);
    CHECK(eval_coupling(CouplingSchedule::switched(1.0, 2.0), 3.0) == 0.0);
    CHECK(eval_coupling(CouplingSchedule::switched(1.0, 2.0), 2.0) == 1.0);  // on at t == tau
    CHECK(eval_coupling(CouplingSchedule::exp_decay(2.0, 1.0), 0.0) == 2.0);
    CHECK(eval_coupling(CouplingSchedule::constant(0.7), 123.0) == 0.7);

    const auto tab = CouplingSchedule::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    CHECK(eval_coupling(tab, 0.5) == doctest::Approx(0.5));
    CHECK(eval_coupling(tab, 1.5) == doctest::Approx(0.5));
    CHECK(eval_coupling(tab, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("schedule invariants are enforced") {
    CHECK_THROWS_AS(CouplingSchedule::switched(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CouplingSchedule::exp_decay(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(CouplingSchedule::tabulated({0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(CouplingSchedule::tabulated({0.0, 0.0}, {1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval_coupling(CouplingSchedule::tabulated({0.0, 1.0}, {1.0, 1.0}), 1.5),
                    RangeError);
}

TEST_CASE("two-mode system rejects negative detuning and bad frequencies") {
    CHECK_THROWS_AS(TwoModeSystem(2.0, 1.0, CouplingSchedule::constant(0.1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(TwoModeSystem(0.0, 1.0, CouplingSchedule::constant(0.1)),
                    std::invalid_argument);
}

TEST_CASE("eigenfrequencies: resonance, decoupled, and hand-evaluated cases") {
    {
        TwoModeSystem sys(1.0, 1.0, CouplingSchedule::constant(0.5));
        const auto ev = eigenfrequencies(sys, 0.0);
        CHECK(ev.lambda_A == doctest::Approx(0.5));
        CHECK(ev.lambda_B == doctest::Approx(1.5));
    }
    {
        TwoModeSystem sys(1.0, 2.0, CouplingSchedule::constant(0.0));
        const auto ev = eigenfrequencies(sys, 0.0);
        CHECK(ev.lambda_A == doctest::Approx(1.0));
        CHECK(ev.lambda_B == doctest::Approx(2.0));
    }
    {
        TwoModeSystem sys(1.0, 2.0, CouplingSchedule::constant(std::sqrt(3.0) / 2.0));
        const auto ev = eigenfrequencies(sys, 0.0);
        CHECK(ev.lambda_A == doctest::Approx(0.5));
        CHECK(ev.lambda_B == doctest::Approx(2.5));
    }
}

TEST_CASE("eigenfrequency identities hold for random systems") {
    for (int trial = 0; trial < 200; ++trial) {
        const double w0 = qtest::uniform(0.2, 3.0);
        const double delta = qtest::uniform(0.0, 2.0);
        const double g0 = qtest::uniform(0.0, 2.0);
        TwoModeSystem sys(w0, w0 + delta, CouplingSchedule::constant(g0));
        const double t = qtest::uniform(0.0, 10.0);
        const auto ev = eigenfrequencies(sys, t);
        CHECK(ev.lambda_A + ev.lambda_B == doctest::Approx(2.0 * sys.omega_bar()).epsilon(1e-13));
        CHECK(ev.lambda_B - ev.lambda_A ==
              doctest::Approx(2.0 * std::sqrt(g0 * g0 + delta * delta / 4.0)).epsilon(1e-13));
        CHECK(ev.lambda_B - ev.lambda_A >= delta - 1e-12);
        CHECK(ev.lambda_A <= ev.lambda_B);
    }
}

TEST_CASE("mixing angle branch and known values") {
    TwoModeSystem reso(1.0, 1.0, CouplingSchedule::constant(1.0));
    CHECK(mixing_angle(reso, 0.0) == doctest::Approx(M_PI / 4.0));

    TwoModeSystem detuned(1.0, 2.0, CouplingSchedule::constant(0.0));
    CHECK(mixing_angle(detuned, 0.0) == doctest::Approx(0.0));

    TwoModeSystem mixed(1.0, 3.0, CouplingSchedule::constant(1.0));  // delta=2, g=1
    CHECK(mixing_angle(mixed, 0.0) == doctest::Approx(M_PI / 8.0));

    TwoModeSystem dead(1.0, 1.0, CouplingSchedule::constant(0.0));
    CHECK(mixing_angle(dead, 0.0) == 0.0);
}

TEST_CASE("mixing angle is scale invariant in (g, delta)") {
    for (int trial = 0; trial < 100; ++trial) {
        const double delta = qtest::uniform(0.01, 2.0);
        const double g = qtest::uniform(0.0, 2.0);
        const double c = qtest::uniform(0.1, 10.0);
        TwoModeSystem a(1.0, 1.0 + delta, CouplingSchedule::constant(g));
        TwoModeSystem b(1.0, 1.0 + c * delta, CouplingSchedule::constant(c * g));
        CHECK(mixing_angle(a, 0.0) == doctest::Approx(mixing_angle(b, 0.0)).epsilon(1e-12));
    }
}

TEST_CASE("phase integrals: closed forms on resonance") {
    TwoModeSystem sys(1.0, 1.0, CouplingSchedule::constant(0.8));
    const double t = 2.5;
    const auto ph = phase_integrals(sys, t);
    CHECK(ph.delta_f == doctest::Approx(-2.0 * 0.8 * t).epsilon(1e-14));
    CHECK(ph.G == doctest::Approx(0.8 * t).epsilon(1e-14));
    CHECK(ph.f_A == doctest::Approx((1.0 - 0.8) * t).epsilon(1e-14));
    CHECK(ph.f_B == doctest::Approx((1.0 + 0.8) * t).epsilon(1e-14));
    CHECK(ph.delta_f == ph.f_A - ph.f_B);
}

TEST_CASE("phase integrals vanish at t = 0") {
    TwoModeSystem sys(1.0, 1.7, CouplingSchedule::exp_decay(0.4, 2.0));
    const auto ph = phase_integrals(sys, 0.0);
    CHECK(ph.f_A == 0.0);
    CHECK(ph.f_B == 0.0);
    CHECK(ph.delta_f == 0.0);
    CHECK(ph.G == 0.0);
    CHECK(ph.eta == 0.0);
}

TEST_CASE("exp-decay accumulated coupling matches the closed form") {
    const double g0 = 1.3, tau = 0.7;
    TwoModeSystem sys(1.0, 1.0, CouplingSchedule::exp_decay(g0, tau));
    for (double t : {0.1, 0.5, 2.0, 10.0}) {
        CHECK(phase_integrals(sys, t).G ==
              doctest::Approx(g0 * tau * (1.0 - std::exp(-t / tau))).epsilon(1e-13));
    }
}

TEST_CASE("switch phase integrals are piecewise exact") {
    const double g0 = 0.9, tau = 1.5, delta = 0.6;
    TwoModeSystem sys(1.0, 1.0 + delta, CouplingSchedule::switched(g0, tau));
    const double r_on = std::sqrt(g0 * g0 + delta * delta / 4.0);
    // Inside the on-window.
    CHECK(phase_integrals(sys, 1.0).delta_f == doctest::Approx(-2.0 * r_on).epsilon(1e-13));
    // After switch-off only the detuning contributes.
    const double t = 4.0;
    const auto ph = phase_integrals(sys, t);
    CHECK(ph.delta_f ==
          doctest::Approx(-2.0 * (r_on * tau + 0.5 * delta * (t - tau))).epsilon(1e-13));
    CHECK(ph.G == doctest::Approx(g0 * tau).epsilon(1e-13));
}

TEST_CASE("off-resonance exp decay integrals agree with a reference quadrature") {
    const double g0 = 1.1, tau = 0.9, delta = 0.8;
    TwoModeSystem sys(1.0, 1.0 + delta, CouplingSchedule::exp_decay(g0, tau));
    const double t = 3.0;
    const auto ph = phase_integrals(sys, t, 1e-12);
    const double ref = qtest::simpson_reference(
        [&](double tp) {
            const double g = g0 * std::exp(-tp / tau);
            return std::sqrt(g * g + delta * delta / 4.0);
        },
        0.0, t);
    CHECK(ph.delta_f == doctest::Approx(-2.0 * ref).epsilon(1e-10));
}

TEST_CASE("tabulated schedule reproducing a constant matches its closed form") {
    const double g0 = 0.75;
    std::vector<double> times, values;
    for (int i = 0; i <= 40; ++i) {
        times.push_back(0.25 * i);
        values.push_back(g0);
    }
    TwoModeSystem tab(1.0, 1.4, CouplingSchedule::tabulated(times, values));
    TwoModeSystem cst(1.0, 1.4, CouplingSchedule::constant(g0));
    for (double t : {0.3, 1.7, 6.2, 9.9}) {
        const auto pa = phase_integrals(tab, t, 1e-11);
        const auto pb = phase_integrals(cst, t, 1e-11);
        CHECK(pa.f_A == doctest::Approx(pb.f_A).epsilon(1e-10));
        CHECK(pa.f_B == doctest::Approx(pb.f_B).epsilon(1e-10));
        CHECK(pa.G == doctest::Approx(pb.G).epsilon(1e-12));
    }
}

TEST_CASE("delta_f is non-increasing in t") {
    TwoModeSystem sys(1.0, 1.9, CouplingSchedule::exp_decay(1.2, 1.1));
    double prev = 0.0;
    for (int i = 1; i <= 60; ++i) {
        const double t = 0.15 * i;
        const double df = phase_integrals(sys, t).delta_f;
        CHECK(df <= prev + 1e-14);
        prev = df;
    }
}

TEST_CASE("theta_dot_bound vanishes in the exact regimes") {
    TwoModeSystem reso(1.0, 1.0, CouplingSchedule::exp_decay(1.0, 1.0));
    CHECK(theta_dot_bound(reso, 0.0, 2.0) == 0.0);
    TwoModeSystem cst(1.0, 2.0, CouplingSchedule::constant(0.8));
    CHECK(theta_dot_bound(cst, 0.0, 2.0) == 0.0);
}

TEST_CASE("theta_dot_bound tracks the analytic derivative for exp decay") {
    // theta(t) = atan(2 g0 e^{-t} / delta) / 2 with delta = 1 peaks at
    // |theta_dot| = 1/4 (at 2 g e^{-t} = 1).
    TwoModeSystem sys(1.0, 2.0, CouplingSchedule::exp_decay(1.0, 1.0));
    const double bound = theta_dot_bound(sys, 0.0, 2.0);
    CHECK(bound > 0.0);
    CHECK(bound == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("adaptive Simpson handles smooth and oscillatory integrands") {
    const double v = adaptive_simpson<double>([](double x) { return std::exp(x); }, 0.0,
                                              1.0, 1e-12);
    CHECK(v == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    const std::complex<double> w = adaptive_simpson<std::complex<double>>(
        [](double x) { return std::exp(std::complex<double>(0.0, 10.0 * x)); }, 0.0, 1.0,
        1e-12);
    const std::complex<double> expected =
        (std::exp(std::complex<double>(0.0, 10.0)) - 1.0) / std::complex<double>(0.0, 10.0);
    CHECK(std::abs(w - expected) < 1e-11);
}
