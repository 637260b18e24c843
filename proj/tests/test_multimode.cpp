#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qosc/errors.hpp"
#include "qosc/multimode.hpp"
#include "qosc/tridiag.hpp"
#include "test_helpers.hpp"

using namespace qosc;

namespace {

ThreeModeSystem star_const(double g, double gp, double w0 = 1.0) {
    return ThreeModeSystem(w0, CouplingSchedule::constant(g),
                           CouplingSchedule::constant(gp));
}

}  // namespace

TEST_CASE("three-mode decomposition: equal couplings give the half/sqrt2 pattern") {
    const auto dec = three_mode_decomposition(star_const(0.4, 0.4), 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(dec.entry(0, 0) == doctest::Approx(-r));
    CHECK(dec.entry(1, 0) == doctest::Approx(0.5));
    CHECK(dec.entry(2, 0) == doctest::Approx(0.5));
    CHECK(dec.entry(0, 1) == doctest::Approx(0.0));
    CHECK(dec.entry(1, 1) == doctest::Approx(-r));
    CHECK(dec.entry(2, 1) == doctest::Approx(r));
    CHECK(dec.entry(0, 2) == doctest::Approx(r));
    CHECK(dec.entry(1, 2) == doctest::Approx(0.5));
    CHECK(dec.entry(2, 2) == doctest::Approx(0.5));
}

TEST_CASE("three-mode eigenvalues are omega0 -+ G3 with a Pythagorean pair") {
    const auto dec = three_mode_decomposition(star_const(3.0, 4.0, 10.0), 0.0);
    CHECK(dec.lambdas[0] == doctest::Approx(5.0));
    CHECK(dec.lambdas[1] == doctest::Approx(10.0));
    CHECK(dec.lambdas[2] == doctest::Approx(15.0));
}

TEST_CASE("three-mode T is orthogonal and diagonalizes the coupling matrix") {
    for (int trial = 0; trial < 100; ++trial) {
        const double g = qtest::uniform(-1.5, 1.5);
        const double gp = qtest::uniform(-1.5, 1.5);
        if (std::hypot(g, gp) < 1e-6) continue;
        const double w0 = qtest::uniform(0.5, 3.0);
        const auto dec = three_mode_decomposition(star_const(g, gp, w0), 0.0);
        CHECK(dec.orthogonality_residual() < 1e-14);

        // T^t Gamma T must reproduce diag(lambdas) to 1e-10.
        const double gamma[3][3] = {{w0, g, gp}, {g, w0, 0.0}, {gp, 0.0, w0}};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                double acc = 0.0;
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) {
                        acc += dec.entry(i, a) * gamma[i][j] * dec.entry(j, b);
                    }
                }
                const double expected = (a == b) ? dec.lambdas[a] : 0.0;
                CHECK(std::abs(acc - expected) < 1e-10);
            }
        }
        // Spectrum symmetric about omega0.
        CHECK(dec.lambdas[0] + dec.lambdas[2] == doctest::Approx(2.0 * w0).epsilon(1e-12));
    }
}

TEST_CASE("degenerate couplings: identity decomposition or a loud error") {
    ThreeModeSystem dead(1.0, CouplingSchedule::constant(0.0),
                         CouplingSchedule::constant(0.0));
    const auto dec = three_mode_decomposition(dead, 0.5);
    CHECK(dec.entry(0, 0) == 1.0);
    CHECK(dec.lambdas[1] == doctest::Approx(1.0));

    // Couplings that die out mid-evolution make T ill-defined at large t.
    ThreeModeSystem crossing(1.0, CouplingSchedule::switched(1.0, 1.0),
                             CouplingSchedule::switched(1.0, 1.0));
    CHECK_THROWS_AS(three_mode_decomposition(crossing, 2.0), DegenerateCouplingError);
}

TEST_CASE("single excitation: start, probability law, equal splitting") {
    const auto sys = star_const(0.3, 0.4);
    {
        const auto amps = single_excitation_state(sys, 0.0);
        CHECK(std::abs(amps[0] - std::complex<double>{1.0, 0.0}) < 1e-15);
        CHECK(std::abs(amps[1]) < 1e-15);
        CHECK(std::abs(amps[2]) < 1e-15);
    }
    const double G = 0.5;
    for (double t : {0.3, 1.1, 2.6}) {
        const auto amps = single_excitation_state(sys, t);
        const double eta = G * t;
        CHECK(std::norm(amps[0]) == doctest::Approx(std::pow(std::cos(eta), 2)).epsilon(1e-12));
        CHECK(std::norm(amps[1]) == doctest::Approx(0.36 * std::pow(std::sin(eta), 2)).epsilon(1e-12));
        CHECK(std::norm(amps[2]) == doctest::Approx(0.64 * std::pow(std::sin(eta), 2)).epsilon(1e-12));
    }
    // Equal couplings at eta = pi/2: quantum fully leaves a, splitting evenly.
    const auto eq = star_const(0.5, 0.5);
    const double t_half = (M_PI / 2.0) / std::hypot(0.5, 0.5);
    const auto amps = single_excitation_state(eq, t_half);
    CHECK(std::abs(amps[0]) < 1e-12);
    CHECK(std::norm(amps[1]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(amps[2]) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("multinomial probabilities: n = 1 reduction, normalization, n = 2 entry") {
    const auto sys = star_const(0.3, 0.4);
    const double t = 1.7;
    const auto amps = single_excitation_state(sys, t);
    const auto p1 = multinomial_probabilities(1, sys, t);
    CHECK(p1.at({1, 0, 0}) == doctest::Approx(std::norm(amps[0])).epsilon(1e-12));
    CHECK(p1.at({0, 1, 0}) == doctest::Approx(std::norm(amps[1])).epsilon(1e-12));
    CHECK(p1.at({0, 0, 1}) == doctest::Approx(std::norm(amps[2])).epsilon(1e-12));

    for (int n : {2, 3, 5}) {
        const auto pn = multinomial_probabilities(n, sys, t);
        double total = 0.0;
        for (const auto& [occ, p] : pn) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    const double eta = 0.5 * t;
    const auto p2 = multinomial_probabilities(2, sys, t);
    CHECK(p2.at({1, 1, 0}) ==
          doctest::Approx(2.0 * std::pow(std::cos(eta), 2) * 0.36 *
                          std::pow(std::sin(eta), 2))
              .epsilon(1e-12));
}

TEST_CASE("three-mode collapses to the two-mode resonance when g' vanishes") {
    ThreeModeSystem sys(1.0, CouplingSchedule::constant(0.7),
                        CouplingSchedule::constant(0.0));
    for (double t : {0.5, 1.9}) {
        const auto amps = single_excitation_state(sys, t);
        CHECK(std::norm(amps[0]) == doctest::Approx(std::pow(std::cos(0.7 * t), 2)).epsilon(1e-12));
        CHECK(std::norm(amps[1]) == doctest::Approx(std::pow(std::sin(0.7 * t), 2)).epsilon(1e-12));
        CHECK(std::abs(amps[2]) < 1e-15);
    }
}

TEST_CASE("tridiagonal QL solver matches hand eigensystems") {
    // 2x2: eigenvalues w -+ g.
    {
        const auto eig = tridiag_eigen_ql({1.0, 1.0}, {0.4});
        CHECK(eig.lambdas[0] == doctest::Approx(0.6));
        CHECK(eig.lambdas[1] == doctest::Approx(1.4));
        // First nonzero component positive.
        CHECK(eig.vec(0, 0) > 0.0);
        CHECK(eig.vec(0, 1) > 0.0);
    }
    // 3x3 chain (g1, g2): spectrum {w, w -+ sqrt(g1^2 + g2^2)}.
    {
        const auto eig = tridiag_eigen_ql({2.0, 2.0, 2.0}, {0.3, 0.4});
        CHECK(eig.lambdas[0] == doctest::Approx(1.5));
        CHECK(eig.lambdas[1] == doctest::Approx(2.0));
        CHECK(eig.lambdas[2] == doctest::Approx(2.5));
    }
}

TEST_CASE("chain decomposition: reconstruction and determinism") {
    for (int trial = 0; trial < 40; ++trial) {
        const int modes = qtest::uniform_int(2, 9);
        std::vector<CouplingSchedule> couplings;
        std::vector<double> g(static_cast<std::size_t>(modes - 1));
        for (int k = 0; k < modes - 1; ++k) {
            g[static_cast<std::size_t>(k)] = qtest::uniform(-1.0, 1.0);
            couplings.push_back(CouplingSchedule::constant(g[static_cast<std::size_t>(k)]));
        }
        ChainSystem sys(1.0, couplings);
        const auto dec = chain_decomposition(sys, 0.0);
        CHECK(dec.orthogonality_residual() < 1e-12);
        for (int a = 0; a < modes; ++a) {
            for (int b = 0; b < modes; ++b) {
                double acc = 0.0;
                for (int i = 0; i < modes; ++i) {
                    double gi = 0.0;  // (Gamma T)_{i b}
                    gi += 1.0 * dec.entry(i, b);
                    if (i > 0) gi += g[static_cast<std::size_t>(i - 1)] * dec.entry(i - 1, b);
                    if (i + 1 < modes) gi += g[static_cast<std::size_t>(i)] * dec.entry(i + 1, b);
                    acc += dec.entry(i, a) * gi;
                }
                const double expected = (a == b) ? dec.lambdas[a] : 0.0;
                CHECK(std::abs(acc - expected) < 1e-10);
            }
        }
        // Deterministic output: rerun gives the identical decomposition.
        const auto dec2 = chain_decomposition(sys, 0.0);
        for (std::size_t i = 0; i < dec.T.size(); ++i) CHECK(dec.T[i] == dec2.T[i]);
    }
}

TEST_CASE("uncoupled chain decomposes to the identity") {
    ChainSystem sys(1.0, {CouplingSchedule::constant(0.0), CouplingSchedule::constant(0.0)});
    const auto dec = chain_decomposition(sys, 0.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(dec.lambdas[i] == doctest::Approx(1.0));
        for (int j = 0; j < 3; ++j) {
            CHECK(dec.entry(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("equal-coupling chain spectrum is symmetric about omega0") {
    const int modes = 6;
    std::vector<CouplingSchedule> couplings(modes - 1, CouplingSchedule::constant(0.5));
    ChainSystem sys(2.0, couplings);
    const auto dec = chain_decomposition(sys, 0.0);
    for (int k = 0; k < modes; ++k) {
        CHECK(dec.lambdas[k] + dec.lambdas[modes - 1 - k] ==
              doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("chain single excitation: start, two-mode reduction, unitarity") {
    {
        ChainSystem two(1.0, {CouplingSchedule::constant(0.8)});
        const auto at0 = chain_single_excitation_amplitudes(two, 0, 0.0);
        CHECK(std::abs(at0[0] - std::complex<double>{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(at0[1]) < 1e-12);
        for (double t : {0.4, 1.3}) {
            const auto amps = chain_single_excitation_amplitudes(two, 0, t);
            const std::complex<double> rot = std::exp(std::complex<double>(0.0, -t));
            CHECK(std::abs(amps[0] - rot * std::cos(0.8 * t)) < 1e-12);
            CHECK(std::abs(amps[1] - rot * std::complex<double>(0.0, -1.0) * std::sin(0.8 * t)) <
                  1e-12);
        }
    }
    {
        std::vector<CouplingSchedule> couplings(4, CouplingSchedule::constant(0.6));
        ChainSystem five(1.0, couplings);
        for (double t : {0.7, 2.9, 8.3}) {
            const auto amps = chain_single_excitation_amplitudes(five, 2, t);
            double total = 0.0;
            for (const auto& a : amps) total += std::norm(a);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("chain multinomial: n = 1 squares and full normalization") {
    std::vector<CouplingSchedule> couplings = {CouplingSchedule::constant(0.5),
                                               CouplingSchedule::constant(0.3)};
    ChainSystem sys(1.0, couplings);
    const double t = 1.9;
    const auto amps = chain_single_excitation_amplitudes(sys, 0, t);
    const auto p1 = chain_multinomial_probabilities(1, sys, 0, t);
    CHECK(p1.at({1, 0, 0}) == doctest::Approx(std::norm(amps[0])).epsilon(1e-12));
    CHECK(p1.at({0, 1, 0}) == doctest::Approx(std::norm(amps[1])).epsilon(1e-12));
    CHECK(p1.at({0, 0, 1}) == doctest::Approx(std::norm(amps[2])).epsilon(1e-12));
    for (int n : {2, 4}) {
        const auto pn = chain_multinomial_probabilities(n, sys, 0, t);
        double total = 0.0;
        for (const auto& [occ, p] : pn) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("chain closed forms refuse time-dependent couplings") {
    ChainSystem sys(1.0, {CouplingSchedule::exp_decay(1.0, 1.0)});
    CHECK_THROWS_AS(chain_single_excitation_amplitudes(sys, 0, 1.0), UnsupportedConfigError);
}

TEST_CASE("constant ratio check flags mismatched envelopes") {
    ThreeModeSystem same_env(1.0, CouplingSchedule::exp_decay(0.5, 1.0),
                             CouplingSchedule::exp_decay(0.8, 1.0));
    CHECK(same_env.constant_coupling_ratio(0.0, 4.0));
    ThreeModeSystem diff_env(1.0, CouplingSchedule::exp_decay(0.5, 1.0),
                             CouplingSchedule::exp_decay(0.5, 2.5));
    CHECK_FALSE(diff_env.constant_coupling_ratio(0.0, 4.0));
}
