#include "qosc/two_mode.hpp"

#include <cmath>

#include "qosc/combinatorics.hpp"
#include "qosc/errors.hpp"

namespace qosc {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_n(int n) {
    if (n < 0) throw std::invalid_argument("excitation count n must be >= 0");
}

void require_resonant(const TwoModeSystem& system, const char* op) {
    if (!system.resonant()) {
        throw UnsupportedConfigError(std::string(op) +
                                     ": derived on resonance only (delta = 0); "
                                     "route off-resonance coherent input to the oracle");
    }
}

}  // namespace

double ReducedDensityMatrix::trace_real() const {
    double tr = 0.0;
    for (int i = 0; i < dim; ++i) tr += (*this)(i, i).real();
    return tr;
}

TransferAmplitudes transfer_amplitudes(const TwoModeSystem& system, double t, double tol) {
    const PhaseIntegrals ph = phase_integrals(system, t, tol);
    if (system.resonant()) {
        // theta = pi/4 diagonalizes for every g on resonance, so the closed
        // form stays exact across switch-offs where atan2 would jump.
        const Complex rot = std::exp(-kI * (system.omega0() * t));
        return {rot * std::cos(ph.G), -kI * rot * std::sin(ph.G)};
    }
    const double theta = mixing_angle(system, t);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex ea = std::exp(-kI * ph.f_A);
    const Complex eb = std::exp(-kI * ph.f_B);
    return {c * c * ea + s * s * eb, s * c * (eb - ea)};
}

WalkWeights walk_weights(const TwoModeSystem& system, double t, double tol) {
    if (system.resonant()) {
        const double G = accumulated_coupling(system.schedule(), t);
        const double sg = std::sin(G);
        const double p = sg * sg;
        return {1.0 - p, p};
    }
    const PhaseIntegrals ph = phase_integrals(system, t, tol);
    const double g = system.coupling(t);
    const double d2 = system.delta() * system.delta();
    const double denom = 4.0 * g * g + d2;
    const double sh = std::sin(0.5 * ph.delta_f);
    const double p = 4.0 * g * g * sh * sh / denom;
    return {1.0 - p, p};
}

BinomialStateCoefficients binomial_coefficients(int n, const TwoModeSystem& system,
                                                double t, double tol) {
    check_n(n);
    const TransferAmplitudes uv = transfer_amplitudes(system, t, tol);
    BinomialStateCoefficients out;
    out.n = n;
    out.t = t;
    out.coeffs.resize(static_cast<std::size_t>(n) + 1);
    for (int s = 0; s <= n; ++s) {
        out.coeffs[static_cast<std::size_t>(s)] = std::sqrt(binomial(n, s)) *
                                                  powi(uv.u, n - s) * powi(uv.v, s);
    }
    return out;
}

std::vector<double> occupation_probabilities(int n, const TwoModeSystem& system,
                                             double t, double tol) {
    check_n(n);
    const WalkWeights w = walk_weights(system, t, tol);
    std::vector<double> probs(static_cast<std::size_t>(n) + 1);
    for (int s = 0; s <= n; ++s) {
        probs[static_cast<std::size_t>(s)] =
            binomial(n, s) * powi(w.q, n - s) * powi(w.p, s);
    }
    return probs;
}

ReducedDensityMatrix reduced_density_fock(int n, const TwoModeSystem& system,
                                          double t, double tol) {
    check_n(n);
    const std::vector<double> probs = occupation_probabilities(n, system, t, tol);
    ReducedDensityMatrix rho;
    rho.dim = n + 1;
    rho.entries.assign(static_cast<std::size_t>(rho.dim) * rho.dim, Complex{0.0, 0.0});
    for (int s = 0; s <= n; ++s) {
        rho(n - s, n - s) = probs[static_cast<std::size_t>(s)];
    }
    return rho;
}

double mean_energy_fock(int n, const TwoModeSystem& system, double t, double tol) {
    check_n(n);
    return n * walk_weights(system, t, tol).q;
}

CoherentPair evolve_coherent(Complex alpha, const TwoModeSystem& system, double t,
                             double tol) {
    require_resonant(system, "evolve_coherent");
    const TransferAmplitudes uv = transfer_amplitudes(system, t, tol);
    return {alpha * uv.u, alpha * uv.v};
}

double mean_energy_coherent(Complex alpha, const TwoModeSystem& system, double t,
                            double tol) {
    require_resonant(system, "mean_energy_coherent");
    (void)tol;
    const double G = accumulated_coupling(system.schedule(), t);
    const double c = std::cos(G);
    return std::norm(alpha) * c * c;
}

double transfer_time(const TwoModeSystem& system) {
    if (!system.resonant() || !system.schedule().is_constant()) {
        throw UnsupportedConfigError(
            "transfer_time: defined for a constant coupling on resonance");
    }
    const double g0 = std::get<ConstantCoupling>(system.schedule().variant()).g0;
    if (!(g0 > 0.0)) {
        throw UnsupportedConfigError("transfer_time: requires g0 > 0");
    }
    return M_PI / (2.0 * g0);
}

}  // namespace qosc
