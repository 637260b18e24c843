// two_mode.hpp — closed-form evolution of the undriven two-mode system:
// binomial states from Fock input, reduced density matrices, mode energies,
// coherent-state transfer, and the decaying-coupling rectification scheme.
#pragma once

#include <complex>
#include <vector>

#include "qosc/coupling.hpp"

namespace qosc {

using Complex = std::complex<double>;

// Amplitudes C_{n-s,s}(t) of the evolved state sum_s C_{n-s,s} |n-s>_a |s>_b
// for the initial state |n>_a |0>_b. coeffs[s] is C_{n-s,s}.
struct BinomialStateCoefficients {
    int n = 0;
    double t = 0.0;
    std::vector<Complex> coeffs;
};

// Reduced density matrix of one mode in its Fock basis, row-major.
struct ReducedDensityMatrix {
    int dim = 0;
    std::vector<Complex> entries;

    Complex operator()(int p, int q) const {
        return entries[static_cast<std::size_t>(p) * dim + q];
    }
    Complex& operator()(int p, int q) {
        return entries[static_cast<std::size_t>(p) * dim + q];
    }
    double trace_real() const;
};

// Single-quantum transfer amplitudes: the evolved creation operator is
// U a^dag U^dag = u a^dag + v b^dag. Everything in this module reduces to
// powers of (u, v).
struct TransferAmplitudes {
    Complex u;  // stays on the a-mode, |u|^2 = q(t)
    Complex v;  // hops to the b-mode,  |v|^2 = p(t)
};

TransferAmplitudes transfer_amplitudes(const TwoModeSystem& system, double t,
                                       double tol = kDefaultQuadTol);

// Binomial-walk weights (q, p) with q + p = 1.
struct WalkWeights {
    double q = 1.0;
    double p = 0.0;
};

WalkWeights walk_weights(const TwoModeSystem& system, double t,
                         double tol = kDefaultQuadTol);

BinomialStateCoefficients binomial_coefficients(int n, const TwoModeSystem& system,
                                                double t, double tol = kDefaultQuadTol);

// |C_{n-s,s}(t)|^2 for s = 0..n: binomial(n,s) q^{n-s} p^s.
std::vector<double> occupation_probabilities(int n, const TwoModeSystem& system,
                                             double t, double tol = kDefaultQuadTol);

// rho_a(t) after tracing out the b-mode: diagonal with |C_{n-s,s}|^2 at
// position n-s, on the basis |0>..|n>.
ReducedDensityMatrix reduced_density_fock(int n, const TwoModeSystem& system,
                                          double t, double tol = kDefaultQuadTol);

// <H_a>/hbar omega0 = n q(t).
double mean_energy_fock(int n, const TwoModeSystem& system, double t,
                        double tol = kDefaultQuadTol);

// Coherent input |alpha>_a |0>_b on resonance: the state stays a product of
// coherent states with the returned parameters. Throws UnsupportedConfigError
// off resonance (the analytic layer does not extrapolate; use the oracle).
struct CoherentPair {
    Complex alpha_a;
    Complex alpha_b;
};

CoherentPair evolve_coherent(Complex alpha, const TwoModeSystem& system, double t,
                             double tol = kDefaultQuadTol);

// |alpha|^2 cos^2(G(t)), resonance only.
double mean_energy_coherent(Complex alpha, const TwoModeSystem& system, double t,
                            double tol = kDefaultQuadTol);

// Complete-transfer time pi/(2 g0) for a constant coupling on resonance.
double transfer_time(const TwoModeSystem& system);

}  // namespace qosc
