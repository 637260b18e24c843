// driven.hpp — evolution under the external classical source k(t) acting on
// the b-mode: displacement functionals, the vacuum-to-product-coherent-state
// solution, joint occupation probabilities, reduced density matrix elements,
// and arbitrary Fock-pair evolution amplitudes in the coherent basis.
#pragma once

#include <complex>

#include "qosc/coupling.hpp"
#include "qosc/drive_waveform.hpp"

namespace qosc {

// Phase and displacement integrals of the factorized evolution operator,
// in hbar = 1 units: f1 are the accumulated normal-mode phases and f2 the
// drive displacement integrals
//   f2_A = -int_0^t sin(theta) k e^{i f_A},  f2_B = +int_0^t cos(theta) k e^{i f_B}.
// The coherent parameters are mu = -i f2 e^{-i f1}. The scalar functional of
// the factorization only cancels the coherent-state normalization (up to a
// global phase), so it is never materialized.
struct DriveFunctionals {
    double t = 0.0;
    double f1_A = 0.0;
    double f1_B = 0.0;
    std::complex<double> f2_A;
    std::complex<double> f2_B;
    std::complex<double> mu_A;
    std::complex<double> mu_B;
};

DriveFunctionals drive_functionals(const TwoModeSystem& system, const DriveWaveform& drive,
                                   double t, double tol = kDefaultQuadTol);

// Vacuum input |0>_a|0>_b evolves into the product coherent state with these
// mode parameters: alpha_a = mu_A cos(theta) + mu_B sin(theta),
// alpha_b = mu_B cos(theta) - mu_A sin(theta).
struct DrivenCoherentPair {
    std::complex<double> alpha_a;
    std::complex<double> alpha_b;
};

DrivenCoherentPair vacuum_evolution(const TwoModeSystem& system, const DriveWaveform& drive,
                                    double t, double tol = kDefaultQuadTol);

// P(n, m) = Poisson(|alpha_a|^2) x Poisson(|alpha_b|^2).
double joint_occupation_probability(int n, int m, const TwoModeSystem& system,
                                    const DriveWaveform& drive, double t,
                                    double tol = kDefaultQuadTol);

// <p| rho_a |q> of the a-mode coherent-state density matrix.
std::complex<double> reduced_dm_element(int p, int q, const TwoModeSystem& system,
                                        const DriveWaveform& drive, double t,
                                        double tol = kDefaultQuadTol);

// <alpha|_A <beta|_B U(t) |n>_a|m>_b in the coherent basis of the normal
// modes, via the double binomial sum over the displaced ladder identities.
std::complex<double> fock_pair_coherent_amplitude(int n, int m,
                                                  std::complex<double> alpha,
                                                  std::complex<double> beta,
                                                  const TwoModeSystem& system,
                                                  const DriveWaveform& drive, double t,
                                                  double tol = kDefaultQuadTol);

}  // namespace qosc
