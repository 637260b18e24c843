// multimode.hpp — three-mode star system in closed form (T matrix,
// eigenfrequencies, excitation spreading, multinomial probabilities) and the
// n-mode chain via numeric diagonalization of the tridiagonal coupling matrix.
#pragma once

#include <complex>
#include <map>
#include <vector>

#include "qosc/coupling.hpp"

namespace qosc {

// Central mode a coupled to b through g and to c through g'; all three modes
// share the frequency omega0.
class ThreeModeSystem {
 public:
    ThreeModeSystem(double omega0, CouplingSchedule g, CouplingSchedule g_prime);

    double omega0() const { return omega0_; }
    const CouplingSchedule& g() const { return g_; }
    const CouplingSchedule& g_prime() const { return g_prime_; }

    // G3(t) = sqrt(g^2 + g'^2).
    double branch_rate(double t) const;
    // eta(t) = int_0^t G3. Closed form when both couplings are constant or
    // share an exponential envelope; adaptive quadrature otherwise.
    double eta(double t, double tol = kDefaultQuadTol) const;

    // The eta-based closed forms are exact only while g/g' stays constant in
    // time (fixed T). Samples the ratio over [t0, t1]; configurations failing
    // this check should be cross-checked against the oracle.
    bool constant_coupling_ratio(double t0, double t1, int samples = 512,
                                 double rel_tol = 1e-9) const;

 private:
    double omega0_;
    CouplingSchedule g_;
    CouplingSchedule g_prime_;
};

// Nearest-neighbour chain of n modes at equal frequency omega0 with n-1
// coupling schedules. This is a different graph from the three-mode star.
class ChainSystem {
 public:
    ChainSystem(double omega0, std::vector<CouplingSchedule> couplings);

    double omega0() const { return omega0_; }
    int modes() const { return static_cast<int>(couplings_.size()) + 1; }
    const std::vector<CouplingSchedule>& couplings() const { return couplings_; }
    bool all_constant() const;

 private:
    double omega0_;
    std::vector<CouplingSchedule> couplings_;
};

// Orthogonal T and eigenfrequencies diagonalizing the coupling matrix at
// time t: T^t Gamma(t) T = diag(lambdas), lambdas ascending.
struct SpectralDecomposition {
    int n = 0;
    double t = 0.0;
    std::vector<double> T;  // row-major, column k = eigenvector k
    std::vector<double> lambdas;

    double entry(int row, int col) const {
        return T[static_cast<std::size_t>(row) * n + col];
    }
    double orthogonality_residual() const;
};

// Closed-form decomposition of the star's 3x3 coupling matrix. Throws
// DegenerateCouplingError when G3(t) = 0 unless both couplings vanish
// identically, in which case the identity decomposition is returned.
SpectralDecomposition three_mode_decomposition(const ThreeModeSystem& system, double t);

// Amplitudes on (|100>, |010>, |001>) for the initial state |1>_a|0>_b|0>_c.
std::vector<std::complex<double>> single_excitation_state(const ThreeModeSystem& system,
                                                          double t,
                                                          double tol = kDefaultQuadTol);

using CompositionProbabilities = std::map<std::vector<int>, double>;

// P_ijk for n quanta initially on the central mode: multinomial spreading
// with single-quantum weights (cos^2 eta, (g/G3)^2 sin^2 eta, (g'/G3)^2 sin^2 eta).
CompositionProbabilities multinomial_probabilities(int n, const ThreeModeSystem& system,
                                                   double t,
                                                   double tol = kDefaultQuadTol);

// Numeric decomposition of the chain's tridiagonal coupling matrix at time t.
SpectralDecomposition chain_decomposition(const ChainSystem& system, double t,
                                          double tol = 1e-10);

// exp(-i Gamma t) applied to a single quantum at `source` (0-based). Exact
// for all-constant couplings; anything else is routed to the oracle.
std::vector<std::complex<double>> chain_single_excitation_amplitudes(
    const ChainSystem& system, int source, double t);

// Multinomial spreading of n quanta initially at `source` across the chain.
CompositionProbabilities chain_multinomial_probabilities(int n, const ChainSystem& system,
                                                         int source, double t);

}  // namespace qosc
