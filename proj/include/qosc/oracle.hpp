// oracle.hpp — brute-force verification engine: exact propagation in the
// conserved total-excitation sector for undriven networks, and truncated
// Fock-space propagation for the driven two-mode system. Everything here is
// independent of the closed-form layer it certifies.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qosc/coupling.hpp"
#include "qosc/drive_waveform.hpp"
#include "qosc/multimode.hpp"
#include "qosc/two_mode.hpp"

namespace qosc::oracle {

using Complex = std::complex<double>;
using Cvec = std::vector<Complex>;

// Fixed-total-excitation product-Fock basis of m modes. States are ordered
// with leading modes filled first ((n,0,...), (n-1,1,0,...), ...); the order
// is total and deterministic, and size = C(n+m-1, n).
struct SectorBasis {
    int modes = 0;
    int quanta = 0;
    std::vector<std::vector<int>> states;

    static SectorBasis enumerate(int modes, int quanta,
                                 std::uint64_t capacity = 2'000'000);

    std::size_t size() const { return states.size(); }
    std::size_t index_of(const std::vector<int>& occupations) const;
};

struct SectorStateVector {
    SectorBasis basis;
    Cvec amplitudes;

    double norm() const;
    std::vector<double> probabilities() const;
    double mean_occupation(int mode) const;
};

SectorStateVector basis_state(SectorBasis basis, const std::vector<int>& occupations);

// Mode network: per-mode frequencies plus symmetric hop schedules. This is
// the one description all undriven systems reduce to.
struct ModeNetwork {
    struct Edge {
        int j;
        int k;
        CouplingSchedule schedule;
    };

    std::vector<double> omegas;
    std::vector<Edge> edges;

    int modes() const { return static_cast<int>(omegas.size()); }
    // Row-major symmetric coupling matrix Gamma(t) with the frequencies on
    // the diagonal.
    std::vector<double> gamma(double t) const;
    bool time_independent() const;
    bool piecewise_constant() const;
    // Ascending switch times inside (0, t_final).
    std::vector<double> breakpoints(double t_final) const;
};

ModeNetwork make_network(const TwoModeSystem& system);
ModeNetwork make_network(const ThreeModeSystem& system);
ModeNetwork make_network(const ChainSystem& system);

// Matrix-free action of H = sum omega_j n_j + sum Gamma_jk (a_j^dag a_k + h.c.)
// on a sector state; gamma is row-major m x m as produced by ModeNetwork::gamma.
SectorStateVector apply_hamiltonian(const SectorStateVector& state,
                                    const std::vector<double>& gamma);

struct PropagationResult {
    SectorStateVector state;
    double norm_drift = 0.0;
    std::size_t steps = 0;
    std::string method;  // "expm" or "rk4"
};

// Reference integration of i d/dt psi = H(t) psi. Piecewise-constant
// networks go through the exact eigendecomposition exponential; anything
// else through adaptive RK4 with Richardson step halving (local error < tol).
PropagationResult propagate_sector(SectorStateVector initial, const ModeNetwork& network,
                                   double t_final, double tol = 1e-10);

// Forced paths, used to cross-check each other on time-independent systems.
PropagationResult propagate_sector_rk4(SectorStateVector initial,
                                       const ModeNetwork& network, double t_final,
                                       double tol = 1e-10);
PropagationResult propagate_sector_expm(SectorStateVector initial,
                                        const ModeNetwork& network, double t_final);

// Fixed-step classical RK4, exposed for convergence-order measurements.
SectorStateVector rk4_fixed_steps(SectorStateVector initial, const ModeNetwork& network,
                                  double t_final, int steps);

// |<u|v>|^2 and (1/2) sum |p - q|; both throw on shape mismatch.
double fidelity(const Cvec& u, const Cvec& v);
double fidelity(const SectorStateVector& u, const SectorStateVector& v);
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// ---- truncated driven two-mode propagation -------------------------------

// Product Fock basis with occupations 0..ncut on each mode; row-major index
// na * (ncut + 1) + nb.
std::size_t truncated_index(int ncut, int na, int nb);
Cvec truncated_vacuum(int ncut);
Cvec truncated_fock_pair(int ncut, int na, int nb);
// Raw truncation of a product coherent state (norm slightly below 1; the
// discarded Poisson tail is the caller's truncation certificate).
Cvec truncated_coherent_pair(int ncut, Complex alpha_a, Complex alpha_b);
double truncated_norm(const Cvec& amplitudes);

struct TruncatedDrivenResult {
    int ncut = 0;
    Cvec amplitudes;
    double tail_mass_final = 0.0;  // boundary-layer mass at t_final
    double tail_mass_max = 0.0;    // max boundary-layer mass over the run
    double norm_drift = 0.0;
    std::size_t steps = 0;

    std::complex<double> at(int na, int nb) const {
        return amplitudes[truncated_index(ncut, na, nb)];
    }
    // P(na, nb) marginal table up to the cutoff.
    std::vector<double> joint_probabilities() const;
};

// Integrates the driven Hamiltonian on the truncated product basis and
// reports the boundary-layer probability mass (occupation ncut on either
// mode) as the truncation certificate. Throws TruncationError if the mass
// exceeds tail_budget.
TruncatedDrivenResult propagate_truncated_driven(Cvec initial, int ncut,
                                                 const TwoModeSystem& system,
                                                 const DriveWaveform& drive,
                                                 double t_final, double tol = 1e-10,
                                                 double tail_budget = 1.0);

}  // namespace qosc::oracle
