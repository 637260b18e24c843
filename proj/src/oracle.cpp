#include "qosc/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "qosc/combinatorics.hpp"
#include "qosc/errors.hpp"

namespace qosc::oracle {

namespace {

constexpr Complex kI{0.0, 1.0};

double l2_norm(const Cvec& v) {
    double s = 0.0;
    for (const Complex& c : v) s += std::norm(c);
    return std::sqrt(s);
}

double l2_dist(const Cvec& a, const Cvec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

// Derivative provider dy/dt = -i H(t) y.
using Deriv = std::function<void(double t, const Cvec& x, Cvec& dx)>;

void rk4_step(const Deriv& deriv, double t, double h, const Cvec& y, Cvec& out,
              Cvec& k1, Cvec& k2, Cvec& k3, Cvec& k4, Cvec& tmp) {
    const std::size_t n = y.size();
    deriv(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    deriv(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    deriv(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    deriv(t + h, tmp, k4);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

struct AdaptiveRk4Stats {
    std::size_t steps = 0;
};

// Classical RK4 with Richardson halving: a full step is compared against two
// half steps; the half-step result is accepted when the difference/15 is
// inside the local budget. The budget is tol scaled per unit time, so the
// accumulated drift over a whole run stays O(tol) regardless of its length.
// Callback runs after every accepted step.
Cvec adaptive_rk4(const Deriv& deriv, Cvec y, double t_final, double tol,
                  AdaptiveRk4Stats* stats,
                  const std::function<void(double, const Cvec&)>& on_accept = {}) {
    if (t_final == 0.0) return y;
    const std::size_t n = y.size();
    Cvec full(n), half(n), two(n);
    Cvec k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0.0;
    double h = t_final / 64.0;
    const double h_min = t_final * 1e-14;
    while (t < t_final) {
        h = std::min(h, t_final - t);
        rk4_step(deriv, t, h, y, full, k1, k2, k3, k4, tmp);
        rk4_step(deriv, t, 0.5 * h, y, half, k1, k2, k3, k4, tmp);
        rk4_step(deriv, t + 0.5 * h, 0.5 * h, half, two, k1, k2, k3, k4, tmp);
        const double err = l2_dist(two, full) / 15.0;
        // Budget per unit time, floored at roundoff so the closing sliver of
        // the interval cannot demand sub-epsilon accuracy.
        const double budget = std::max(tol * (h / t_final),
                                       4.0 * std::numeric_limits<double>::epsilon());
        if (err <= budget) {
            y.swap(two);
            t += h;
            if (stats) ++stats->steps;
            if (on_accept) on_accept(t, y);
            const double grow = err > 0.0 ? 0.9 * std::pow(budget / err, 0.2) : 4.0;
            h *= std::clamp(grow, 1.0, 4.0);
        } else {
            h *= std::clamp(0.9 * std::pow(budget / err, 0.25), 0.1, 0.9);
            if (h < h_min) {
                throw NumericError("adaptive_rk4: step size underflow (stiffness) at t=" +
                                   std::to_string(t));
            }
        }
    }
    return y;
}

// Precomputed sector action: diagonal energies plus per-edge hop lists.
struct SectorAction {
    struct Hop {
        std::size_t src;
        std::size_t dst;
        double factor;  // sqrt(n_src_mode (n_dst_mode + 1))
    };
    std::vector<double> diag;
    std::vector<std::vector<Hop>> per_edge;
};

SectorAction build_action(const SectorBasis& basis, const ModeNetwork& net) {
    SectorAction act;
    const std::size_t dim = basis.size();
    act.diag.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto& occ = basis.states[i];
        double e = 0.0;
        for (int j = 0; j < basis.modes; ++j) {
            e += net.omegas[static_cast<std::size_t>(j)] * occ[static_cast<std::size_t>(j)];
        }
        act.diag[i] = e;
    }
    act.per_edge.resize(net.edges.size());
    std::vector<int> target;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const int j = net.edges[e].j;
        const int k = net.edges[e].k;
        for (std::size_t i = 0; i < dim; ++i) {
            const auto& occ = basis.states[i];
            // a_j^dag a_k : move one quantum k -> j.
            if (occ[static_cast<std::size_t>(k)] > 0) {
                target = occ;
                target[static_cast<std::size_t>(k)] -= 1;
                target[static_cast<std::size_t>(j)] += 1;
                const double factor = std::sqrt(
                    static_cast<double>(occ[static_cast<std::size_t>(k)]) *
                    (occ[static_cast<std::size_t>(j)] + 1.0));
                act.per_edge[e].push_back({i, basis.index_of(target), factor});
            }
        }
    }
    return act;
}

// y += H x restricted to this action, with edge couplings g_e.
void apply_action(const SectorAction& act, const std::vector<double>& edge_g,
                  const Cvec& x, Cvec& y) {
    const std::size_t dim = act.diag.size();
    for (std::size_t i = 0; i < dim; ++i) y[i] = act.diag[i] * x[i];
    for (std::size_t e = 0; e < act.per_edge.size(); ++e) {
        const double g = edge_g[e];
        if (g == 0.0) continue;
        for (const auto& hop : act.per_edge[e]) {
            y[hop.dst] += g * hop.factor * x[hop.src];  // a_j^dag a_k
            y[hop.src] += g * hop.factor * x[hop.dst];  // hermitian conjugate
        }
    }
}

Deriv make_sector_deriv(const SectorAction& act, const ModeNetwork& net) {
    return [&act, &net](double t, const Cvec& x, Cvec& dx) {
        std::vector<double> edge_g(net.edges.size());
        for (std::size_t e = 0; e < net.edges.size(); ++e) {
            edge_g[e] = eval_coupling(net.edges[e].schedule, t);
        }
        static thread_local Cvec hx;
        hx.assign(x.size(), Complex{0.0, 0.0});
        apply_action(act, edge_g, x, hx);
        dx.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) dx[i] = -kI * hx[i];
    };
}

// Dense symmetric H for a frozen coupling matrix; used by the expm path.
Eigen::MatrixXd dense_hamiltonian(const SectorBasis& basis, const SectorAction& act,
                                  const ModeNetwork& net, double t) {
    const std::size_t dim = basis.size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) H(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(i)) = act.diag[i];
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const double g = eval_coupling(net.edges[e].schedule, t);
        for (const auto& hop : act.per_edge[e]) {
            H(static_cast<Eigen::Index>(hop.dst), static_cast<Eigen::Index>(hop.src)) +=
                g * hop.factor;
            H(static_cast<Eigen::Index>(hop.src), static_cast<Eigen::Index>(hop.dst)) +=
                g * hop.factor;
        }
    }
    return H;
}

// psi -> V diag(e^{-i lambda dt}) V^T psi for one constant-H segment.
void expm_segment(const Eigen::MatrixXd& H, double dt, Cvec& psi) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success) {
        throw NumericError("propagate_sector_expm: eigendecomposition failed");
    }
    const Eigen::MatrixXd& V = solver.eigenvectors();
    const Eigen::VectorXd& lam = solver.eigenvalues();
    const Eigen::Index dim = V.rows();
    Eigen::VectorXcd x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = psi[static_cast<std::size_t>(i)];
    Eigen::VectorXcd w = V.transpose() * x;
    for (Eigen::Index i = 0; i < dim; ++i) {
        w(i) *= std::exp(Complex(0.0, -lam(i) * dt));
    }
    x = V * w;
    for (Eigen::Index i = 0; i < dim; ++i) psi[static_cast<std::size_t>(i)] = x(i);
}

}  // namespace

SectorBasis SectorBasis::enumerate(int modes, int quanta, std::uint64_t capacity) {
    if (modes < 1) throw std::invalid_argument("SectorBasis: need modes >= 1");
    if (quanta < 0) throw std::invalid_argument("SectorBasis: need quanta >= 0");
    const std::uint64_t count = composition_count(quanta, modes);
    if (count > capacity) {
        throw CapacityError("SectorBasis: " + std::to_string(count) +
                            " states exceed capacity " + std::to_string(capacity));
    }
    SectorBasis basis;
    basis.modes = modes;
    basis.quanta = quanta;
    basis.states = compositions(quanta, modes);
    return basis;
}

std::size_t SectorBasis::index_of(const std::vector<int>& occupations) const {
    // States are in descending lexicographic order.
    auto it = std::lower_bound(states.begin(), states.end(), occupations,
                               [](const std::vector<int>& a, const std::vector<int>& b) {
                                   return a > b;
                               });
    if (it == states.end() || *it != occupations) {
        throw RangeError("SectorBasis::index_of: occupation tuple not in sector");
    }
    return static_cast<std::size_t>(it - states.begin());
}

double SectorStateVector::norm() const { return l2_norm(amplitudes); }

std::vector<double> SectorStateVector::probabilities() const {
    std::vector<double> p(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) p[i] = std::norm(amplitudes[i]);
    return p;
}

double SectorStateVector::mean_occupation(int mode) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        acc += std::norm(amplitudes[i]) *
               basis.states[i][static_cast<std::size_t>(mode)];
    }
    return acc;
}

SectorStateVector basis_state(SectorBasis basis, const std::vector<int>& occupations) {
    SectorStateVector s;
    const std::size_t idx = basis.index_of(occupations);
    s.basis = std::move(basis);
    s.amplitudes.assign(s.basis.size(), Complex{0.0, 0.0});
    s.amplitudes[idx] = Complex{1.0, 0.0};
    return s;
}

std::vector<double> ModeNetwork::gamma(double t) const {
    const int m = modes();
    std::vector<double> g(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < m; ++j) {
        g[static_cast<std::size_t>(j) * m + j] = omegas[static_cast<std::size_t>(j)];
    }
    for (const auto& e : edges) {
        const double v = eval_coupling(e.schedule, t);
        g[static_cast<std::size_t>(e.j) * m + e.k] = v;
        g[static_cast<std::size_t>(e.k) * m + e.j] = v;
    }
    return g;
}

bool ModeNetwork::time_independent() const {
    for (const auto& e : edges) {
        if (!e.schedule.is_time_independent()) return false;
    }
    return true;
}

bool ModeNetwork::piecewise_constant() const {
    for (const auto& e : edges) {
        if (!e.schedule.is_constant() && !e.schedule.is_switch()) return false;
    }
    return true;
}

std::vector<double> ModeNetwork::breakpoints(double t_final) const {
    std::vector<double> pts;
    for (const auto& e : edges) {
        if (const auto* sw = std::get_if<SwitchCoupling>(&e.schedule.variant())) {
            if (sw->tau > 0.0 && sw->tau < t_final) pts.push_back(sw->tau);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

ModeNetwork make_network(const TwoModeSystem& system) {
    ModeNetwork net;
    net.omegas = {system.omega0(), system.Omega()};
    net.edges.push_back({0, 1, system.schedule()});
    return net;
}

ModeNetwork make_network(const ThreeModeSystem& system) {
    ModeNetwork net;
    net.omegas = {system.omega0(), system.omega0(), system.omega0()};
    net.edges.push_back({0, 1, system.g()});
    net.edges.push_back({0, 2, system.g_prime()});
    return net;
}

ModeNetwork make_network(const ChainSystem& system) {
    ModeNetwork net;
    net.omegas.assign(static_cast<std::size_t>(system.modes()), system.omega0());
    for (int k = 0; k + 1 < system.modes(); ++k) {
        net.edges.push_back({k, k + 1, system.couplings()[static_cast<std::size_t>(k)]});
    }
    return net;
}

SectorStateVector apply_hamiltonian(const SectorStateVector& state,
                                    const std::vector<double>& gamma) {
    const int m = state.basis.modes;
    if (gamma.size() != static_cast<std::size_t>(m) * m) {
        throw std::invalid_argument("apply_hamiltonian: gamma must be modes x modes");
    }
    const std::size_t dim = state.basis.size();
    SectorStateVector out;
    out.basis = state.basis;
    out.amplitudes.assign(dim, Complex{0.0, 0.0});
    std::vector<int> target;
    for (std::size_t i = 0; i < dim; ++i) {
        const Complex amp = state.amplitudes[i];
        if (amp == Complex{0.0, 0.0}) continue;
        const auto& occ = state.basis.states[i];
        double e = 0.0;
        for (int j = 0; j < m; ++j) {
            e += gamma[static_cast<std::size_t>(j) * m + j] * occ[static_cast<std::size_t>(j)];
        }
        out.amplitudes[i] += e * amp;
        for (int j = 0; j < m; ++j) {
            for (int k = j + 1; k < m; ++k) {
                const double g = gamma[static_cast<std::size_t>(j) * m + k];
                if (g == 0.0) continue;
                // a_j^dag a_k
                if (occ[static_cast<std::size_t>(k)] > 0) {
                    target = occ;
                    target[static_cast<std::size_t>(k)] -= 1;
                    target[static_cast<std::size_t>(j)] += 1;
                    const double f = std::sqrt(
                        static_cast<double>(occ[static_cast<std::size_t>(k)]) *
                        (occ[static_cast<std::size_t>(j)] + 1.0));
                    out.amplitudes[state.basis.index_of(target)] += g * f * amp;
                }
                // a_k^dag a_j
                if (occ[static_cast<std::size_t>(j)] > 0) {
                    target = occ;
                    target[static_cast<std::size_t>(j)] -= 1;
                    target[static_cast<std::size_t>(k)] += 1;
                    const double f = std::sqrt(
                        static_cast<double>(occ[static_cast<std::size_t>(j)]) *
                        (occ[static_cast<std::size_t>(k)] + 1.0));
                    out.amplitudes[state.basis.index_of(target)] += g * f * amp;
                }
            }
        }
    }
    return out;
}

PropagationResult propagate_sector_expm(SectorStateVector initial,
                                        const ModeNetwork& network, double t_final) {
    if (!network.piecewise_constant()) {
        throw UnsupportedConfigError(
            "propagate_sector_expm: network must be piecewise constant in time");
    }
    const SectorAction act = build_action(initial.basis, network);
    PropagationResult out;
    out.method = "expm";
    std::vector<double> cuts = network.breakpoints(t_final);
    cuts.push_back(t_final);
    double t0 = 0.0;
    for (double t1 : cuts) {
        if (t1 <= t0) continue;
        const double mid = 0.5 * (t0 + t1);
        const Eigen::MatrixXd H = dense_hamiltonian(initial.basis, act, network, mid);
        expm_segment(H, t1 - t0, initial.amplitudes);
        ++out.steps;
        t0 = t1;
    }
    out.norm_drift = std::abs(l2_norm(initial.amplitudes) - 1.0);
    out.state = std::move(initial);
    return out;
}

PropagationResult propagate_sector_rk4(SectorStateVector initial,
                                       const ModeNetwork& network, double t_final,
                                       double tol) {
    const SectorAction act = build_action(initial.basis, network);
    const Deriv deriv = make_sector_deriv(act, network);
    AdaptiveRk4Stats stats;
    Cvec final = adaptive_rk4(deriv, std::move(initial.amplitudes), t_final, tol, &stats);
    PropagationResult out;
    out.method = "rk4";
    out.steps = stats.steps;
    out.norm_drift = std::abs(l2_norm(final) - 1.0);
    initial.amplitudes = std::move(final);
    out.state = std::move(initial);
    return out;
}

PropagationResult propagate_sector(SectorStateVector initial, const ModeNetwork& network,
                                   double t_final, double tol) {
    if (t_final < 0.0) throw RangeError("propagate_sector: t_final must be >= 0");
    if (network.piecewise_constant()) {
        return propagate_sector_expm(std::move(initial), network, t_final);
    }
    return propagate_sector_rk4(std::move(initial), network, t_final, tol);
}

SectorStateVector rk4_fixed_steps(SectorStateVector initial, const ModeNetwork& network,
                                  double t_final, int steps) {
    const SectorAction act = build_action(initial.basis, network);
    const Deriv deriv = make_sector_deriv(act, network);
    const std::size_t n = initial.amplitudes.size();
    Cvec y = std::move(initial.amplitudes);
    Cvec out(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
    const double h = t_final / steps;
    for (int i = 0; i < steps; ++i) {
        rk4_step(deriv, i * h, h, y, out, k1, k2, k3, k4, tmp);
        y.swap(out);
    }
    initial.amplitudes = std::move(y);
    return initial;
}

double fidelity(const Cvec& u, const Cvec& v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("fidelity: state dimensions differ");
    }
    Complex ip{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) ip += std::conj(u[i]) * v[i];
    return std::norm(ip);
}

double fidelity(const SectorStateVector& u, const SectorStateVector& v) {
    if (u.basis.modes != v.basis.modes || u.basis.quanta != v.basis.quanta) {
        throw std::invalid_argument("fidelity: sector bases differ");
    }
    return fidelity(u.amplitudes, v.amplitudes);
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("total_variation: distribution supports differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

std::size_t truncated_index(int ncut, int na, int nb) {
    return static_cast<std::size_t>(na) * (ncut + 1) + static_cast<std::size_t>(nb);
}

Cvec truncated_vacuum(int ncut) {
    Cvec v(static_cast<std::size_t>(ncut + 1) * (ncut + 1), Complex{0.0, 0.0});
    v[0] = Complex{1.0, 0.0};
    return v;
}

Cvec truncated_fock_pair(int ncut, int na, int nb) {
    if (na > ncut || nb > ncut) {
        throw RangeError("truncated_fock_pair: occupation exceeds cutoff");
    }
    Cvec v(static_cast<std::size_t>(ncut + 1) * (ncut + 1), Complex{0.0, 0.0});
    v[truncated_index(ncut, na, nb)] = Complex{1.0, 0.0};
    return v;
}

Cvec truncated_coherent_pair(int ncut, Complex alpha_a, Complex alpha_b) {
    const int d = ncut + 1;
    std::vector<Complex> ca(static_cast<std::size_t>(d)), cb(static_cast<std::size_t>(d));
    auto fill = [d](std::vector<Complex>& c, Complex alpha) {
        c[0] = std::exp(-0.5 * std::norm(alpha));
        for (int n = 1; n < d; ++n) {
            c[static_cast<std::size_t>(n)] =
                c[static_cast<std::size_t>(n - 1)] * alpha / std::sqrt(static_cast<double>(n));
        }
    };
    fill(ca, alpha_a);
    fill(cb, alpha_b);
    Cvec v(static_cast<std::size_t>(d) * d);
    for (int na = 0; na < d; ++na) {
        for (int nb = 0; nb < d; ++nb) {
            v[truncated_index(ncut, na, nb)] = ca[static_cast<std::size_t>(na)] *
                                               cb[static_cast<std::size_t>(nb)];
        }
    }
    return v;
}

double truncated_norm(const Cvec& amplitudes) { return l2_norm(amplitudes); }

std::vector<double> TruncatedDrivenResult::joint_probabilities() const {
    std::vector<double> p(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i) p[i] = std::norm(amplitudes[i]);
    return p;
}

TruncatedDrivenResult propagate_truncated_driven(Cvec initial, int ncut,
                                                 const TwoModeSystem& system,
                                                 const DriveWaveform& drive,
                                                 double t_final, double tol,
                                                 double tail_budget) {
    if (ncut < 1) throw std::invalid_argument("propagate_truncated_driven: ncut >= 1");
    const int d = ncut + 1;
    if (initial.size() != static_cast<std::size_t>(d) * d) {
        throw std::invalid_argument("propagate_truncated_driven: initial size != (ncut+1)^2");
    }

    // sqrt tables avoid recomputation in the inner loop.
    std::vector<double> sq(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) sq[static_cast<std::size_t>(i)] = std::sqrt(static_cast<double>(i));
    const double w0 = system.omega0();
    const double W = system.Omega();

    Deriv deriv = [&](double t, const Cvec& x, Cvec& dx) {
        const double g = system.coupling(t);
        const Complex k = eval_drive(drive, t);
        const Complex kc = std::conj(k);
        dx.assign(x.size(), Complex{0.0, 0.0});
        for (int na = 0; na < d; ++na) {
            for (int nb = 0; nb < d; ++nb) {
                const Complex amp = x[truncated_index(ncut, na, nb)];
                if (amp == Complex{0.0, 0.0}) continue;
                Complex& self = dx[truncated_index(ncut, na, nb)];
                self += (w0 * na + W * nb) * amp;
                if (g != 0.0) {
                    if (nb > 0 && na + 1 < d) {  // a^dag b
                        dx[truncated_index(ncut, na + 1, nb - 1)] +=
                            g * sq[static_cast<std::size_t>(na + 1)] *
                            sq[static_cast<std::size_t>(nb)] * amp;
                    }
                    if (na > 0 && nb + 1 < d) {  // a b^dag
                        dx[truncated_index(ncut, na - 1, nb + 1)] +=
                            g * sq[static_cast<std::size_t>(na)] *
                            sq[static_cast<std::size_t>(nb + 1)] * amp;
                    }
                }
                if (k != Complex{0.0, 0.0}) {
                    if (nb + 1 < d) {  // k b^dag
                        dx[truncated_index(ncut, na, nb + 1)] +=
                            k * sq[static_cast<std::size_t>(nb + 1)] * amp;
                    }
                    if (nb > 0) {  // conj(k) b
                        dx[truncated_index(ncut, na, nb - 1)] +=
                            kc * sq[static_cast<std::size_t>(nb)] * amp;
                    }
                }
            }
        }
        for (Complex& c : dx) c *= -kI;
    };

    TruncatedDrivenResult out;
    out.ncut = ncut;

    auto boundary_mass = [ncut, d](const Cvec& v) {
        double mass = 0.0;
        for (int nb = 0; nb < d; ++nb) mass += std::norm(v[truncated_index(ncut, ncut, nb)]);
        for (int na = 0; na < d - 1; ++na) mass += std::norm(v[truncated_index(ncut, na, ncut)]);
        return mass;
    };
    out.tail_mass_max = boundary_mass(initial);

    AdaptiveRk4Stats stats;
    Cvec final = adaptive_rk4(deriv, std::move(initial), t_final, tol, &stats,
                              [&](double, const Cvec& y) {
                                  out.tail_mass_max =
                                      std::max(out.tail_mass_max, boundary_mass(y));
                              });
    out.steps = stats.steps;
    out.tail_mass_final = boundary_mass(final);
    out.norm_drift = std::abs(l2_norm(final) - 1.0);
    out.amplitudes = std::move(final);
    if (out.tail_mass_max > tail_budget) {
        throw TruncationError("propagate_truncated_driven: boundary-layer mass " +
                              std::to_string(out.tail_mass_max) + " exceeds budget " +
                              std::to_string(tail_budget) + "; increase ncut");
    }
    return out;
}

}  // namespace qosc::oracle
