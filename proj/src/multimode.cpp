#include "qosc/multimode.hpp"

#include <cmath>
#include <stdexcept>

#include "qosc/combinatorics.hpp"
#include "qosc/errors.hpp"
#include "qosc/quadrature.hpp"
#include "qosc/tridiag.hpp"

namespace qosc {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

bool identically_zero(const CouplingSchedule& s) {
    if (s.is_tabulated()) {
        const auto& tab = std::get<TabulatedCoupling>(s.variant());
        for (double v : tab.values) {
            if (v != 0.0) return false;
        }
        return true;
    }
    return eval_coupling(s, 0.0) == 0.0 && s.is_time_independent();
}

}  // namespace

ThreeModeSystem::ThreeModeSystem(double omega0, CouplingSchedule g,
                                 CouplingSchedule g_prime)
    : omega0_(omega0), g_(std::move(g)), g_prime_(std::move(g_prime)) {
    if (!(omega0 > 0.0)) {
        throw std::invalid_argument("ThreeModeSystem: omega0 must be positive");
    }
}

double ThreeModeSystem::branch_rate(double t) const {
    const double a = eval_coupling(g_, t);
    const double b = eval_coupling(g_prime_, t);
    return std::hypot(a, b);
}

double ThreeModeSystem::eta(double t, double tol) const {
    if (t < 0.0) throw RangeError("eta: t must be >= 0");
    if (t == 0.0) return 0.0;
    if (identically_zero(g_)) return accumulated_coupling(g_prime_, t);
    if (identically_zero(g_prime_)) return accumulated_coupling(g_, t);
    if (g_.is_constant() && g_prime_.is_constant()) {
        return branch_rate(0.0) * t;
    }
    if (g_.is_exp_decay() && g_prime_.is_exp_decay()) {
        const auto& ea = std::get<ExpDecayCoupling>(g_.variant());
        const auto& eb = std::get<ExpDecayCoupling>(g_prime_.variant());
        if (ea.tau == eb.tau) {
            return std::hypot(ea.g0, eb.g0) * ea.tau * (-std::expm1(-t / ea.tau));
        }
    }
    return adaptive_simpson<double>([this](double tp) { return branch_rate(tp); },
                                    0.0, t, tol);
}

bool ThreeModeSystem::constant_coupling_ratio(double t0, double t1, int samples,
                                              double rel_tol) const {
    if (g_.is_constant() && g_prime_.is_constant()) return true;
    if (identically_zero(g_) || identically_zero(g_prime_)) return true;
    if (g_.is_exp_decay() && g_prime_.is_exp_decay()) {
        const auto& ea = std::get<ExpDecayCoupling>(g_.variant());
        const auto& eb = std::get<ExpDecayCoupling>(g_prime_.variant());
        if (ea.tau == eb.tau) return true;
    }
    // Sampled check of g'(t) * g(t0) == g(t) * g'(t0).
    const double ga0 = eval_coupling(g_, t0);
    const double gb0 = eval_coupling(g_prime_, t0);
    const double scale = std::max(std::abs(ga0), std::abs(gb0));
    for (int i = 0; i <= samples; ++i) {
        const double t = t0 + (t1 - t0) * i / samples;
        const double ga = eval_coupling(g_, t);
        const double gb = eval_coupling(g_prime_, t);
        if (std::abs(ga * gb0 - gb * ga0) > rel_tol * scale * std::max(scale, 1.0)) {
            return false;
        }
    }
    return true;
}

ChainSystem::ChainSystem(double omega0, std::vector<CouplingSchedule> couplings)
    : omega0_(omega0), couplings_(std::move(couplings)) {
    if (!(omega0 > 0.0)) {
        throw std::invalid_argument("ChainSystem: omega0 must be positive");
    }
    if (couplings_.empty()) {
        throw std::invalid_argument("ChainSystem: need at least 2 modes (1 coupling)");
    }
}

bool ChainSystem::all_constant() const {
    for (const auto& c : couplings_) {
        if (!c.is_constant()) return false;
    }
    return true;
}

double SpectralDecomposition::orthogonality_residual() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double dot = 0.0;
            for (int k = 0; k < n; ++k) dot += entry(i, k) * entry(j, k);
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

SpectralDecomposition three_mode_decomposition(const ThreeModeSystem& system, double t) {
    const double ga = eval_coupling(system.g(), t);
    const double gb = eval_coupling(system.g_prime(), t);
    const double G = std::hypot(ga, gb);
    const double w0 = system.omega0();

    SpectralDecomposition out;
    out.n = 3;
    out.t = t;
    if (G == 0.0) {
        if (identically_zero(system.g()) && identically_zero(system.g_prime())) {
            out.T = {1, 0, 0, 0, 1, 0, 0, 0, 1};
            out.lambdas = {w0, w0, w0};
            return out;
        }
        throw DegenerateCouplingError(
            "three_mode_decomposition: G3(t) = 0 at t=" + std::to_string(t) +
            "; the closed-form T divides by G3");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double cg = ga / G;
    const double cgp = gb / G;
    // Columns: lambda- eigenvector, omega0 eigenvector, lambda+ eigenvector.
    out.T = {-inv_sqrt2,      0.0, inv_sqrt2,
             cg * inv_sqrt2,  -cgp, cg * inv_sqrt2,
             cgp * inv_sqrt2, cg,   cgp * inv_sqrt2};
    out.lambdas = {w0 - G, w0, w0 + G};
    return out;
}

std::vector<std::complex<double>> single_excitation_state(const ThreeModeSystem& system,
                                                          double t, double tol) {
    const double w0 = system.omega0();
    const std::complex<double> rot = std::exp(-kI * (w0 * t));
    const double G = system.branch_rate(t);
    if (G == 0.0) {
        if (identically_zero(system.g()) && identically_zero(system.g_prime())) {
            return {rot, {0.0, 0.0}, {0.0, 0.0}};
        }
        throw DegenerateCouplingError(
            "single_excitation_state: G3(t) = 0 with non-vanishing couplings");
    }
    const double ga = eval_coupling(system.g(), t);
    const double gb = eval_coupling(system.g_prime(), t);
    const double eta = system.eta(t, tol);
    const double ce = std::cos(eta);
    const double se = std::sin(eta);
    return {rot * ce, -kI * (ga / G) * rot * se, -kI * (gb / G) * rot * se};
}

CompositionProbabilities multinomial_probabilities(int n, const ThreeModeSystem& system,
                                                   double t, double tol) {
    if (n < 0) throw std::invalid_argument("multinomial_probabilities: n must be >= 0");
    const auto amps = single_excitation_state(system, t, tol);
    const double pa = std::norm(amps[0]);
    const double pb = std::norm(amps[1]);
    const double pc = std::norm(amps[2]);
    CompositionProbabilities out;
    for (const auto& comp : compositions(n, 3)) {
        const double w = multinomial(n, comp) * powi(pa, comp[0]) * powi(pb, comp[1]) *
                         powi(pc, comp[2]);
        out.emplace(comp, w);
    }
    return out;
}

SpectralDecomposition chain_decomposition(const ChainSystem& system, double t,
                                          double tol) {
    const int n = system.modes();
    std::vector<double> diag(static_cast<std::size_t>(n), system.omega0());
    std::vector<double> off(static_cast<std::size_t>(n) - 1);
    for (int k = 0; k < n - 1; ++k) {
        off[static_cast<std::size_t>(k)] = eval_coupling(system.couplings()[static_cast<std::size_t>(k)], t);
    }
    TridiagEigen eig = tridiag_eigen_ql(std::move(diag), std::move(off));
    SpectralDecomposition out;
    out.n = n;
    out.t = t;
    out.lambdas = std::move(eig.lambdas);
    out.T = std::move(eig.vectors);
    const double res = out.orthogonality_residual();
    if (res >= tol) {
        throw NumericError("chain_decomposition: orthogonality residual " +
                           std::to_string(res) + " exceeds tol");
    }
    return out;
}

std::vector<std::complex<double>> chain_single_excitation_amplitudes(
    const ChainSystem& system, int source, double t) {
    const int n = system.modes();
    if (source < 0 || source >= n) {
        throw std::invalid_argument("chain source mode out of range");
    }
    if (!system.all_constant()) {
        throw UnsupportedConfigError(
            "chain_single_excitation_amplitudes: exact only for constant couplings; "
            "use the oracle for time-dependent schedules");
    }
    const SpectralDecomposition dec = chain_decomposition(system, 0.0);
    std::vector<std::complex<double>> amps(static_cast<std::size_t>(n), {0.0, 0.0});
    for (int k = 0; k < n; ++k) {
        const std::complex<double> phase = std::exp(-kI * (dec.lambdas[static_cast<std::size_t>(k)] * t));
        const double w = dec.entry(source, k);
        for (int j = 0; j < n; ++j) {
            amps[static_cast<std::size_t>(j)] += dec.entry(j, k) * phase * w;
        }
    }
    return amps;
}

CompositionProbabilities chain_multinomial_probabilities(int n, const ChainSystem& system,
                                                         int source, double t) {
    if (n < 0) throw std::invalid_argument("chain_multinomial_probabilities: n >= 0");
    const auto amps = chain_single_excitation_amplitudes(system, source, t);
    const int m = system.modes();
    CompositionProbabilities out;
    for (const auto& comp : compositions(n, m)) {
        double w = multinomial(n, comp);
        for (int j = 0; j < m; ++j) {
            w *= powi(std::norm(amps[static_cast<std::size_t>(j)]), comp[static_cast<std::size_t>(j)]);
        }
        out.emplace(comp, w);
    }
    return out;
}

}  // namespace qosc
