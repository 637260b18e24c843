#include "qosc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qosc/errors.hpp"
#include "qosc/quadrature.hpp"

namespace qosc {

namespace {

void check_tau(double tau, const char* kind) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument(std::string(kind) + ": tau must be > 0");
    }
}

// Linear interpolation inside the sample range; callers have validated t.
double interp(const TabulatedCoupling& tab, double t) {
    const auto& ts = tab.times;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    if (hi == 0) hi = 1;
    if (hi == ts.size()) hi = ts.size() - 1;
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return tab.values[lo] + w * (tab.values[hi] - tab.values[lo]);
}

void check_tab_range(const TabulatedCoupling& tab, double t) {
    if (t < tab.times.front() || t > tab.times.back()) {
        throw RangeError("tabulated coupling: t=" + std::to_string(t) +
                         " outside sample range [" + std::to_string(tab.times.front()) +
                         ", " + std::to_string(tab.times.back()) + "]");
    }
}

// Exact integral of |v0 + (v1-v0) s| over a linear segment of length h,
// splitting at a sign crossing.
double segment_abs_integral(double v0, double v1, double h) {
    if (v0 == 0.0 && v1 == 0.0) return 0.0;
    if (v0 * v1 >= 0.0) {
        return 0.5 * std::abs(v0 + v1) * h;
    }
    const double tc = v0 / (v0 - v1);  // crossing point in [0,1]
    return 0.5 * h * (std::abs(v0) * tc + std::abs(v1) * (1.0 - tc));
}

}  // namespace

CouplingSchedule CouplingSchedule::constant(double g0) {
    return CouplingSchedule(Variant{ConstantCoupling{g0}});
}

CouplingSchedule CouplingSchedule::switched(double g0, double tau) {
    check_tau(tau, "switch coupling");
    return CouplingSchedule(Variant{SwitchCoupling{g0, tau}});
}

CouplingSchedule CouplingSchedule::exp_decay(double g0, double tau) {
    check_tau(tau, "exp_decay coupling");
    return CouplingSchedule(Variant{ExpDecayCoupling{g0, tau}});
}

CouplingSchedule CouplingSchedule::tabulated(std::vector<double> times,
                                             std::vector<double> values) {
    if (times.size() < 2) {
        throw std::invalid_argument("tabulated coupling: need at least 2 samples");
    }
    if (times.size() != values.size()) {
        throw std::invalid_argument("tabulated coupling: times/values size mismatch");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw std::invalid_argument("tabulated coupling: times must be strictly ascending");
        }
    }
    return CouplingSchedule(Variant{TabulatedCoupling{std::move(times), std::move(values)}});
}

bool CouplingSchedule::is_time_independent() const {
    if (is_constant()) return true;
    if (const auto* sw = std::get_if<SwitchCoupling>(&v_)) return sw->g0 == 0.0;
    if (const auto* ed = std::get_if<ExpDecayCoupling>(&v_)) return ed->g0 == 0.0;
    return false;
}

std::string CouplingSchedule::kind_name() const {
    if (is_constant()) return "constant";
    if (is_switch()) return "switch";
    if (is_exp_decay()) return "exp_decay";
    return "tabulated";
}

double eval_coupling(const CouplingSchedule& schedule, double t) {
    if (t < 0.0) {
        throw RangeError("eval_coupling: t must be >= 0");
    }
    return std::visit(
        [t](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ConstantCoupling>) {
                return s.g0;
            } else if constexpr (std::is_same_v<S, SwitchCoupling>) {
                return t <= s.tau ? s.g0 : 0.0;
            } else if constexpr (std::is_same_v<S, ExpDecayCoupling>) {
                return s.g0 * std::exp(-t / s.tau);
            } else {
                check_tab_range(s, t);
                return interp(s, t);
            }
        },
        schedule.variant());
}

double accumulated_coupling(const CouplingSchedule& schedule, double t) {
    if (t < 0.0) throw RangeError("accumulated_coupling: t must be >= 0");
    if (t == 0.0) return 0.0;
    return std::visit(
        [t](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ConstantCoupling>) {
                return std::abs(s.g0) * t;
            } else if constexpr (std::is_same_v<S, SwitchCoupling>) {
                return std::abs(s.g0) * std::min(t, s.tau);
            } else if constexpr (std::is_same_v<S, ExpDecayCoupling>) {
                return std::abs(s.g0) * s.tau * (-std::expm1(-t / s.tau));
            } else {
                check_tab_range(s, 0.0);
                check_tab_range(s, t);
                double acc = 0.0;
                for (std::size_t i = 1; i < s.times.size() && s.times[i - 1] < t; ++i) {
                    const double t0 = std::max(s.times[i - 1], 0.0);
                    const double t1 = std::min(s.times[i], t);
                    if (t1 <= t0) continue;
                    const double v0 = interp(s, t0);
                    const double v1 = interp(s, t1);
                    acc += segment_abs_integral(v0, v1, t1 - t0);
                }
                return acc;
            }
        },
        schedule.variant());
}

double accumulated_branch_rate(const CouplingSchedule& schedule, double c,
                               double t, double tol) {
    if (t < 0.0) throw RangeError("accumulated_branch_rate: t must be >= 0");
    if (t == 0.0) return 0.0;
    if (c == 0.0) return accumulated_coupling(schedule, t);
    const double c2 = c * c;
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ConstantCoupling>) {
                return std::sqrt(s.g0 * s.g0 + c2) * t;
            } else if constexpr (std::is_same_v<S, SwitchCoupling>) {
                const double on = std::min(t, s.tau);
                const double off = std::max(0.0, t - s.tau);
                return std::sqrt(s.g0 * s.g0 + c2) * on + std::abs(c) * off;
            } else if constexpr (std::is_same_v<S, ExpDecayCoupling>) {
                const double g0 = s.g0;
                auto f = [g0, c2, &s](double tp) {
                    const double g = g0 * std::exp(-tp / s.tau);
                    return std::sqrt(g * g + c2);
                };
                return adaptive_simpson<double>(f, 0.0, t, tol);
            } else {
                check_tab_range(s, 0.0);
                check_tab_range(s, t);
                // Integrate segment by segment so the piecewise-linear kinks
                // never confuse the adaptive rule.
                double acc = 0.0;
                for (std::size_t i = 1; i < s.times.size() && s.times[i - 1] < t; ++i) {
                    const double t0 = std::max(s.times[i - 1], 0.0);
                    const double t1 = std::min(s.times[i], t);
                    if (t1 <= t0) continue;
                    auto f = [&s, c2](double tp) {
                        const double g = interp(s, tp);
                        return std::sqrt(g * g + c2);
                    };
                    acc += adaptive_simpson<double>(f, t0, t1, tol);
                }
                return acc;
            }
        },
        schedule.variant());
}

TwoModeSystem::TwoModeSystem(double omega0, double Omega, CouplingSchedule schedule)
    : omega0_(omega0), Omega_(Omega), schedule_(std::move(schedule)) {
    if (!(omega0 > 0.0) || !(Omega > 0.0)) {
        throw std::invalid_argument("TwoModeSystem: frequencies must be positive");
    }
    if (Omega < omega0) {
        throw std::invalid_argument(
            "TwoModeSystem: requires Omega >= omega0 (delta >= 0); relabel the modes");
    }
}

Eigenfrequencies eigenfrequencies(const TwoModeSystem& system, double t) {
    const double g = system.coupling(t);
    const double half_delta = 0.5 * system.delta();
    const double r = std::sqrt(g * g + half_delta * half_delta);
    return {system.omega_bar() - r, system.omega_bar() + r};
}

double mixing_angle(const TwoModeSystem& system, double t) {
    const double g = system.coupling(t);
    return 0.5 * std::atan2(2.0 * g, system.delta());
}

PhaseIntegrals phase_integrals(const TwoModeSystem& system, double t, double tol) {
    if (t < 0.0) throw RangeError("phase_integrals: t must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("phase_integrals: tol must be > 0");
    PhaseIntegrals out;
    if (t == 0.0) return out;
    const double r = accumulated_branch_rate(system.schedule(), 0.5 * system.delta(), t, tol);
    const double mean = system.omega_bar() * t;
    out.f_A = mean - r;
    out.f_B = mean + r;
    out.delta_f = -2.0 * r;
    out.G = accumulated_coupling(system.schedule(), t);
    out.eta = out.G;
    return out;
}

double theta_dot_bound(const TwoModeSystem& system, double t0, double t1, int samples) {
    if (!(t1 > t0) || t0 < 0.0) {
        throw std::invalid_argument("theta_dot_bound: need t1 > t0 >= 0");
    }
    if (system.delta() == 0.0 || system.schedule().is_time_independent()) {
        return 0.0;
    }
    if (samples < 2) samples = 2;
    const double h = (t1 - t0) / samples;
    double best = 0.0;
    double prev = mixing_angle(system, t0);
    for (int i = 1; i <= samples; ++i) {
        const double cur = mixing_angle(system, t0 + i * h);
        best = std::max(best, std::abs(cur - prev) / h);
        prev = cur;
    }
    return best;
}

}  // namespace qosc
