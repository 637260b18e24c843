// coupling.hpp — time-dependent coupling schedules and the Bogoliubov
// diagonalization data of the two-mode system: eigenfrequencies, mixing
// angle, and the accumulated phase integrals every other module consumes.
#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qosc {

// g(t) families. Switch is g0 up to tau then 0; ExpDecay is g0 e^{-t/tau};
// Tabulated is linear interpolation, valid only inside [times.front(),
// times.back()].
struct ConstantCoupling {
    double g0 = 0.0;
};

struct SwitchCoupling {
    double g0 = 0.0;
    double tau = 0.0;
};

struct ExpDecayCoupling {
    double g0 = 0.0;
    double tau = 0.0;
};

struct TabulatedCoupling {
    std::vector<double> times;
    std::vector<double> values;
};

class CouplingSchedule {
 public:
    using Variant = std::variant<ConstantCoupling, SwitchCoupling,
                                 ExpDecayCoupling, TabulatedCoupling>;

    static CouplingSchedule constant(double g0);
    static CouplingSchedule switched(double g0, double tau);
    static CouplingSchedule exp_decay(double g0, double tau);
    static CouplingSchedule tabulated(std::vector<double> times,
                                      std::vector<double> values);

    const Variant& variant() const { return v_; }

    bool is_constant() const { return std::holds_alternative<ConstantCoupling>(v_); }
    bool is_switch() const { return std::holds_alternative<SwitchCoupling>(v_); }
    bool is_exp_decay() const { return std::holds_alternative<ExpDecayCoupling>(v_); }
    bool is_tabulated() const { return std::holds_alternative<TabulatedCoupling>(v_); }

    // True when g(t) is the same for all t >= 0 (Constant, or degenerate
    // families that reduce to it).
    bool is_time_independent() const;

    std::string kind_name() const;

 private:
    explicit CouplingSchedule(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// g(t). Throws RangeError for Tabulated t outside the sample range.
double eval_coupling(const CouplingSchedule& schedule, double t);

// Integral of |g| over [0, t]: the accumulated coupling G(t).
// Closed form for Constant/Switch/ExpDecay, exact piecewise-linear
// integration for Tabulated.
double accumulated_coupling(const CouplingSchedule& schedule, double t);

// Integral of sqrt(g^2(t') + c^2) over [0, t], the workhorse behind the
// phase integrals. Closed forms where the schedule admits them, adaptive
// Simpson (relative tolerance tol) otherwise.
double accumulated_branch_rate(const CouplingSchedule& schedule, double c,
                               double t, double tol);

// Two interacting modes: a at omega0, b at Omega = omega0 + delta, coupled
// through one schedule. The convention delta >= 0 is enforced at
// construction; relabel the modes for the opposite sign.
class TwoModeSystem {
 public:
    TwoModeSystem(double omega0, double Omega, CouplingSchedule schedule);

    double omega0() const { return omega0_; }
    double Omega() const { return Omega_; }
    double delta() const { return Omega_ - omega0_; }
    double omega_bar() const { return 0.5 * (Omega_ + omega0_); }
    bool resonant() const { return Omega_ == omega0_; }
    const CouplingSchedule& schedule() const { return schedule_; }

    double coupling(double t) const { return eval_coupling(schedule_, t); }

 private:
    double omega0_;
    double Omega_;
    CouplingSchedule schedule_;
};

// Accumulated phases of the decoupled A/B oscillators together with the
// coupling integrals. All fields vanish at t = 0 and delta_f = f_A - f_B
// holds exactly by construction.
struct PhaseIntegrals {
    double f_A = 0.0;      // \int_0^t lambda_A
    double f_B = 0.0;      // \int_0^t lambda_B
    double delta_f = 0.0;  // f_A - f_B = -2 \int_0^t sqrt(g^2 + delta^2/4)
    double G = 0.0;        // \int_0^t |g|
    double eta = 0.0;      // accumulated branch rate; equals G for two modes
};

// Instantaneous normal-mode frequencies (lambda_A <= lambda_B).
struct Eigenfrequencies {
    double lambda_A = 0.0;
    double lambda_B = 0.0;
};

Eigenfrequencies eigenfrequencies(const TwoModeSystem& system, double t);

// Bogoliubov mixing angle theta(t) = atan2(2 g(t), delta) / 2, in [0, pi/2)
// for g >= 0. Returns pi/4 on resonance with g > 0 and 0 when g = delta = 0.
double mixing_angle(const TwoModeSystem& system, double t);

constexpr double kDefaultQuadTol = 1e-10;

PhaseIntegrals phase_integrals(const TwoModeSystem& system, double t,
                               double tol = kDefaultQuadTol);

// Finite-difference upper estimate of max |d theta/dt| over [t0, t1].
// Exactly 0 when delta = 0 or the schedule is constant; otherwise sampled
// on a dense grid. Used as a validity monitor: the closed-form evolution
// drops theta-dot terms, so a large bound flags configurations that must be
// cross-checked against the oracle.
double theta_dot_bound(const TwoModeSystem& system, double t0, double t1,
                       int samples = 4096);

}  // namespace qosc
