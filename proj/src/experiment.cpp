#include "qosc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>

#include "qosc/combinatorics.hpp"
#include "qosc/driven.hpp"
#include "qosc/errors.hpp"
#include "qosc/oracle.hpp"
#include "qosc/version.hpp"

namespace qosc {

using nlohmann::json;
using oracle::Cvec;

std::vector<double> TimeGrid::times() const {
    std::vector<double> ts(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        ts[static_cast<std::size_t>(i)] =
            t_start + (t_end - t_start) * i / (samples - 1);
    }
    return ts;
}

json CompareReport::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["method"] = method;
    j["max_abs_prob_diff"] = max_abs_prob_diff;
    j["fidelity"] = fidelity ? json(*fidelity) : json(nullptr);
    j["tail_mass"] = tail_mass ? json(*tail_mass) : json(nullptr);
    j["steps"] = steps;
    if (total_variation) j["total_variation"] = *total_variation;
    if (max_abs_energy_diff) j["max_abs_energy_diff"] = *max_abs_energy_diff;
    return j;
}

namespace {

const std::set<std::string> kScenarios = {
    "two_mode_fock", "two_mode_coherent", "dissipation", "driven_vacuum",
    "driven_fock",   "three_mode",        "chain",       "compare"};

double get_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw std::invalid_argument("config: missing numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, std::optional<int> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw std::invalid_argument("config: missing integer field '" + key + "'");
    }
    if (!j.at(key).is_number_integer()) {
        throw std::invalid_argument("config: field '" + key + "' must be an integer");
    }
    return j.at(key).get<int>();
}

// Times in configs are in units of 1/omega0 unless "units": "absolute".
double time_scale_factor(const json& cfg, double omega0) {
    const std::string units = cfg.value("units", "omega0");
    if (units == "absolute") return 1.0;
    if (units == "omega0") return 1.0 / omega0;
    throw std::invalid_argument("config: units must be 'omega0' or 'absolute'");
}

json scale_schedule_times(json sched, double scale) {
    if (scale == 1.0) return sched;
    if (sched.contains("tau")) sched["tau"] = sched["tau"].get<double>() * scale;
    if (sched.contains("times")) {
        auto ts = sched["times"].get<std::vector<double>>();
        for (double& t : ts) t *= scale;
        sched["times"] = ts;
    }
    return sched;
}

json scale_drive_times(json drive, double scale) {
    if (scale == 1.0) return drive;
    if (drive.contains("times")) {
        auto ts = drive["times"].get<std::vector<double>>();
        for (double& t : ts) t *= scale;
        drive["times"] = ts;
    }
    return drive;
}

TimeGrid parse_grid(const json& cfg, double scale) {
    if (!cfg.contains("grid") || !cfg.at("grid").is_object()) {
        throw std::invalid_argument("config: missing 'grid' object");
    }
    const json& g = cfg.at("grid");
    TimeGrid grid;
    grid.t_start = get_number(g, "t_start") * scale;
    grid.t_end = get_number(g, "t_end") * scale;
    grid.samples = get_int(g, "samples");
    if (grid.samples < 2) throw std::invalid_argument("grid: samples must be >= 2");
    if (!(grid.t_end > grid.t_start) || grid.t_start < 0.0) {
        throw std::invalid_argument("grid: need t_end > t_start >= 0");
    }
    return grid;
}

TwoModeSystem parse_two_mode_system(const json& cfg, double* scale_out) {
    if (!cfg.contains("system") || !cfg.at("system").is_object()) {
        throw std::invalid_argument("config: missing 'system' object");
    }
    const json& s = cfg.at("system");
    const double omega0 = get_number(s, "omega0");
    if (!(omega0 > 0.0)) throw std::invalid_argument("system: omega0 must be > 0");
    const double scale = time_scale_factor(cfg, omega0);
    if (scale_out) *scale_out = scale;
    const double Omega = s.contains("Omega") ? get_number(s, "Omega") : omega0;
    if (!s.contains("schedule")) throw std::invalid_argument("system: missing 'schedule'");
    return TwoModeSystem(omega0, Omega,
                         schedule_from_json(scale_schedule_times(s.at("schedule"), scale)));
}

ThreeModeSystem parse_three_mode_system(const json& cfg, double* scale_out) {
    const double omega0 = get_number(cfg, "omega0");
    if (!(omega0 > 0.0)) throw std::invalid_argument("three_mode: omega0 must be > 0");
    const double scale = time_scale_factor(cfg, omega0);
    if (scale_out) *scale_out = scale;
    if (!cfg.contains("g") || !cfg.contains("g_prime")) {
        throw std::invalid_argument("three_mode: missing 'g' or 'g_prime' schedule");
    }
    return ThreeModeSystem(omega0,
                           schedule_from_json(scale_schedule_times(cfg.at("g"), scale)),
                           schedule_from_json(scale_schedule_times(cfg.at("g_prime"), scale)));
}

ChainSystem parse_chain_system(const json& cfg, double* scale_out) {
    const double omega0 = get_number(cfg, "omega0");
    if (!(omega0 > 0.0)) throw std::invalid_argument("chain: omega0 must be > 0");
    const double scale = time_scale_factor(cfg, omega0);
    if (scale_out) *scale_out = scale;
    if (!cfg.contains("couplings") || !cfg.at("couplings").is_array() ||
        cfg.at("couplings").empty()) {
        throw std::invalid_argument("chain: missing non-empty 'couplings' array");
    }
    std::vector<CouplingSchedule> couplings;
    for (const auto& c : cfg.at("couplings")) {
        couplings.push_back(schedule_from_json(scale_schedule_times(c, scale)));
    }
    return ChainSystem(omega0, std::move(couplings));
}

TwoModeSystem parse_dissipation_system(const json& cfg, double* scale_out) {
    const double omega0 = cfg.contains("omega0") ? get_number(cfg, "omega0") : 1.0;
    const double scale = time_scale_factor(cfg, omega0);
    if (scale_out) *scale_out = scale;
    const double g0 = get_number(cfg, "g0");
    const double tau = get_number(cfg, "tau") * scale;
    return TwoModeSystem(omega0, omega0, CouplingSchedule::exp_decay(g0, tau));
}

DriveWaveform parse_drive(const json& cfg, double scale) {
    if (!cfg.contains("drive") || !cfg.at("drive").is_object()) {
        throw std::invalid_argument("config: missing 'drive' object");
    }
    return drive_from_json(scale_drive_times(cfg.at("drive"), scale));
}

// Cutoff with Poisson tail below `tail` for occupation mean lambda.
int poisson_cutoff(double lambda, double tail) {
    double cum = 0.0;
    for (int n = 0; n < 4096; ++n) {
        cum += poisson_weight(lambda, n);
        if (1.0 - cum < tail) return n;
    }
    return 4096;
}

// Default truncation for driven comparisons: generous Poisson-tail margin.
int default_ncut(double alpha_abs, int extra_quanta) {
    const double a = std::abs(alpha_abs);
    return static_cast<int>(std::ceil(a * a + 8.0 * a + 10.0)) + extra_quanta;
}

// Analytic n-quanta spread state over a sector basis from single-quantum
// amplitudes: (sum_j u_j a_j^dag)^n / sqrt(n!) |0>.
Cvec spread_state(const std::vector<std::complex<double>>& u, int n,
                  const oracle::SectorBasis& basis) {
    Cvec amps(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& occ = basis.states[i];
        std::complex<double> a = std::sqrt(multinomial(n, occ));
        for (std::size_t j = 0; j < u.size(); ++j) {
            a *= powi(u[j], occ[j]);
        }
        amps[i] = a;
    }
    return amps;
}

std::vector<std::string> artifact_headers(const json& cfg) {
    return {std::string("qosc ") + kVersion,
            "config_digest=" + digest_hex(config_digest(cfg)),
            "scenario=" + cfg.value("scenario", std::string("?"))};
}

void write_artifacts(RunResult& result, const json& cfg, const std::string& out_dir) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    const std::string prefix = cfg.value("out_prefix", cfg.value("scenario", std::string("run")));
    const auto headers = artifact_headers(cfg);
    for (const auto& [name, trace] : result.traces) {
        const std::string path = out_dir + "/" + prefix + "_" + name + ".csv";
        write_csv(path, headers, trace);
        result.files.push_back(path);
    }
    for (const auto& [name, body] : result.reports) {
        const std::string path = out_dir + "/" + prefix + "_" + name + ".json";
        json wrapped = body;
        if (wrapped.is_object()) {
            wrapped["qosc_version"] = kVersion;
            wrapped["config_digest"] = digest_hex(config_digest(cfg));
        }
        write_json_file(path, wrapped);
        result.files.push_back(path);
    }
}

std::string column_name(const char* stem, int a, int b) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%d_%d", stem, a, b);
    return std::string(buf);
}

// ---------------------------------------------------------------- scenarios

RunResult run_two_mode_fock(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_two_mode_system(cfg, &scale);
    const int n = get_int(cfg, "n");
    if (n < 0) throw std::invalid_argument("two_mode_fock: n must be >= 0");
    const TimeGrid grid = parse_grid(cfg, scale);

    RunResult out;
    Trace probs;
    probs.columns.push_back("t");
    for (int s = 0; s <= n; ++s) probs.columns.push_back(column_name("P", n - s, s));
    Trace probs_long;
    probs_long.columns = {"t", "s", "probability"};
    Trace energy;
    energy.columns = {"t", "energy"};
    for (double t : grid.times()) {
        const auto p = occupation_probabilities(n, system, t, tol);
        std::vector<double> row{t};
        row.insert(row.end(), p.begin(), p.end());
        probs.rows.push_back(std::move(row));
        for (int s = 0; s <= n; ++s) {
            probs_long.rows.push_back({t, static_cast<double>(s), p[static_cast<std::size_t>(s)]});
        }
        energy.rows.push_back({t, mean_energy_fock(n, system, t, tol)});
    }
    out.traces.emplace("probabilities", std::move(probs));
    out.traces.emplace("probabilities_long", std::move(probs_long));
    out.traces.emplace("energy", std::move(energy));
    out.reports.emplace("rho_a", json{{"t", grid.t_end},
                                      {"rho", density_matrix_to_json(reduced_density_fock(
                                                  n, system, grid.t_end, tol))}});
    return out;
}

RunResult run_two_mode_coherent(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_two_mode_system(cfg, &scale);
    if (!cfg.contains("alpha")) throw std::invalid_argument("two_mode_coherent: missing 'alpha'");
    const std::complex<double> alpha = complex_from_json(cfg.at("alpha"));
    const TimeGrid grid = parse_grid(cfg, scale);

    RunResult out;
    Trace tr;
    tr.columns = {"t", "alpha_a_re", "alpha_a_im", "alpha_b_re", "alpha_b_im", "energy"};
    for (double t : grid.times()) {
        const CoherentPair pair = evolve_coherent(alpha, system, t, tol);
        tr.rows.push_back({t, pair.alpha_a.real(), pair.alpha_a.imag(),
                           pair.alpha_b.real(), pair.alpha_b.imag(),
                           mean_energy_coherent(alpha, system, t, tol)});
    }
    out.traces.emplace("coherent", std::move(tr));
    return out;
}

RunResult run_dissipation(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_dissipation_system(cfg, &scale);
    const double g0 = std::get<ExpDecayCoupling>(system.schedule().variant()).g0;
    const TimeGrid grid = parse_grid(cfg, scale);

    RunResult out;
    Trace tr;
    tr.columns = {"x", "E"};
    for (double t : grid.times()) {
        const double q = walk_weights(system, t, tol).q;  // cos^2(G) on resonance
        tr.rows.push_back({g0 * t, q});
    }
    out.traces.emplace("energy", std::move(tr));
    return out;
}

RunResult run_driven_vacuum(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_two_mode_system(cfg, &scale);
    const DriveWaveform drive = parse_drive(cfg, scale);
    const TimeGrid grid = parse_grid(cfg, scale);

    RunResult out;
    Trace tr;
    tr.columns = {"t", "alpha_a_re", "alpha_a_im", "alpha_b_re", "alpha_b_im",
                  "mean_na", "mean_nb"};
    DrivenCoherentPair last{};
    for (double t : grid.times()) {
        const DrivenCoherentPair pair = vacuum_evolution(system, drive, t, tol);
        tr.rows.push_back({t, pair.alpha_a.real(), pair.alpha_a.imag(),
                           pair.alpha_b.real(), pair.alpha_b.imag(),
                           std::norm(pair.alpha_a), std::norm(pair.alpha_b)});
        last = pair;
    }
    out.traces.emplace("alphas", std::move(tr));

    // Joint occupation table at t_end, cut where both Poisson tails pass 1e-12.
    const int na_max = poisson_cutoff(std::norm(last.alpha_a), 1e-12);
    const int nb_max = poisson_cutoff(std::norm(last.alpha_b), 1e-12);
    Trace joint;
    joint.columns = {"n", "m", "probability"};
    for (int na = 0; na <= na_max; ++na) {
        for (int nb = 0; nb <= nb_max; ++nb) {
            joint.rows.push_back({static_cast<double>(na), static_cast<double>(nb),
                                  poisson_weight(std::norm(last.alpha_a), na) *
                                      poisson_weight(std::norm(last.alpha_b), nb)});
        }
    }
    out.traces.emplace("joint_final", std::move(joint));
    return out;
}

RunResult run_driven_fock(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_two_mode_system(cfg, &scale);
    const DriveWaveform drive = parse_drive(cfg, scale);
    const int n = get_int(cfg, "n");
    const int m = get_int(cfg, "m");
    if (n < 0 || m < 0) throw std::invalid_argument("driven_fock: need n, m >= 0");
    if (!cfg.contains("probe") || !cfg.at("probe").is_object()) {
        throw std::invalid_argument("driven_fock: missing 'probe' {alpha, beta}");
    }
    const std::complex<double> alpha = complex_from_json(cfg.at("probe").at("alpha"));
    const std::complex<double> beta = complex_from_json(cfg.at("probe").at("beta"));
    const TimeGrid grid = parse_grid(cfg, scale);

    RunResult out;
    Trace tr;
    tr.columns = {"t", "amp_re", "amp_im", "abs2"};
    for (double t : grid.times()) {
        const auto amp = fock_pair_coherent_amplitude(n, m, alpha, beta, system, drive, t, tol);
        tr.rows.push_back({t, amp.real(), amp.imag(), std::norm(amp)});
    }
    out.traces.emplace("probe", std::move(tr));
    return out;
}

RunResult run_three_mode(const json& cfg, double tol) {
    double scale = 1.0;
    const ThreeModeSystem system = parse_three_mode_system(cfg, &scale);
    const int n = get_int(cfg, "n", 1);
    if (n < 0) throw std::invalid_argument("three_mode: n must be >= 0");
    const TimeGrid grid = parse_grid(cfg, scale);

    RunResult out;
    Trace tr;
    tr.columns = {"t", "P100", "P010", "P001"};
    for (double t : grid.times()) {
        const auto amps = single_excitation_state(system, t, tol);
        tr.rows.push_back({t, std::norm(amps[0]), std::norm(amps[1]), std::norm(amps[2])});
    }
    out.traces.emplace("probabilities", std::move(tr));

    if (n != 1) {
        Trace mult;
        mult.columns = {"i", "j", "k", "probability"};
        for (const auto& [occ, p] : multinomial_probabilities(n, system, grid.t_end, tol)) {
            mult.rows.push_back({static_cast<double>(occ[0]), static_cast<double>(occ[1]),
                                 static_cast<double>(occ[2]), p});
        }
        out.traces.emplace("multinomial_final", std::move(mult));
    }
    return out;
}

RunResult run_chain(const json& cfg, double /*tol*/) {
    double scale = 1.0;
    const ChainSystem system = parse_chain_system(cfg, &scale);
    const int n = get_int(cfg, "n", 1);
    const int source = get_int(cfg, "source", 0);
    if (n < 0) throw std::invalid_argument("chain: n must be >= 0");
    if (source < 0 || source >= system.modes()) {
        throw std::invalid_argument("chain: source mode out of range");
    }
    const TimeGrid grid = parse_grid(cfg, scale);

    RunResult out;
    Trace tr;
    tr.columns = {"t"};
    for (int j = 0; j < system.modes(); ++j) {
        tr.columns.push_back("P_mode" + std::to_string(j));
    }
    for (double t : grid.times()) {
        const auto amps = chain_single_excitation_amplitudes(system, source, t);
        std::vector<double> row{t};
        for (const auto& a : amps) row.push_back(std::norm(a));
        tr.rows.push_back(std::move(row));
    }
    out.traces.emplace("probabilities", std::move(tr));

    if (n != 1) {
        Trace mult;
        for (int j = 0; j < system.modes(); ++j) {
            mult.columns.push_back("occ_" + std::to_string(j));
        }
        mult.columns.push_back("probability");
        for (const auto& [occ, p] : chain_multinomial_probabilities(n, system, source, grid.t_end)) {
            std::vector<double> row;
            for (int o : occ) row.push_back(static_cast<double>(o));
            row.push_back(p);
            mult.rows.push_back(std::move(row));
        }
        out.traces.emplace("multinomial_final", std::move(mult));
    }
    return out;
}

// ------------------------------------------------------------- comparisons

struct SectorCompareInput {
    oracle::ModeNetwork network;
    oracle::SectorStateVector initial;
    int quanta;
    // Analytic probabilities at time t, in basis order.
    std::function<std::vector<double>(double)> analytic_probs;
    // Analytic state at time t, in basis order (for the fidelity entry).
    std::function<Cvec(double)> analytic_state;
    // Optional scaled-energy observable (dissipation agreement check).
    std::function<double(double)> analytic_mean_occ0;
};

CompareReport compare_sector(const SectorCompareInput& in, const TimeGrid& grid,
                             double tol, const std::string& scenario) {
    CompareReport rep;
    rep.scenario = scenario;
    double max_diff = 0.0;
    double max_energy_diff = 0.0;
    oracle::PropagationResult last;
    for (double t : grid.times()) {
        last = oracle::propagate_sector(in.initial, in.network, t, tol);
        const auto oracle_probs = last.state.probabilities();
        const auto analytic = in.analytic_probs(t);
        for (std::size_t i = 0; i < oracle_probs.size(); ++i) {
            max_diff = std::max(max_diff, std::abs(oracle_probs[i] - analytic[i]));
        }
        if (in.analytic_mean_occ0) {
            max_energy_diff = std::max(max_energy_diff,
                                       std::abs(last.state.mean_occupation(0) -
                                                in.analytic_mean_occ0(t)));
        }
    }
    rep.max_abs_prob_diff = max_diff;
    rep.fidelity = oracle::fidelity(in.analytic_state(grid.t_end), last.state.amplitudes);
    rep.steps = last.steps;
    rep.method = last.method;
    if (in.analytic_mean_occ0) rep.max_abs_energy_diff = max_energy_diff;
    return rep;
}

CompareReport compare_two_mode_fock(const json& cfg, double tol,
                                    const std::string& scenario_name) {
    double scale = 1.0;
    const TwoModeSystem system = scenario_name == "dissipation"
                                     ? parse_dissipation_system(cfg, &scale)
                                     : parse_two_mode_system(cfg, &scale);
    const int n = get_int(cfg, "n", scenario_name == "dissipation" ? 1 : -1);
    if (n < 0) throw std::invalid_argument(scenario_name + ": n must be >= 0");
    const TimeGrid grid = parse_grid(cfg, scale);

    SectorCompareInput in{
        oracle::make_network(system),
        oracle::basis_state(oracle::SectorBasis::enumerate(2, n), [n] {
            std::vector<int> occ{n, 0};
            return occ;
        }()),
        n,
        [&system, n, tol](double t) { return occupation_probabilities(n, system, t, tol); },
        [&system, n, tol](double t) { return binomial_coefficients(n, system, t, tol).coeffs; },
        {}};
    if (scenario_name == "dissipation") {
        in.analytic_mean_occ0 = [&system, n, tol](double t) {
            return mean_energy_fock(n, system, t, tol);
        };
    }
    return compare_sector(in, grid, tol, scenario_name);
}

CompareReport compare_three_mode(const json& cfg, double tol) {
    double scale = 1.0;
    const ThreeModeSystem system = parse_three_mode_system(cfg, &scale);
    const int n = get_int(cfg, "n", 1);
    const TimeGrid grid = parse_grid(cfg, scale);
    const auto basis = oracle::SectorBasis::enumerate(3, n);

    SectorCompareInput in{
        oracle::make_network(system),
        oracle::basis_state(basis, [n] { return std::vector<int>{n, 0, 0}; }()),
        n,
        [&system, n, tol, basis](double t) {
            const auto pm = multinomial_probabilities(n, system, t, tol);
            std::vector<double> probs;
            probs.reserve(basis.size());
            for (const auto& occ : basis.states) probs.push_back(pm.at(occ));
            return probs;
        },
        [&system, n, tol, basis](double t) {
            return spread_state(single_excitation_state(system, t, tol), n, basis);
        },
        {}};
    return compare_sector(in, grid, tol, "three_mode");
}

CompareReport compare_chain(const json& cfg, double tol) {
    double scale = 1.0;
    const ChainSystem system = parse_chain_system(cfg, &scale);
    const int n = get_int(cfg, "n", 1);
    const int source = get_int(cfg, "source", 0);
    const TimeGrid grid = parse_grid(cfg, scale);
    const auto basis = oracle::SectorBasis::enumerate(system.modes(), n);

    std::vector<int> initial_occ(static_cast<std::size_t>(system.modes()), 0);
    initial_occ[static_cast<std::size_t>(source)] = n;

    SectorCompareInput in{
        oracle::make_network(system),
        oracle::basis_state(basis, initial_occ),
        n,
        [&system, n, source, basis](double t) {
            const auto pm = chain_multinomial_probabilities(n, system, source, t);
            std::vector<double> probs;
            probs.reserve(basis.size());
            for (const auto& occ : basis.states) probs.push_back(pm.at(occ));
            return probs;
        },
        [&system, n, source, basis](double t) {
            return spread_state(chain_single_excitation_amplitudes(system, source, t), n,
                                basis);
        },
        {}};
    return compare_sector(in, grid, tol, "chain");
}

CompareReport compare_two_mode_coherent(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_two_mode_system(cfg, &scale);
    const std::complex<double> alpha = complex_from_json(cfg.at("alpha"));
    const TimeGrid grid = parse_grid(cfg, scale);
    const json oracle_cfg = cfg.value("oracle", json::object());
    const int ncut = oracle_cfg.value("ncut", default_ncut(std::abs(alpha), 0));
    const double budget = oracle_cfg.value("tail_budget", 1.0);

    const auto result = oracle::propagate_truncated_driven(
        oracle::truncated_coherent_pair(ncut, alpha, {0.0, 0.0}), ncut, system,
        DriveWaveform::zero(), grid.t_end, tol, budget);

    const CoherentPair pair = evolve_coherent(alpha, system, grid.t_end, tol);
    const Cvec analytic = oracle::truncated_coherent_pair(ncut, pair.alpha_a, pair.alpha_b);

    CompareReport rep;
    rep.scenario = "two_mode_coherent";
    rep.method = "truncated_rk4";
    rep.steps = result.steps;
    rep.tail_mass = result.tail_mass_max;
    rep.fidelity = oracle::fidelity(analytic, result.amplitudes);
    double max_diff = 0.0;
    double tv = 0.0;
    const auto op = result.joint_probabilities();
    for (int na = 0; na <= ncut; ++na) {
        for (int nb = 0; nb <= ncut; ++nb) {
            const double pa = poisson_weight(std::norm(pair.alpha_a), na) *
                              poisson_weight(std::norm(pair.alpha_b), nb);
            const double po = op[oracle::truncated_index(ncut, na, nb)];
            max_diff = std::max(max_diff, std::abs(pa - po));
            tv += std::abs(pa - po);
        }
    }
    rep.max_abs_prob_diff = max_diff;
    rep.total_variation = 0.5 * tv;
    return rep;
}

CompareReport compare_driven_vacuum(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_two_mode_system(cfg, &scale);
    const DriveWaveform drive = parse_drive(cfg, scale);
    const TimeGrid grid = parse_grid(cfg, scale);

    const DrivenCoherentPair pair = vacuum_evolution(system, drive, grid.t_end, tol);
    const json oracle_cfg = cfg.value("oracle", json::object());
    const double amax = std::max(std::abs(pair.alpha_a), std::abs(pair.alpha_b));
    const int ncut = oracle_cfg.value("ncut", default_ncut(amax, 0));
    const double budget = oracle_cfg.value("tail_budget", 1.0);

    const auto result = oracle::propagate_truncated_driven(
        oracle::truncated_vacuum(ncut), ncut, system, drive, grid.t_end, tol, budget);

    CompareReport rep;
    rep.scenario = "driven_vacuum";
    rep.method = "truncated_rk4";
    rep.steps = result.steps;
    rep.tail_mass = result.tail_mass_max;
    rep.fidelity = oracle::fidelity(
        oracle::truncated_coherent_pair(ncut, pair.alpha_a, pair.alpha_b),
        result.amplitudes);
    double max_diff = 0.0;
    double tv = 0.0;
    const auto op = result.joint_probabilities();
    for (int na = 0; na <= ncut; ++na) {
        for (int nb = 0; nb <= ncut; ++nb) {
            const double pa = poisson_weight(std::norm(pair.alpha_a), na) *
                              poisson_weight(std::norm(pair.alpha_b), nb);
            const double po = op[oracle::truncated_index(ncut, na, nb)];
            max_diff = std::max(max_diff, std::abs(pa - po));
            tv += std::abs(pa - po);
        }
    }
    rep.max_abs_prob_diff = max_diff;
    rep.total_variation = 0.5 * tv;
    return rep;
}

CompareReport compare_driven_fock(const json& cfg, double tol) {
    double scale = 1.0;
    const TwoModeSystem system = parse_two_mode_system(cfg, &scale);
    const DriveWaveform drive = parse_drive(cfg, scale);
    const int n = get_int(cfg, "n");
    const int m = get_int(cfg, "m");
    const std::complex<double> alpha = complex_from_json(cfg.at("probe").at("alpha"));
    const std::complex<double> beta = complex_from_json(cfg.at("probe").at("beta"));
    const TimeGrid grid = parse_grid(cfg, scale);

    const json oracle_cfg = cfg.value("oracle", json::object());
    const DrivenCoherentPair pair = vacuum_evolution(system, drive, grid.t_end, tol);
    const double amax = std::max({std::abs(pair.alpha_a), std::abs(pair.alpha_b),
                                  std::abs(alpha), std::abs(beta)});
    const int ncut = oracle_cfg.value("ncut", default_ncut(amax, n + m));
    const double budget = oracle_cfg.value("tail_budget", 1.0);

    const auto result = oracle::propagate_truncated_driven(
        oracle::truncated_fock_pair(ncut, n, m), ncut, system, drive, grid.t_end, tol,
        budget);

    // The probe lives in the normal-mode coherent basis; expressed in the
    // lab modes it is the product coherent state below.
    const double theta = system.resonant() ? 0.25 * M_PI : mixing_angle(system, grid.t_end);
    const std::complex<double> probe_a = alpha * std::cos(theta) + beta * std::sin(theta);
    const std::complex<double> probe_b = beta * std::cos(theta) - alpha * std::sin(theta);
    const Cvec probe = oracle::truncated_coherent_pair(ncut, probe_a, probe_b);
    std::complex<double> overlap{0.0, 0.0};
    for (std::size_t i = 0; i < probe.size(); ++i) {
        overlap += std::conj(probe[i]) * result.amplitudes[i];
    }
    const auto analytic =
        fock_pair_coherent_amplitude(n, m, alpha, beta, system, drive, grid.t_end, tol);

    CompareReport rep;
    rep.scenario = "driven_fock";
    rep.method = "truncated_rk4";
    rep.steps = result.steps;
    rep.tail_mass = result.tail_mass_max;
    rep.max_abs_prob_diff = std::abs(std::norm(analytic) - std::norm(overlap));
    return rep;
}

}  // namespace

Experiment Experiment::parse(const json& config) {
    if (!config.is_object()) throw std::invalid_argument("config: expected a JSON object");
    const std::string scenario = config.value("scenario", std::string());
    if (!kScenarios.count(scenario)) {
        throw std::invalid_argument("config: unknown scenario '" + scenario + "'");
    }

    Experiment e;
    e.scenario_ = scenario;
    e.config_ = config;
    e.tol_ = config.value("tol", 1e-10);
    if (!(e.tol_ > 0.0)) throw std::invalid_argument("config: tol must be > 0");

    if (scenario == "compare") {
        if (!config.contains("target") || !config.at("target").is_object()) {
            throw std::invalid_argument("compare: missing 'target' config");
        }
        const std::string inner = config.at("target").value("scenario", std::string());
        if (!kScenarios.count(inner) || inner == "compare") {
            throw std::invalid_argument("compare: target scenario '" + inner +
                                        "' not comparable");
        }
        Experiment probe = Experiment::parse(config.at("target"));
        e.grid_ = probe.grid_;
        return e;
    }

    // Scenario-specific schema checks: parsing either succeeds or throws the
    // schema error the caller reports.
    double scale = 1.0;
    if (scenario == "two_mode_fock") {
        parse_two_mode_system(config, &scale);
        if (get_int(config, "n") < 0) throw std::invalid_argument("n must be >= 0");
    } else if (scenario == "two_mode_coherent") {
        const TwoModeSystem sys = parse_two_mode_system(config, &scale);
        if (!config.contains("alpha")) throw std::invalid_argument("missing 'alpha'");
        complex_from_json(config.at("alpha"));
        if (!sys.resonant()) {
            throw std::invalid_argument(
                "two_mode_coherent: analytic layer requires resonance (Omega == omega0)");
        }
    } else if (scenario == "dissipation") {
        parse_dissipation_system(config, &scale);
    } else if (scenario == "driven_vacuum") {
        parse_two_mode_system(config, &scale);
        parse_drive(config, scale);
    } else if (scenario == "driven_fock") {
        parse_two_mode_system(config, &scale);
        parse_drive(config, scale);
        get_int(config, "n");
        get_int(config, "m");
        if (!config.contains("probe")) throw std::invalid_argument("missing 'probe'");
        complex_from_json(config.at("probe").at("alpha"));
        complex_from_json(config.at("probe").at("beta"));
    } else if (scenario == "three_mode") {
        parse_three_mode_system(config, &scale);
    } else if (scenario == "chain") {
        parse_chain_system(config, &scale);
    }
    e.grid_ = parse_grid(config, scale);
    return e;
}

std::vector<Diagnostic> Experiment::validate(const json& config) {
    std::vector<Diagnostic> out;
    try {
        Experiment e = parse(config);
        const json& cfg = e.scenario_ == "compare" ? config.at("target") : config;
        const std::string scenario = cfg.value("scenario", std::string());

        // Physics warnings: theta-dot != 0 means the closed forms drop terms.
        if (scenario == "two_mode_fock" || scenario == "driven_vacuum" ||
            scenario == "driven_fock") {
            double scale = 1.0;
            const TwoModeSystem sys = parse_two_mode_system(cfg, &scale);
            const TimeGrid grid = parse_grid(cfg, scale);
            if (sys.delta() > 0.0 && !sys.schedule().is_constant()) {
                const double bound =
                    theta_dot_bound(sys, grid.t_start, std::max(grid.t_end, grid.t_start + 1e-9));
                if (bound > 0.0) {
                    out.push_back({Diagnostic::Level::Warning,
                                   "analytic layer approximate for delta > 0 with "
                                   "time-dependent coupling (max |theta_dot| ~ " +
                                       format_double(bound) + "); use compare"});
                }
            }
        }
        if (scenario == "three_mode") {
            double scale = 1.0;
            const ThreeModeSystem sys = parse_three_mode_system(cfg, &scale);
            const TimeGrid grid = parse_grid(cfg, scale);
            if (!sys.constant_coupling_ratio(grid.t_start, grid.t_end)) {
                out.push_back({Diagnostic::Level::Warning,
                               "three_mode closed forms assume a constant g/g' ratio; "
                               "use compare to quantify the deviation"});
            }
        }
        if (scenario == "chain") {
            double scale = 1.0;
            const ChainSystem sys = parse_chain_system(cfg, &scale);
            if (!sys.all_constant()) {
                out.push_back({Diagnostic::Level::Warning,
                               "chain closed forms require constant couplings; only the "
                               "oracle path can evaluate this config"});
            }
        }
        if (scenario == "chain" || scenario == "three_mode") {
            const int n = get_int(cfg, "n", 1);
            int modes = 3;
            if (scenario == "chain") {
                double scale = 1.0;
                modes = parse_chain_system(cfg, &scale).modes();
            }
            const std::uint64_t states = composition_count(n, modes);
            if (states > 2'000'000ull) {
                out.push_back({Diagnostic::Level::Error,
                               "sector basis would need " + std::to_string(states) +
                                   " states, above the 2e6 capacity"});
            }
        }
        if (scenario == "driven_vacuum" || scenario == "driven_fock") {
            const json oracle_cfg = cfg.value("oracle", json::object());
            if (!oracle_cfg.contains("tail_budget")) {
                out.push_back({Diagnostic::Level::Warning,
                               "no oracle.tail_budget declared; compare runs will "
                               "report the boundary mass without enforcing it"});
            }
        }
    } catch (const std::exception& ex) {
        out.push_back({Diagnostic::Level::Error, ex.what()});
    }
    return out;
}

RunResult Experiment::run(const std::string& out_dir,
                          std::optional<double> tol_override) const {
    const double tol = tol_override.value_or(tol_);
    RunResult result;
    if (scenario_ == "two_mode_fock") {
        result = run_two_mode_fock(config_, tol);
    } else if (scenario_ == "two_mode_coherent") {
        result = run_two_mode_coherent(config_, tol);
    } else if (scenario_ == "dissipation") {
        result = run_dissipation(config_, tol);
    } else if (scenario_ == "driven_vacuum") {
        result = run_driven_vacuum(config_, tol);
    } else if (scenario_ == "driven_fock") {
        result = run_driven_fock(config_, tol);
    } else if (scenario_ == "three_mode") {
        result = run_three_mode(config_, tol);
    } else if (scenario_ == "chain") {
        result = run_chain(config_, tol);
    } else {  // compare
        result.reports.emplace("compare", compare(tol).to_json());
    }
    write_artifacts(result, config_, out_dir);
    return result;
}

CompareReport Experiment::compare(std::optional<double> tol_override) const {
    const double tol = tol_override.value_or(tol_);
    const json& cfg = scenario_ == "compare" ? config_.at("target") : config_;
    const std::string scenario = cfg.value("scenario", std::string());
    if (scenario == "two_mode_fock" || scenario == "dissipation") {
        return compare_two_mode_fock(cfg, tol, scenario);
    }
    if (scenario == "two_mode_coherent") return compare_two_mode_coherent(cfg, tol);
    if (scenario == "driven_vacuum") return compare_driven_vacuum(cfg, tol);
    if (scenario == "driven_fock") return compare_driven_fock(cfg, tol);
    if (scenario == "three_mode") return compare_three_mode(cfg, tol);
    if (scenario == "chain") return compare_chain(cfg, tol);
    throw std::invalid_argument("compare: scenario '" + scenario + "' not comparable");
}

}  // namespace qosc
