#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qosc/experiment.hpp"
#include "qosc/io.hpp"
#include "test_helpers.hpp"

using namespace qosc;
using nlohmann::json;

namespace {

json resonant_fock_config() {
    return json{{"scenario", "two_mode_fock"},
                {"system",
                 {{"omega0", 1.0},
                  {"Omega", 1.0},
                  {"schedule", {{"kind", "constant"}, {"g0", 0.5}}}}},
                {"n", 1},
                {"grid", {{"t_start", 0.0}, {"t_end", 3.0}, {"samples", 31}}}};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("schedule and drive JSON round trips") {
    const auto schedules = {
        CouplingSchedule::constant(0.7),
        CouplingSchedule::switched(1.1, 2.0),
        CouplingSchedule::exp_decay(0.9, 1.4),
        CouplingSchedule::tabulated({0.0, 0.5, 2.0}, {0.1, 0.9, 0.2}),
    };
    for (const auto& s : schedules) {
        const auto back = schedule_from_json(schedule_to_json(s));
        CHECK(back.kind_name() == s.kind_name());
        for (double t : {0.0, 0.4, 1.3, 2.0}) {
            CHECK(eval_coupling(back, t) == eval_coupling(s, t));
        }
    }

    const auto drives = {
        DriveWaveform::zero(),
        DriveWaveform::constant({0.2, -0.3}),
        DriveWaveform::harmonic({0.1, 0.4}, 0.9),
        DriveWaveform::tabulated({0.0, 1.0}, {{0.0, 0.1}, {0.5, -0.5}}),
    };
    for (const auto& d : drives) {
        const auto back = drive_from_json(drive_to_json(d));
        CHECK(back.kind_name() == d.kind_name());
        for (double t : {0.0, 0.3, 1.0}) {
            CHECK(std::abs(eval_drive(back, t) - eval_drive(d, t)) == 0.0);
        }
    }
}

TEST_CASE("config schema violations are rejected with usable messages") {
    CHECK_THROWS_AS(Experiment::parse(json{{"scenario", "warp_drive"}}),
                    std::invalid_argument);
    auto cfg = resonant_fock_config();
    cfg.erase("grid");
    CHECK_THROWS_AS(Experiment::parse(cfg), std::invalid_argument);

    cfg = resonant_fock_config();
    cfg["grid"]["samples"] = 1;
    CHECK_THROWS_AS(Experiment::parse(cfg), std::invalid_argument);

    cfg = resonant_fock_config();
    cfg["grid"]["t_end"] = -1.0;
    CHECK_THROWS_AS(Experiment::parse(cfg), std::invalid_argument);

    cfg = resonant_fock_config();
    cfg["system"]["Omega"] = 0.5;  // delta < 0
    CHECK_THROWS_AS(Experiment::parse(cfg), std::invalid_argument);
}

TEST_CASE("validate: clean configs come back empty, physics issues warn") {
    CHECK(Experiment::validate(resonant_fock_config()).empty());

    // Detuned, time-dependent coupling: approximate analytic layer.
    auto cfg = resonant_fock_config();
    cfg["system"]["Omega"] = 1.8;
    cfg["system"]["schedule"] = {{"kind", "tabulated"},
                                 {"times", {0.0, 1.0, 2.0, 3.0}},
                                 {"values", {0.5, 0.4, 0.2, 0.1}}};
    const auto diags = Experiment::validate(cfg);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].level == Diagnostic::Level::Warning);
    CHECK(diags[0].message.find("compare") != std::string::npos);

    // A chain whose sector would not fit.
    json chain_cfg{{"scenario", "chain"},
                   {"omega0", 1.0},
                   {"couplings", json::array()},
                   {"n", 12},
                   {"source", 0},
                   {"grid", {{"t_start", 0.0}, {"t_end", 1.0}, {"samples", 2}}}};
    for (int i = 0; i < 29; ++i) {
        chain_cfg["couplings"].push_back({{"kind", "constant"}, {"g0", 0.1}});
    }
    bool capacity = false;
    for (const auto& d : Experiment::validate(chain_cfg)) {
        capacity = capacity || d.message.find("capacity") != std::string::npos;
    }
    CHECK(capacity);

    // Bad schema surfaces as an error diagnostic rather than a throw.
    json broken{{"scenario", "two_mode_fock"}};
    const auto errs = Experiment::validate(broken);
    REQUIRE(!errs.empty());
    CHECK(errs[0].level == Diagnostic::Level::Error);
}

TEST_CASE("two_mode_fock run reproduces (cos^2, sin^2) columns") {
    const auto exp = Experiment::parse(resonant_fock_config());
    const auto result = exp.run();
    const auto& tr = result.traces.at("probabilities");
    REQUIRE(tr.columns.size() == 3);
    CHECK(tr.columns[1] == "P1_0");
    CHECK(tr.columns[2] == "P0_1");
    for (const auto& row : tr.rows) {
        const double t = row[0];
        CHECK(row[1] == doctest::Approx(std::pow(std::cos(0.5 * t), 2)).epsilon(1e-12));
        CHECK(row[2] == doctest::Approx(std::pow(std::sin(0.5 * t), 2)).epsilon(1e-12));
    }
    const auto& en = result.traces.at("energy");
    CHECK(en.rows.front()[1] == doctest::Approx(1.0));

    // Long-format export mirrors the wide columns.
    const auto& lng = result.traces.at("probabilities_long");
    CHECK(lng.columns == std::vector<std::string>{"t", "s", "probability"});
    CHECK(lng.rows.size() == tr.rows.size() * 2);

    // Density matrix report: nested arrays of [re, im].
    const auto& rho = result.reports.at("rho_a").at("rho");
    REQUIRE(rho.is_array());
    REQUIRE(rho.size() == 2);
    CHECK(rho[0][0].is_array());
    CHECK(rho[0][0].size() == 2);
    const double p00 = rho[0][0][0].get<double>();
    const double p11 = rho[1][1][0].get<double>();
    CHECK(p00 + p11 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dissipation run emits the rectified energy curve") {
    // g0 tau = pi/2: E(x) = cos^2((pi/2)(1 - e^{-2x/pi})).
    json cfg{{"scenario", "dissipation"},
             {"g0", 1.0},
             {"tau", M_PI / 2.0},
             {"grid", {{"t_start", 0.0}, {"t_end", 12.0}, {"samples", 121}}}};
    const auto result = Experiment::parse(cfg).run();
    const auto& tr = result.traces.at("energy");
    for (const auto& row : tr.rows) {
        const double x = row[0];
        const double expected =
            std::pow(std::cos((M_PI / 2.0) * (1.0 - std::exp(-2.0 * x / M_PI))), 2);
        CHECK(std::abs(row[1] - expected) < 1e-12);
    }
}

TEST_CASE("runs write deterministic artifacts with digest headers") {
    TempDir dir("qosc_experiment_test");
    const auto cfg = resonant_fock_config();
    const auto exp = Experiment::parse(cfg);

    const auto first = exp.run(dir.path.string() + "/a");
    const auto second = exp.run(dir.path.string() + "/b");
    REQUIRE(!first.files.empty());
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i) {
        const auto a = slurp(first.files[i]);
        const auto b = slurp(second.files[i]);
        CHECK(a == b);  // byte-identical
        CHECK(a.find(digest_hex(config_digest(cfg))) != std::string::npos);
        CHECK(a.find("qosc") != std::string::npos);
    }
}

TEST_CASE("compare: exact regimes sit at oracle precision") {
    auto cfg = resonant_fock_config();
    cfg["n"] = 3;
    const auto report = Experiment::parse(cfg).compare();
    CHECK(report.max_abs_prob_diff < 1e-10);
    REQUIRE(report.fidelity.has_value());
    CHECK(*report.fidelity > 1.0 - 1e-10);
    const auto body = report.to_json();
    CHECK(body.contains("max_abs_prob_diff"));
    CHECK(body.contains("fidelity"));
    CHECK(body.contains("tail_mass"));
    CHECK(body.contains("steps"));
}

TEST_CASE("compare scenario wraps a target config") {
    json cfg{{"scenario", "compare"}, {"target", resonant_fock_config()}};
    const auto report = Experiment::parse(cfg).compare();
    CHECK(report.scenario == "two_mode_fock");
    CHECK(report.max_abs_prob_diff < 1e-10);

    TempDir dir("qosc_compare_run");
    const auto result = Experiment::parse(cfg).run(dir.path.string());
    REQUIRE(result.reports.count("compare") == 1);
    REQUIRE(result.files.size() == 1);
    CHECK(slurp(result.files[0]).find("max_abs_prob_diff") != std::string::npos);
}

TEST_CASE("compare: detuned time-dependent coupling shows a real deviation") {
    // theta-dot != 0 regime: the closed forms drop terms, the oracle does
    // not, and the report must document a genuinely nonzero gap.
    json cfg{{"scenario", "two_mode_fock"},
             {"system",
              {{"omega0", 1.0},
               {"Omega", 1.5},
               {"schedule", {{"kind", "exp_decay"}, {"g0", 0.8}, {"tau", 1.0}}}}},
             {"n", 1},
             {"grid", {{"t_start", 0.0}, {"t_end", 4.0}, {"samples", 17}}}};
    const auto report = Experiment::parse(cfg).compare();
    CHECK(report.max_abs_prob_diff > 1e-6);
    CHECK(report.max_abs_prob_diff < 0.5);
}

TEST_CASE("driven vacuum compare reports fidelity, TV distance and tail mass") {
    json cfg{{"scenario", "driven_vacuum"},
             {"system",
              {{"omega0", 1.0},
               {"Omega", 1.0},
               {"schedule", {{"kind", "constant"}, {"g0", 0.2}}}}},
             {"drive", {{"kind", "harmonic"}, {"k0", {0.3, 0.0}}, {"nu", 0.8}}},
             {"grid", {{"t_start", 0.0}, {"t_end", 6.0}, {"samples", 13}}}};
    const auto report = Experiment::parse(cfg).compare();
    REQUIRE(report.fidelity.has_value());
    CHECK(*report.fidelity > 1.0 - 1e-6);
    REQUIRE(report.total_variation.has_value());
    CHECK(*report.total_variation < 1e-6);
    REQUIRE(report.tail_mass.has_value());
    CHECK(*report.tail_mass < 1e-6);
}

TEST_CASE("driven_fock run traces the probe amplitude and compares cleanly") {
    json cfg{{"scenario", "driven_fock"},
             {"system",
              {{"omega0", 1.0},
               {"Omega", 1.0},
               {"schedule", {{"kind", "constant"}, {"g0", 0.3}}}}},
             {"drive", {{"kind", "harmonic"}, {"k0", {0.2, 0.0}}, {"nu", 0.7}}},
             {"n", 1},
             {"m", 0},
             {"probe", {{"alpha", {0.4, 0.1}}, {"beta", {-0.2, 0.3}}}},
             {"grid", {{"t_start", 0.0}, {"t_end", 2.0}, {"samples", 9}}}};
    const auto result = Experiment::parse(cfg).run();
    const auto& tr = result.traces.at("probe");
    REQUIRE(tr.columns.size() == 4);
    for (const auto& row : tr.rows) {
        CHECK(row[3] == doctest::Approx(row[1] * row[1] + row[2] * row[2]).epsilon(1e-12));
    }
    // theta-dot = 0 regime: probe probability density must match the oracle.
    const auto rep = Experiment::parse(cfg).compare();
    CHECK(rep.max_abs_prob_diff < 1e-8);
    REQUIRE(rep.tail_mass.has_value());
    CHECK(*rep.tail_mass < 1e-10);
}

TEST_CASE("time units: config times are interpreted in 1/omega0 by default") {
    // Same physical setup, expressed twice: omega0 = 2 with times in 1/omega0
    // units vs absolute times. P01(t_phys) must agree.
    json scaled{{"scenario", "two_mode_fock"},
                {"system",
                 {{"omega0", 2.0},
                  {"Omega", 2.0},
                  {"schedule", {{"kind", "constant"}, {"g0", 0.5}}}}},
                {"n", 1},
                {"grid", {{"t_start", 0.0}, {"t_end", 4.0}, {"samples", 5}}}};
    json absolute = scaled;
    absolute["units"] = "absolute";
    absolute["grid"]["t_end"] = 2.0;  // 4 / omega0

    const auto a = Experiment::parse(scaled).run().traces.at("probabilities");
    const auto b = Experiment::parse(absolute).run().traces.at("probabilities");
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i][0] == doctest::Approx(b.rows[i][0]));
        CHECK(a.rows[i][2] == doctest::Approx(b.rows[i][2]).epsilon(1e-12));
    }
}

TEST_CASE("three_mode and chain runs emit probability traces that sum to one") {
    json three{{"scenario", "three_mode"},
               {"omega0", 1.0},
               {"g", {{"kind", "constant"}, {"g0", 0.3}}},
               {"g_prime", {{"kind", "constant"}, {"g0", 0.4}}},
               {"n", 2},
               {"grid", {{"t_start", 0.0}, {"t_end", 5.0}, {"samples", 11}}}};
    const auto r3 = Experiment::parse(three).run();
    for (const auto& row : r3.traces.at("probabilities").rows) {
        CHECK(row[1] + row[2] + row[3] == doctest::Approx(1.0).epsilon(1e-12));
    }
    double mtotal = 0.0;
    for (const auto& row : r3.traces.at("multinomial_final").rows) mtotal += row.back();
    CHECK(mtotal == doctest::Approx(1.0).epsilon(1e-12));

    json chain{{"scenario", "chain"},
               {"omega0", 1.0},
               {"couplings",
                {{{"kind", "constant"}, {"g0", 0.5}}, {{"kind", "constant"}, {"g0", 0.5}}}},
               {"n", 1},
               {"source", 0},
               {"grid", {{"t_start", 0.0}, {"t_end", 5.0}, {"samples", 11}}}};
    const auto rc = Experiment::parse(chain).run();
    for (const auto& row : rc.traces.at("probabilities").rows) {
        CHECK(row[1] + row[2] + row[3] == doctest::Approx(1.0).epsilon(1e-12));
    }
}
