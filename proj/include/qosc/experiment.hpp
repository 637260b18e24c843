// experiment.hpp — experiment configs, scenario dispatch, and the
// analytic-vs-oracle comparison engine behind the CLI.
#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qosc/io.hpp"

namespace qosc {

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    int samples = 0;

    std::vector<double> times() const;
};

struct Diagnostic {
    enum class Level { Error, Warning };
    Level level = Level::Error;
    std::string message;
};

// Deviation report of one analytic-vs-oracle run. Serialized with the four
// core keys (max_abs_prob_diff, fidelity, tail_mass, steps); fields that a
// scenario cannot measure serialize as null.
struct CompareReport {
    std::string scenario;
    std::string method;
    double max_abs_prob_diff = 0.0;
    std::optional<double> fidelity;
    std::optional<double> tail_mass;
    std::optional<double> total_variation;
    std::optional<double> max_abs_energy_diff;
    std::size_t steps = 0;

    nlohmann::json to_json() const;
};

struct RunResult {
    std::map<std::string, Trace> traces;
    std::map<std::string, nlohmann::json> reports;
    std::vector<std::string> files;
};

// One experiment = one JSON document. Parsing performs full schema
// validation and throws std::invalid_argument with a usable message;
// validate() returns the same findings (plus physics warnings) as a list.
class Experiment {
 public:
    static Experiment parse(const nlohmann::json& config);
    static std::vector<Diagnostic> validate(const nlohmann::json& config);

    const std::string& scenario() const { return scenario_; }
    const nlohmann::json& config() const { return config_; }
    const TimeGrid& grid() const { return grid_; }
    double tolerance() const { return tol_; }

    // Evaluates the scenario; writes artifacts under out_dir when nonempty.
    RunResult run(const std::string& out_dir = {},
                  std::optional<double> tol_override = {}) const;

    // Runs the scenario analytically and through the oracle side by side.
    // For scenario "compare" this targets the nested config.
    CompareReport compare(std::optional<double> tol_override = {}) const;

 private:
    Experiment() = default;

    std::string scenario_;
    nlohmann::json config_;
    TimeGrid grid_;
    double tol_ = 1e-10;
};

}  // namespace qosc
