// qosc — coupled-oscillator dynamics CLI: run experiment configs, validate
// them, or compare the closed-form layer against the brute-force oracle.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qosc/errors.hpp"
#include "qosc/experiment.hpp"
#include "qosc/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path);
    }
    return nlohmann::json::parse(in);
}

std::string default_out_dir(const std::string& cli_value) {
    if (!cli_value.empty()) return cli_value;
    if (const char* env = std::getenv("QOSC_OUT_DIR")) return env;
    return ".";
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const nlohmann::json::exception& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled quantum oscillator dynamics (closed forms + oracle)"};
    app.set_version_flag("--version", std::string("qosc ") + qosc::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double tol = 0.0;
    bool have_tol = false;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("config", config_path, "experiment config (JSON)")->required();
        if (with_out) cmd->add_option("--out", out_dir, "output directory (default $QOSC_OUT_DIR or .)");
        cmd->add_option_function<double>(
               "--tol", [&](double v) { tol = v; have_tol = true; },
               "tolerance override for quadrature/propagation");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario and write its artifacts");
    add_common(run_cmd, true);
    CLI::App* validate_cmd = app.add_subcommand("validate", "check a config and print diagnostics");
    add_common(validate_cmd, false);
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "run analytic vs oracle and write a deviation report");
    add_common(compare_cmd, true);

    CLI11_PARSE(app, argc, argv);

    const std::optional<double> tol_override =
        have_tol ? std::optional<double>(tol) : std::nullopt;

    if (run_cmd->parsed()) {
        return run_guarded([&] {
            const auto cfg = load_config(config_path);
            const auto exp = qosc::Experiment::parse(cfg);
            const auto result = exp.run(default_out_dir(out_dir), tol_override);
            for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
            return 0;
        });
    }

    if (validate_cmd->parsed()) {
        return run_guarded([&] {
            const auto cfg = load_config(config_path);
            const auto diagnostics = qosc::Experiment::validate(cfg);
            bool has_error = false;
            for (const auto& d : diagnostics) {
                const bool err = d.level == qosc::Diagnostic::Level::Error;
                has_error = has_error || err;
                std::cout << (err ? "error: " : "warning: ") << d.message << "\n";
            }
            if (diagnostics.empty()) std::cout << "ok\n";
            return has_error ? kExitUsage : 0;
        });
    }

    // compare
    return run_guarded([&] {
        const auto cfg = load_config(config_path);
        const auto exp = qosc::Experiment::parse(cfg);
        const auto report = exp.compare(tol_override);
        auto body = report.to_json();
        std::cout << body.dump(2) << "\n";
        body["qosc_version"] = qosc::kVersion;
        body["config_digest"] = qosc::digest_hex(qosc::config_digest(cfg));
        const std::string dir = default_out_dir(out_dir);
        std::filesystem::create_directories(dir);
        const std::string prefix =
            cfg.value("out_prefix", cfg.value("scenario", std::string("run")));
        qosc::write_json_file(dir + "/" + prefix + "_compare.json", body);
        return 0;
    });
}
