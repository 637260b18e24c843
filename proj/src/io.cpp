#include "qosc/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "qosc/oracle.hpp"

namespace qosc {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw std::invalid_argument(std::string("config: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

}  // namespace

json schedule_to_json(const CouplingSchedule& schedule) {
    json j;
    j["kind"] = schedule.kind_name();
    std::visit(
        [&j](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ConstantCoupling>) {
                j["g0"] = s.g0;
            } else if constexpr (std::is_same_v<S, SwitchCoupling> ||
                                 std::is_same_v<S, ExpDecayCoupling>) {
                j["g0"] = s.g0;
                j["tau"] = s.tau;
            } else {
                j["times"] = s.times;
                j["values"] = s.values;
            }
        },
        schedule.variant());
    return j;
}

CouplingSchedule schedule_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument("schedule: expected object with 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        return CouplingSchedule::constant(require_number(j, "g0"));
    }
    if (kind == "switch") {
        return CouplingSchedule::switched(require_number(j, "g0"), require_number(j, "tau"));
    }
    if (kind == "exp_decay") {
        return CouplingSchedule::exp_decay(require_number(j, "g0"), require_number(j, "tau"));
    }
    if (kind == "tabulated") {
        return CouplingSchedule::tabulated(j.at("times").get<std::vector<double>>(),
                                           j.at("values").get<std::vector<double>>());
    }
    throw std::invalid_argument("schedule: unknown kind '" + kind + "'");
}

std::complex<double> complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw std::invalid_argument("complex value: expected number or [re, im]");
}

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json drive_to_json(const DriveWaveform& drive) {
    json j;
    j["kind"] = drive.kind_name();
    std::visit(
        [&j](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, ConstantDrive>) {
                j["k0"] = complex_to_json(d.k0);
            } else if constexpr (std::is_same_v<D, HarmonicDrive>) {
                j["k0"] = complex_to_json(d.k0);
                j["nu"] = d.nu;
            } else if constexpr (std::is_same_v<D, TabulatedDrive>) {
                j["times"] = d.times;
                json vals = json::array();
                for (const auto& v : d.values) vals.push_back(complex_to_json(v));
                j["values"] = vals;
            }
        },
        drive.variant());
    return j;
}

DriveWaveform drive_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument("drive: expected object with 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return DriveWaveform::zero();
    if (kind == "constant") return DriveWaveform::constant(complex_from_json(j.at("k0")));
    if (kind == "harmonic") {
        return DriveWaveform::harmonic(complex_from_json(j.at("k0")),
                                       require_number(j, "nu"));
    }
    if (kind == "tabulated") {
        std::vector<std::complex<double>> values;
        for (const auto& v : j.at("values")) values.push_back(complex_from_json(v));
        return DriveWaveform::tabulated(j.at("times").get<std::vector<double>>(),
                                        std::move(values));
    }
    throw std::invalid_argument("drive: unknown kind '" + kind + "'");
}

json two_mode_to_json(const TwoModeSystem& system) {
    json j;
    j["omega0"] = system.omega0();
    j["Omega"] = system.Omega();
    j["schedule"] = schedule_to_json(system.schedule());
    return j;
}

TwoModeSystem two_mode_from_json(const json& j) {
    const double omega0 = require_number(j, "omega0");
    const double Omega = j.contains("Omega") ? require_number(j, "Omega") : omega0;
    if (!j.contains("schedule")) {
        throw std::invalid_argument("two-mode system: missing 'schedule'");
    }
    return TwoModeSystem(omega0, Omega, schedule_from_json(j.at("schedule")));
}

json three_mode_to_json(const ThreeModeSystem& system) {
    json j;
    j["omega0"] = system.omega0();
    j["g"] = schedule_to_json(system.g());
    j["g_prime"] = schedule_to_json(system.g_prime());
    return j;
}

ThreeModeSystem three_mode_from_json(const json& j) {
    return ThreeModeSystem(require_number(j, "omega0"),
                           schedule_from_json(j.at("g")),
                           schedule_from_json(j.at("g_prime")));
}

json chain_to_json(const ChainSystem& system) {
    json j;
    j["omega0"] = system.omega0();
    json c = json::array();
    for (const auto& s : system.couplings()) c.push_back(schedule_to_json(s));
    j["couplings"] = c;
    return j;
}

ChainSystem chain_from_json(const json& j) {
    if (!j.contains("couplings") || !j.at("couplings").is_array()) {
        throw std::invalid_argument("chain system: missing 'couplings' array");
    }
    std::vector<CouplingSchedule> couplings;
    for (const auto& c : j.at("couplings")) couplings.push_back(schedule_from_json(c));
    return ChainSystem(require_number(j, "omega0"), std::move(couplings));
}

json density_matrix_to_json(const ReducedDensityMatrix& rho) {
    json rows = json::array();
    for (int p = 0; p < rho.dim; ++p) {
        json row = json::array();
        for (int q = 0; q < rho.dim; ++q) row.push_back(complex_to_json(rho(p, q)));
        rows.push_back(row);
    }
    return rows;
}

std::uint64_t config_digest(const json& config) {
    const std::string dump = config.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
    return std::string(buf);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

void write_csv(const std::string& path, const std::vector<std::string>& header_lines,
               const Trace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (const auto& line : header_lines) out << "# " << line << "\n";
    for (std::size_t c = 0; c < trace.columns.size(); ++c) {
        out << (c ? "," : "") << trace.columns[c];
    }
    out << "\n";
    for (const auto& row : trace.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_double(row[c]);
        }
        out << "\n";
    }
}

void write_json_file(const std::string& path, const json& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json_file: cannot open " + path);
    out << body.dump(2) << "\n";
}

Trace sector_state_to_trace(const oracle::SectorStateVector& state) {
    Trace tr;
    for (int j = 0; j < state.basis.modes; ++j) {
        tr.columns.push_back("n_" + std::to_string(j));
    }
    tr.columns.push_back("re");
    tr.columns.push_back("im");
    for (std::size_t i = 0; i < state.basis.size(); ++i) {
        std::vector<double> row;
        row.reserve(state.basis.states[i].size() + 2);
        for (int occ : state.basis.states[i]) row.push_back(static_cast<double>(occ));
        row.push_back(state.amplitudes[i].real());
        row.push_back(state.amplitudes[i].imag());
        tr.rows.push_back(std::move(row));
    }
    return tr;
}

}  // namespace qosc
