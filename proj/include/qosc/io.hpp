// io.hpp — JSON (de)serialization of schedules, drives and systems, and the
// CSV/JSON artifact writers shared by the CLI scenarios.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosc/coupling.hpp"
#include "qosc/drive_waveform.hpp"
#include "qosc/multimode.hpp"
#include "qosc/two_mode.hpp"

namespace qosc {

nlohmann::json schedule_to_json(const CouplingSchedule& schedule);
CouplingSchedule schedule_from_json(const nlohmann::json& j);

nlohmann::json drive_to_json(const DriveWaveform& drive);
DriveWaveform drive_from_json(const nlohmann::json& j);

nlohmann::json two_mode_to_json(const TwoModeSystem& system);
TwoModeSystem two_mode_from_json(const nlohmann::json& j);

nlohmann::json three_mode_to_json(const ThreeModeSystem& system);
ThreeModeSystem three_mode_from_json(const nlohmann::json& j);

nlohmann::json chain_to_json(const ChainSystem& system);
ChainSystem chain_from_json(const nlohmann::json& j);

// Density matrices serialize as nested arrays of [re, im].
nlohmann::json density_matrix_to_json(const ReducedDensityMatrix& rho);

std::complex<double> complex_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(std::complex<double> z);

// FNV-1a over the canonical (sorted-key) dump; embedded in artifact headers
// so outputs are traceable to the exact config that produced them.
std::uint64_t config_digest(const nlohmann::json& config);
std::string digest_hex(std::uint64_t digest);

// Round-trip double formatting ("%.17g"), locale-independent.
std::string format_double(double v);

struct Trace {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace oracle {
struct SectorStateVector;
}

// Long-format export of a sector state: one row per basis state, columns
// (n_1, ..., n_m, re, im).
Trace sector_state_to_trace(const oracle::SectorStateVector& state);

// Writes "# key=value" comment headers, a column-name line, then the rows.
void write_csv(const std::string& path, const std::vector<std::string>& header_lines,
               const Trace& trace);

void write_json_file(const std::string& path, const nlohmann::json& body);

}  // namespace qosc
