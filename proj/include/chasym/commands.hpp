#pragma once

// Subcommand implementations behind the chasym CLI. Each takes a parsed JSON
// document, writes its outputs under `out` and returns a JSON summary.
// Configs are fully validated before anything is written.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "chasym/record.hpp"

namespace chasym {

namespace fs = std::filesystem;

struct Outputs {
  fs::path dir;
  bool gnuplot = false;
};

nlohmann::json classify_command(const nlohmann::json& config, const Outputs& out);
/// mode: eig | profile | kernel | decay-fit
nlohmann::json spectrum_command(const std::string& mode, const nlohmann::json& config, const Outputs& out);
nlohmann::json simulate_command(const nlohmann::json& config, const Outputs& out);
nlohmann::json scaled_command(const nlohmann::json& config, const Outputs& out);
/// `config` may be null for defaults.
nlohmann::json analyze_command(const fs::path& run_dir, const nlohmann::json& config, const Outputs& out);

/// Aligned text rendering of a classify summary.
std::string classify_table(const nlohmann::json& summary);

/// Analysis of an in-memory physical-frame run (used by analyze and the scenarios).
nlohmann::json analyze_record(const RunRecord& record, const nlohmann::json& config, const Outputs& out);

/// error.json (and a diagnostic snapshot when one is attached) under `dir`.
void write_failure(const fs::path& dir, const std::string& kind, const std::string& message,
                   const Snapshot* last_state = nullptr);

}  // namespace chasym
