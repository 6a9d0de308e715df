#pragma once

// Run persistence. A run directory holds
//   run.json         metadata, column names, snapshot index
//   diagnostics.csv  the time series
//   snapshots/NNNN.bin + NNNN.json  little-endian float64 row-major field + header
// Every file is written to a temporary name and renamed into place.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "chasym/record.hpp"

namespace chasym {

namespace fs = std::filesystem;

/// FNV-1a 64 of the little-endian bytes of `values`, as 16 hex digits.
std::string checksum(std::span<const double> values);

void write_atomic(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

/// %.17g, so values round-trip and output is byte-stable.
std::string format_double(double v);
std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);
void read_csv(const std::string& text, std::vector<std::string>& columns, std::vector<std::vector<double>>& rows);

nlohmann::json grid_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);

/// Writes NNNN.bin / NNNN.json under `dir`; fills s.checksum. Returns the header path
/// relative to `dir`.
std::string write_snapshot(const fs::path& dir, int index, Snapshot& s);
/// Reads a snapshot header and its payload; NumericalFailure on checksum mismatch.
Snapshot read_snapshot(const fs::path& header);

void write_record(const fs::path& dir, RunRecord& record);
RunRecord read_record(const fs::path& dir);

}  // namespace chasym
