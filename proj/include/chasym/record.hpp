#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chasym/grid.hpp"

namespace chasym {

struct Snapshot {
  double time = 0.0;  // t in the physical frame, tau in a scaled frame
  Field field;
  std::string checksum;  // FNV-1a 64 of the little-endian payload, hex
};

/// Diagnostics time series of one run plus its snapshots. Column 0 is the time
/// coordinate ("t" or "tau").
struct RunRecord {
  nlohmann::json metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Snapshot> snapshots;

  /// Index of a named column; ValidationError if absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> series(const std::string& name) const;
  /// ValidationError unless times increase strictly.
  void validate() const;
};

}  // namespace chasym
