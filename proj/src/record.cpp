#include "chasym/record.hpp"

#include "chasym/errors.hpp"

namespace chasym {

std::size_t RunRecord::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ValidationError("record has no column '" + name + "'");
}

std::vector<double> RunRecord::series(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> s;
  s.reserve(rows.size());
  for (const auto& r : rows) s.push_back(r.at(c));
  return s;
}

void RunRecord::validate() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i][0] > rows[i - 1][0])) throw ValidationError("record times must increase strictly");
  }
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (!(snapshots[i].time > snapshots[i - 1].time)) throw ValidationError("snapshot times must increase strictly");
  }
}

}  // namespace chasym
