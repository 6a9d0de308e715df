#include "chasym/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "chasym/errors.hpp"

namespace chasym {

namespace {

std::vector<unsigned char> le_bytes(std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * sizeof(double));
  std::memcpy(bytes.data(), values.data(), bytes.size());
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < bytes.size(); i += 8) std::reverse(bytes.begin() + static_cast<long>(i), bytes.begin() + static_cast<long>(i) + 8);
  }
  return bytes;
}

}  // namespace

std::string checksum(std::span<const double> values) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : le_bytes(values)) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_double(row[i]);
    }
    s += '\n';
  }
  return s;
}

void read_csv(const std::string& text, std::vector<std::string>& columns, std::vector<std::vector<double>>& rows) {
  std::istringstream in(text);
  std::string line;
  columns.clear();
  rows.clear();
  if (!std::getline(in, line)) throw ValidationError("empty CSV");
  std::istringstream head(line);
  for (std::string c; std::getline(head, c, ',');) columns.push_back(c);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) row.push_back(std::stod(c));
    if (row.size() != columns.size()) throw ValidationError("CSV row width does not match header");
    rows.push_back(std::move(row));
  }
}

nlohmann::json grid_json(const Grid& g) { return {{"d", g.dim}, {"N", g.n}, {"L", g.length}}; }

Grid grid_from_json(const nlohmann::json& j) {
  Grid g{j.at("d").get<int>(), j.at("N").get<int>(), j.at("L").get<double>()};
  g.validate();
  return g;
}

std::string write_snapshot(const fs::path& dir, int index, Snapshot& s) {
  char name[16];
  std::snprintf(name, sizeof name, "%04d", index);
  const auto bytes = le_bytes(s.field.values);
  s.checksum = checksum(s.field.values);
  write_atomic(dir / (std::string(name) + ".bin"), std::string(bytes.begin(), bytes.end()));
  nlohmann::json h = {{"grid", grid_json(s.field.grid)},
                      {"time", s.time},
                      {"checksum", s.checksum},
                      {"format", "float64-le row-major"},
                      {"bytes", bytes.size()},
                      {"payload", std::string(name) + ".bin"}};
  write_atomic(dir / (std::string(name) + ".json"), h.dump(2) + "\n");
  return std::string(name) + ".json";
}

Snapshot read_snapshot(const fs::path& header) {
  auto h = nlohmann::json::parse(read_file(header));
  Snapshot s;
  s.time = h.at("time").get<double>();
  const Grid g = grid_from_json(h.at("grid"));
  const std::string raw = read_file(header.parent_path() / h.at("payload").get<std::string>());
  if (raw.size() != g.size() * sizeof(double)) throw ValidationError("snapshot payload has the wrong size");
  std::vector<double> v(g.size());
  std::memcpy(v.data(), raw.data(), raw.size());
  if constexpr (std::endian::native == std::endian::big) {
    auto* p = reinterpret_cast<unsigned char*>(v.data());
    for (std::size_t i = 0; i < raw.size(); i += 8) std::reverse(p + i, p + i + 8);
  }
  s.field = Field(g, std::move(v));
  s.checksum = h.at("checksum").get<std::string>();
  if (checksum(s.field.values) != s.checksum) {
    throw NumericalFailure("snapshot checksum mismatch in " + header.string());
  }
  return s;
}

void write_record(const fs::path& dir, RunRecord& record) {
  record.validate();
  nlohmann::json index = nlohmann::json::array();
  for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
    auto rel = write_snapshot(dir / "snapshots", static_cast<int>(i), record.snapshots[i]);
    index.push_back({{"time", record.snapshots[i].time},
                     {"header", "snapshots/" + rel},
                     {"checksum", record.snapshots[i].checksum}});
  }
  write_atomic(dir / "diagnostics.csv", to_csv(record.columns, record.rows));
  nlohmann::json run = record.metadata;
  run["columns"] = record.columns;
  run["snapshots"] = index;
  write_atomic(dir / "run.json", run.dump(2) + "\n");
}

RunRecord read_record(const fs::path& dir) {
  RunRecord r;
  auto run = nlohmann::json::parse(read_file(dir / "run.json"));
  read_csv(read_file(dir / "diagnostics.csv"), r.columns, r.rows);
  for (const auto& entry : run.at("snapshots")) {
    auto s = read_snapshot(dir / entry.at("header").get<std::string>());
    if (s.checksum != entry.at("checksum").get<std::string>()) {
      throw NumericalFailure("snapshot index checksum disagrees with header");
    }
    r.snapshots.push_back(std::move(s));
  }
  run.erase("snapshots");
  run.erase("columns");
  r.metadata = run;
  r.validate();
  return r;
}

}  // namespace chasym
