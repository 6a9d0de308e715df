#pragma once

// JSON run configurations. Every object is read strictly: unknown keys,
// missing required keys and wrong types are ValidationErrors.

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "chasym/nonlinear.hpp"
#include "chasym/scaledflow.hpp"
#include "chasym/simulator.hpp"

namespace chasym {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Tracks which keys of an object were consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where);

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key);
  template <class T>
  T get(const std::string& key);
  template <class T>
  T get(const std::string& key, T fallback) {
    return has(key) ? get<T>(key) : fallback;
  }
  std::string where(const std::string& key) const { return where_ + "." + key; }
  /// ValidationError naming any key that was never read.
  void finish() const;

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <>
double ObjectReader::get<double>(const std::string& key);
template <>
int ObjectReader::get<int>(const std::string& key);
template <>
std::uint64_t ObjectReader::get<std::uint64_t>(const std::string& key);
template <>
bool ObjectReader::get<bool>(const std::string& key);
template <>
std::string ObjectReader::get<std::string>(const std::string& key);
template <>
std::vector<double> ObjectReader::get<std::vector<double>>(const std::string& key);
template <>
std::vector<int> ObjectReader::get<std::vector<int>>(const std::string& key);

struct Header {
  int schema_version = kSchemaVersion;
  std::string output_dir;
  std::uint64_t seed = 0;
};

struct SpecConfig {
  int n = 2;
  int d = 1;
  NonlinearModel model;
  std::string label;  // "cahn_hilliard", "none" or "custom"

  PDESpec pde() const { return model.as_spec(n, d); }
  Equation equation() const { return {n, model}; }
};

struct ClassifyConfig {
  Header header;
  SpecConfig spec;
};

struct SpectrumConfig {
  Header header;
  ScalingFrame frame;
  int j_max = 6;                  // eig
  std::optional<Grid> grid;       // profile
  double tolerance = 1e-8;        // profile
  double tau = 1.0;               // kernel, decay-fit
  double z_min = 0.0;
  double z_max = 20.0;
  int points = 201;
};

struct SimulateConfig {
  Header header;
  SpecConfig spec;
  Grid grid;
  Perturbation initial;
  IntegratorConfig integrator;
};

struct ScaledRunConfig {
  Header header;
  SpecConfig spec;
  ScalingFrame frame;
  Grid grid;
  Perturbation initial;
  ScaledConfig integrator;
};

struct AnalyzeConfig {
  std::string norm = "sup";
  std::string reference = "auto";  // auto | profile | first_moment
  int axis = 0;
  std::optional<std::pair<double, double>> window;  // default: last decade
  std::optional<double> amplitude;                  // default: predicted from the initial data
  double fit_time = 1e3;
  std::optional<Grid> xi_grid;
  double noise_floor = 1e-11;
  double slope_tolerance = 0.1;  // relative, on the predicted decay exponent
};

Rational parse_rational(const json& j, const std::string& where);
Header parse_header(ObjectReader& r);
SpecConfig parse_spec(const json& j, const std::string& where = "spec");
ScalingFrame parse_frame(const json& j, int n, int d, const std::string& where = "frame");
Grid parse_grid(const json& j, int d, const std::string& where = "grid");
Perturbation parse_perturbation(const json& j, const std::string& where = "initial");
IntegratorConfig parse_integrator(const json& j, const std::string& where = "integrator");
ScaledConfig parse_scaled_integrator(const json& j, const std::string& where = "integrator");

ClassifyConfig parse_classify(const json& j);
/// `mode` is one of eig, profile, kernel, decay-fit.
SpectrumConfig parse_spectrum(const json& j, const std::string& mode);
SimulateConfig parse_simulate(const json& j);
ScaledRunConfig parse_scaled(const json& j);
AnalyzeConfig parse_analyze(const json& j);

json spec_json(const SpecConfig& s);
json frame_json(const ScalingFrame& f);

/// Reads and parses a JSON file; syntax errors become ValidationErrors.
json load_json(const std::string& path);

}  // namespace chasym
