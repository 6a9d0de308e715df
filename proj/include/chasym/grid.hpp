#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace chasym {

/// Uniform periodic grid on [-L/2, L/2)^d with N points per axis, row-major
/// (last axis fastest).
struct Grid {
  int dim = 1;
  int n = 64;
  double length = 64.0;

  double spacing() const { return length / n; }
  std::size_t size() const;
  /// Cell volume h^d, the trapezoid weight of every node.
  double cell_volume() const;
  double coordinate(int index) const { return -0.5 * length + index * spacing(); }
  /// Signed FFT-order wave index for storage position `index` in [0, n).
  int wave_index(int index) const { return index <= n / 2 - 1 ? index : index - n; }
  double wavenumber(int index) const;
  double max_wavenumber() const;

  /// Size of the r2c half spectrum: n^{d-1} * (n/2 + 1).
  std::size_t spectral_size() const;

  void validate() const;
  bool operator==(const Grid&) const = default;
};

/// Multi-index (i_0, ..., i_{d-1}) of a flat row-major offset.
std::array<int, 3> unflatten(const Grid& g, std::size_t offset);

struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  Field(const Grid& g, std::vector<double> v);

  std::span<double> data() { return values; }
  std::span<const double> data() const { return values; }
};

/// Coordinate of node `offset` along `axis`, tabulated once per grid.
std::vector<double> axis_coordinates(const Grid& g, int axis);

/// Max |v| over the nodes lying on the x_i = -L/2 faces.
double edge_max(const Field& f);

}  // namespace chasym
