#include "chasym/grid.hpp"

#include <cmath>
#include <numbers>

#include "chasym/relevance.hpp"

namespace chasym {

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

double Grid::cell_volume() const { return std::pow(spacing(), dim); }

double Grid::wavenumber(int index) const {
  return 2.0 * std::numbers::pi / length * wave_index(index);
}

double Grid::max_wavenumber() const { return std::numbers::pi / spacing(); }

std::size_t Grid::spectral_size() const {
  std::size_t s = static_cast<std::size_t>(n / 2 + 1);
  for (int i = 0; i + 1 < dim; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

void Grid::validate() const {
  if (dim < 1 || dim > 3) throw ValidationError("grid dimension must be 1, 2 or 3");
  if (n < 8 || (n & (n - 1)) != 0) throw ValidationError("points per axis must be a power of two >= 8");
  if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("box length must be positive");
}

std::array<int, 3> unflatten(const Grid& g, std::size_t offset) {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = g.dim - 1; a >= 0; --a) {
    idx[static_cast<size_t>(a)] = static_cast<int>(offset % static_cast<std::size_t>(g.n));
    offset /= static_cast<std::size_t>(g.n);
  }
  return idx;
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw ValidationError("field size does not match grid");
}

std::vector<double> axis_coordinates(const Grid& g, int axis) {
  std::vector<double> c(g.size());
  std::size_t stride = 1;
  for (int a = g.dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(g.n);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = g.coordinate(static_cast<int>((i / stride) % static_cast<std::size_t>(g.n)));
  }
  return c;
}

double edge_max(const Field& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    auto idx = unflatten(f.grid, i);
    bool on_face = false;
    for (int a = 0; a < f.grid.dim; ++a) on_face |= idx[static_cast<size_t>(a)] == 0;
    if (on_face) m = std::max(m, std::abs(f.values[i]));
  }
  return m;
}

}  // namespace chasym
