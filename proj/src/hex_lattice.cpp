#include "physarum/hex_lattice.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <ostream>
#include <string>

#include "physarum/error.hpp"

namespace physarum::hex {

int hex_distance(AxialCoord a, AxialCoord b) {
  const int dq = a.q - b.q;
  const int dr = a.r - b.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

AxialCoord rotate60(AxialCoord c) { return {-c.r, c.q + c.r}; }

AxialCoord reflect(AxialCoord c) { return {c.q + c.r, -c.r}; }

HexGrid::HexGrid(int radius) : radius_(radius) {
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "grid radius must be non-negative");
  for (int r = -radius; r <= radius; ++r) {
    row_offset_.push_back(cells_.size());
    const int q_lo = std::max(-radius, -r - radius);
    const int q_hi = std::min(radius, -r + radius);
    for (int q = q_lo; q <= q_hi; ++q) cells_.push_back({q, r});
  }
  neighbor_begin_.reserve(cells_.size() + 1);
  for (const AxialCoord& c : cells_) {
    neighbor_begin_.push_back(neighbor_flat_.size());
    for (const AxialCoord& d : kDirections) {
      const AxialCoord n = c + d;
      if (contains(n)) neighbor_flat_.push_back(index(n));
    }
  }
  neighbor_begin_.push_back(neighbor_flat_.size());
}

bool HexGrid::contains(AxialCoord c) const { return hex_distance(c, {0, 0}) <= radius_; }

std::size_t HexGrid::index(AxialCoord c) const {
  if (!contains(c)) {
    throw Error(ErrorKind::OutOfGrid, "cell (" + std::to_string(c.q) + ", " + std::to_string(c.r) +
                                          ") is outside radius " + std::to_string(radius_));
  }
  const int q_lo = std::max(-radius_, -c.r - radius_);
  return row_offset_[static_cast<std::size_t>(c.r + radius_)] + static_cast<std::size_t>(c.q - q_lo);
}

std::span<const std::size_t> HexGrid::neighbor_indices(std::size_t i) const {
  return std::span<const std::size_t>(neighbor_flat_).subspan(neighbor_begin_.at(i),
                                                               neighbor_begin_.at(i + 1) - neighbor_begin_[i]);
}

std::vector<AxialCoord> neighbors(AxialCoord c, const HexGrid& grid) {
  const std::size_t i = grid.index(c);
  std::vector<AxialCoord> out;
  for (std::size_t j : grid.neighbor_indices(i)) out.push_back(grid.coord(j));
  return out;
}

double ScalarField::total() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

void diffuse_into(const ScalarField& field, double delta, const HexGrid& grid, ScalarField& out) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "diffusion delta must lie in (0, 1]");
  }
  if (field.size() != grid.size()) throw Error(ErrorKind::InvalidArgument, "field does not match grid");
  if (out.size() != grid.size()) out = ScalarField(grid);
  const double w = delta / 6.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = field[i];
    double flow = 0.0;
    for (std::size_t j : grid.neighbor_indices(i)) flow += field[j] - c;
    out[i] = c + w * flow;
  }
}

ScalarField diffuse(const ScalarField& field, double delta, const HexGrid& grid) {
  ScalarField out(grid);
  diffuse_into(field, delta, grid, out);
  return out;
}

void write_snapshot(std::ostream& os, const ScalarField& field, const HexGrid& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const AxialCoord c = grid.coord(i);
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, field[i]);
    os << c.q << ' ' << c.r << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

}  // namespace physarum::hex
