#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace physarum::hex {

struct AxialCoord {
  int q = 0;
  int r = 0;

  friend auto operator<=>(const AxialCoord&, const AxialCoord&) = default;
  AxialCoord operator+(const AxialCoord& o) const { return {q + o.q, r + o.r}; }
};

/// The six axial directions, in the fixed neighbor order.
inline constexpr std::array<AxialCoord, 6> kDirections{{
    {+1, 0}, {+1, -1}, {0, -1}, {-1, 0}, {-1, +1}, {0, +1},
}};

/// (|dq| + |dr| + |dq + dr|) / 2
int hex_distance(AxialCoord a, AxialCoord b);

/// 60 degree rotation about the origin; six applications are the identity.
AxialCoord rotate60(AxialCoord c);

/// Mirror across the q axis: (q, r) -> (q + r, -r).
AxialCoord reflect(AxialCoord c);

/// Hexagon-shaped domain of all cells within `radius` of the origin.
/// Cells are indexed row by row (r ascending, then q ascending).
class HexGrid {
 public:
  explicit HexGrid(int radius);

  int radius() const { return radius_; }
  std::size_t size() const { return cells_.size(); }
  bool contains(AxialCoord c) const;

  /// Throws OutOfGrid.
  std::size_t index(AxialCoord c) const;
  AxialCoord coord(std::size_t i) const { return cells_.at(i); }
  std::span<const AxialCoord> cells() const { return cells_; }

  /// In-grid neighbor indices in direction order.
  std::span<const std::size_t> neighbor_indices(std::size_t i) const;

 private:
  int radius_;
  std::vector<AxialCoord> cells_;
  std::vector<std::size_t> row_offset_;
  std::vector<std::size_t> neighbor_begin_;
  std::vector<std::size_t> neighbor_flat_;
};

/// In-grid neighbors of c in direction order. Throws OutOfGrid.
std::vector<AxialCoord> neighbors(AxialCoord c, const HexGrid& grid);

/// Non-negative concentration per cell, indexed like the grid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const HexGrid& grid, double fill = 0.0) : values_(grid.size(), fill) {}

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double total() const;

 private:
  std::vector<double> values_;
};

/// One explicit diffusion step with zero-flux walls:
///   c'(x) = c(x) + delta * sum_{y in N(x)} (c(y) - c(x)) / 6.
/// The divisor stays 6 at the boundary so the total is conserved.
ScalarField diffuse(const ScalarField& field, double delta, const HexGrid& grid);

/// Double-buffered form of diffuse(); `out` is resized as needed.
void diffuse_into(const ScalarField& field, double delta, const HexGrid& grid, ScalarField& out);

/// `q r value` per line, in grid order.
void write_snapshot(std::ostream& os, const ScalarField& field, const HexGrid& grid);

}  // namespace physarum::hex
