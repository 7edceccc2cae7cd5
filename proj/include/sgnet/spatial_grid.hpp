#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sgnet::sim {

/// Uniform bucket grid over the square [-half_extent, half_extent]^2 for
/// exact nearest-site queries. Sites are stored sorted by cell (row major)
/// so each row of cells is one contiguous span for the SIMD kernel.
class SpatialGrid {
 public:
  SpatialGrid(std::span<const double> xs, std::span<const double> ys, double half_extent);

  /// Index (into the original site arrays) of the site nearest to (qx, qy).
  /// Queries outside the grid square fall back to a linear scan.
  std::size_t nearest(double qx, double qy) const;

  std::size_t size() const { return index_.size(); }

 private:
  std::size_t cell_of(double v) const;

  double half_extent_;
  double cell_size_;
  std::size_t cells_per_side_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<std::size_t> index_;
  std::vector<std::size_t> cell_start_;
};

}  // namespace sgnet::sim
