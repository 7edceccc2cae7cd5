#include "sgnet/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgnet/errors.hpp"
#include "sgnet/kernels.hpp"

namespace sgnet::sim {

SpatialGrid::SpatialGrid(std::span<const double> xs, std::span<const double> ys, double half_extent)
    : half_extent_(half_extent) {
  if (xs.size() != ys.size()) throw DomainError("SpatialGrid: coordinate arrays differ in length");
  if (xs.empty()) throw DomainError("SpatialGrid: no sites");
  if (!(half_extent > 0.0)) throw DomainError("SpatialGrid: half_extent must be > 0");

  // About one site per cell for a uniform pattern.
  const double side = 2.0 * half_extent;
  cells_per_side_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(xs.size()))));
  cell_size_ = side / static_cast<double>(cells_per_side_);

  const std::size_t n_cells = cells_per_side_ * cells_per_side_;
  std::vector<std::size_t> cell(xs.size());
  cell_start_.assign(n_cells + 1, 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cell[i] = cell_of(ys[i]) * cells_per_side_ + cell_of(xs[i]);
    ++cell_start_[cell[i] + 1];
  }
  for (std::size_t c = 0; c < n_cells; ++c) cell_start_[c + 1] += cell_start_[c];

  std::vector<std::size_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
  xs_.resize(xs.size());
  ys_.resize(xs.size());
  index_.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t slot = cursor[cell[i]]++;
    xs_[slot] = xs[i];
    ys_[slot] = ys[i];
    index_[slot] = i;
  }
}

std::size_t SpatialGrid::cell_of(double v) const {
  const double f = std::floor((v + half_extent_) / cell_size_);
  if (f <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(f), cells_per_side_ - 1);
}

std::size_t SpatialGrid::nearest(double qx, double qy) const {
  if (!(std::abs(qx) <= half_extent_ && std::abs(qy) <= half_extent_)) {
    const auto hit = kernels::nearest_site(qx, qy, xs_, ys_);
    return index_[hit.index];
  }
  const auto cx = static_cast<std::ptrdiff_t>(cell_of(qx));
  const auto cy = static_cast<std::ptrdiff_t>(cell_of(qy));
  const auto side = static_cast<std::ptrdiff_t>(cells_per_side_);

  // Distance from the query to the nearest edge of its own cell.
  const double left = -half_extent_ + static_cast<double>(cx) * cell_size_;
  const double bottom = -half_extent_ + static_cast<double>(cy) * cell_size_;
  const double margin = std::max(0.0, std::min({qx - left, left + cell_size_ - qx, qy - bottom,
                                                bottom + cell_size_ - qy}));

  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best_slot = xs_.size();

  auto scan = [&](std::ptrdiff_t row, std::ptrdiff_t col_lo, std::ptrdiff_t col_hi) {
    if (row < 0 || row >= side) return;
    col_lo = std::max<std::ptrdiff_t>(col_lo, 0);
    col_hi = std::min<std::ptrdiff_t>(col_hi, side - 1);
    if (col_lo > col_hi) return;
    const std::size_t begin = cell_start_[static_cast<std::size_t>(row * side + col_lo)];
    const std::size_t end = cell_start_[static_cast<std::size_t>(row * side + col_hi + 1)];
    if (begin == end) return;
    const auto hit = kernels::nearest_site(qx, qy, std::span(xs_).subspan(begin, end - begin),
                                           std::span(ys_).subspan(begin, end - begin));
    const std::size_t slot = begin + hit.index;
    if (hit.dist2 < best_d2 || (hit.dist2 == best_d2 && best_slot < xs_.size() && index_[slot] < index_[best_slot])) {
      best_d2 = hit.dist2;
      best_slot = slot;
    }
  };

  // Rings 0 and 1 together are three contiguous row spans.
  for (std::ptrdiff_t k = 1; k <= side; ++k) {
    if (k == 1) {
      for (std::ptrdiff_t row = cy - 1; row <= cy + 1; ++row) scan(row, cx - 1, cx + 1);
    } else {
      scan(cy - k, cx - k, cx + k);
      scan(cy + k, cx - k, cx + k);
      for (std::ptrdiff_t row = cy - k + 1; row <= cy + k - 1; ++row) {
        scan(row, cx - k, cx - k);
        scan(row, cx + k, cx + k);
      }
    }
    // Every site outside rings 0..k is at least this far away.
    const double reach = static_cast<double>(k) * cell_size_ + margin;
    if (best_slot < xs_.size() && best_d2 <= reach * reach) break;
  }
  return index_[best_slot];
}

}  // namespace sgnet::sim
