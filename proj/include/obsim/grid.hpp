#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "obsim/errors.hpp"

namespace obsim {

// Discrete toroidal grid. The case-study default is 100x100.
struct GridSpec {
  int width = 100;
  int height = 100;

  int cell_count() const { return width * height; }
  int cell_index(int x, int y) const { return y * width + x; }

  // Toroidal wrap of a (possibly out-of-range by one step) coordinate pair.
  std::pair<int, int> wrap(int x, int y) const {
    if (x < 0) x += width;
    else if (x >= width) x -= width;
    if (y < 0) y += height;
    else if (y >= height) y -= height;
    return {x, y};
  }

  void validate() const {
    if (width < 1 || height < 1) throw ConfigError("grid dimensions must be >= 1");
  }

  bool operator==(const GridSpec&) const = default;
};

// The observed area: a set of cells with O(1) membership test.
class Zone {
 public:
  Zone() = default;

  // Inclusive rectangle [x0,x1] x [y0,y1].
  static Zone rect(const GridSpec& grid, int x0, int y0, int x1, int y1);

  static Zone from_cells(const GridSpec& grid,
                         const std::vector<std::pair<int, int>>& cells);

  // Row-major block of round(coverage * cell_count) cells. Used by the bench
  // harness to realize a requested rate p exactly (up to rounding to a cell).
  static Zone with_coverage(const GridSpec& grid, double coverage);

  static Zone full(const GridSpec& grid);
  static Zone none(const GridSpec& grid);

  bool contains(int x, int y) const { return mask_[y * width_ + x] != 0; }
  bool contains_index(int cell) const { return mask_[cell] != 0; }

  int cell_count() const { return cells_; }
  int grid_width() const { return width_; }
  int grid_height() const { return height_; }
  double coverage() const {
    return mask_.empty() ? 0.0 : static_cast<double>(cells_) / mask_.size();
  }
  bool bound() const { return !mask_.empty(); }

  bool operator==(const Zone&) const = default;

 private:
  Zone(const GridSpec& grid)
      : width_(grid.width), height_(grid.height),
        mask_(static_cast<size_t>(grid.cell_count()), 0) {}

  void add(int x, int y) {
    auto& m = mask_[y * width_ + x];
    if (!m) { m = 1; ++cells_; }
  }

  int width_ = 0;
  int height_ = 0;
  int cells_ = 0;
  std::vector<std::uint8_t> mask_;
};

}  // namespace obsim
