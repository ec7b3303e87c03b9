#include "obsim/grid.hpp"

#include <cmath>

namespace obsim {

Zone Zone::rect(const GridSpec& grid, int x0, int y0, int x1, int y1) {
  grid.validate();
  if (x0 > x1 || y0 > y1) throw ConfigError("zone rectangle is inverted");
  if (x0 < 0 || y0 < 0 || x1 >= grid.width || y1 >= grid.height)
    throw ConfigError("zone rectangle outside the grid");
  Zone z(grid);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) z.add(x, y);
  return z;
}

Zone Zone::from_cells(const GridSpec& grid,
                      const std::vector<std::pair<int, int>>& cells) {
  grid.validate();
  Zone z(grid);
  for (auto [x, y] : cells) {
    if (x < 0 || y < 0 || x >= grid.width || y >= grid.height)
      throw ConfigError("zone cell outside the grid");
    z.add(x, y);
  }
  return z;
}

Zone Zone::with_coverage(const GridSpec& grid, double coverage) {
  grid.validate();
  if (coverage < 0.0 || coverage > 1.0)
    throw ConfigError("zone coverage must be in [0, 1]");
  Zone z(grid);
  const long target = std::lround(coverage * grid.cell_count());
  long placed = 0;
  for (int y = 0; y < grid.height && placed < target; ++y)
    for (int x = 0; x < grid.width && placed < target; ++x, ++placed) z.add(x, y);
  return z;
}

Zone Zone::full(const GridSpec& grid) {
  return rect(grid, 0, 0, grid.width - 1, grid.height - 1);
}

Zone Zone::none(const GridSpec& grid) {
  grid.validate();
  return Zone(grid);
}

}  // namespace obsim
