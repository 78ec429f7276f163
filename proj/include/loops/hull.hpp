#pragma once

#include <cstdint>
#include <vector>

#include "loops/loop.hpp"

namespace loops {

/// Occupancy raster. Cell (i, j) is centered at ((i0 + i) h, (j0 + j) h)
/// and spans half a cell on each side, so every lattice point k·h is a
/// cell center. One unmarked ring surrounds the path's cells.
struct RasterGrid {
  double h = 1;
  std::int64_t i0 = 0, j0 = 0;
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> marked;  // row-major, index j * nx + i

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i); }
  std::size_t cells() const { return marked.size(); }
  Point center(int i, int j) const { return Point(static_cast<double>(i0 + i) * h, static_cast<double>(j0 + j) * h); }
  /// World position of grid corner (ci, cj); corner (i, j) is the lower-left corner of cell (i, j).
  Point corner(std::int64_t ci, std::int64_t cj) const {
    return Point((static_cast<double>(i0 + ci) - 0.5) * h, (static_cast<double>(j0 + cj) - 0.5) * h);
  }
  std::int64_t marked_count() const;
};

/// Supercover rasterization of a closed polygonal path (last vertex joins
/// the first). Corner ties mark both side cells so the marked set stays
/// 4-connected.
RasterGrid rasterize(const Points& path, double h);

/// Labels: -1 marked, 0 unbounded complement, 1..k bounded components.
struct ComponentDecomposition {
  RasterGrid grid;
  std::vector<std::int32_t> label;
  std::vector<std::int64_t> cell_count;   ///< per label, index 0 is the unbounded one
  std::vector<std::size_t> first_cell;    ///< lowest-then-leftmost cell of each label
  std::int64_t marked = 0;

  int bounded_count() const { return static_cast<int>(cell_count.size()) - 1; }
  double cell_area() const { return grid.h * grid.h; }
};

ComponentDecomposition decompose(RasterGrid grid);
/// Only separates the unbounded component: every enclosed unmarked cell
/// gets label 1. Enough for outer_boundary and filled_area.
ComponentDecomposition decompose_exterior(RasterGrid grid);

/// Number of cells not reachable from the frame; skips the labeling of
/// bounded components.
std::int64_t filled_cell_count(const RasterGrid& grid);

double filled_area(const ComponentDecomposition& d);
double marked_area(const ComponentDecomposition& d);
/// Areas of all bounded components, in label order.
std::vector<double> bounded_areas(const ComponentDecomposition& d);

/// Boundary of the union of marked and bounded cells, CCW, unit cell edges.
SimpleLoop outer_boundary(const ComponentDecomposition& d);
/// Boundary of one bounded component, CCW around it.
SimpleLoop component_boundary(const ComponentDecomposition& d, int label);
std::vector<SimpleLoop> inner_boundaries(const ComponentDecomposition& d);
/// Label of the cell containing p, or -2 outside the grid.
int label_at(const ComponentDecomposition& d, const Point& p);

/// N(u) = number of bounded components with area >= u, per threshold.
std::vector<std::int64_t> area_spectrum(const ComponentDecomposition& d, const std::vector<double>& thresholds);

/// Winding number of the closed path around every cell center.
std::vector<int> winding_field(const Points& path, const RasterGrid& grid);

struct BoxCount {
  double slope = 0;
  double r2 = 0;
  std::vector<double> eps;
  std::vector<double> counts;
};

/// Slope of log N(eps) against log(1/eps) over a geometric ladder.
BoxCount boxcount_dimension(const Points& pts, double eps_min, double eps_max, int n_scales);
/// Occupied box counts only.
std::vector<double> box_counts(const Points& pts, const std::vector<double>& eps);
/// Ladder of n_scales geometric scales starting at 4h and spanning at most
/// a factor 2^(n_scales-1), capped at diam/4. Empty if that range is void.
std::vector<double> default_box_ladder(double h, double diam, int n_scales = 8);

/// Exact squared Euclidean distance (in cell units) from every cell to the
/// nearest cell with feature[c] != 0.
std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature, int nx, int ny);
/// Exact chessboard (L-infinity) distance in cells to the nearest feature cell.
std::vector<int> chessboard_distance_transform(const std::vector<std::uint8_t>& feature, int nx, int ny);

}  // namespace loops
