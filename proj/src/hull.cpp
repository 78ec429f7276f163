#include "loops/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loops/stats.hpp"

namespace loops {

std::int64_t RasterGrid::marked_count() const {
  return std::count(marked.begin(), marked.end(), std::uint8_t{1});
}

RasterGrid rasterize(const Points& path, double h) {
  require(h > 0 && std::isfinite(h), ErrorCode::InvalidParameter, "resolution must be positive");
  require(path.cols() >= 1 && path.allFinite(), ErrorCode::InvalidParameter, "empty or non-finite path");
  const double inv = 1.0 / h;
  const Eigen::Array2Xd s = path.array() * inv + 0.5;  // continuous coordinates, cell k spans [k, k+1)
  const auto kmin = s.rowwise().minCoeff().floor().eval();
  const auto kmax = s.rowwise().maxCoeff().floor().eval();
  RasterGrid g;
  g.h = h;
  g.i0 = static_cast<std::int64_t>(kmin(0)) - 1;
  g.j0 = static_cast<std::int64_t>(kmin(1)) - 1;
  const double w = kmax(0) - kmin(0) + 3, hgt = kmax(1) - kmin(1) + 3;
  require(w * hgt < 2.0e9, ErrorCode::BudgetExceeded, "raster too large");
  g.nx = static_cast<int>(w);
  g.ny = static_cast<int>(hgt);
  g.marked.assign(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny), 0);
  const double ox = static_cast<double>(g.i0), oy = static_cast<double>(g.j0);

  auto mark = [&](std::int64_t x, std::int64_t y) {
    g.marked[g.index(static_cast<int>(x), static_cast<int>(y))] = 1;
  };
  const Eigen::Index n = path.cols();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ax = s(0, k) - ox, ay = s(1, k) - oy;
    const Eigen::Index k2 = (k + 1 == n) ? 0 : k + 1;
    const double bx = s(0, k2) - ox, by = s(1, k2) - oy;
    auto x = static_cast<std::int64_t>(std::floor(ax)), y = static_cast<std::int64_t>(std::floor(ay));
    const auto xe = static_cast<std::int64_t>(std::floor(bx)), ye = static_cast<std::int64_t>(std::floor(by));
    mark(x, y);
    const double dx = bx - ax, dy = by - ay;
    const int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double tdx = dx != 0 ? std::abs(1.0 / dx) : inf;
    const double tdy = dy != 0 ? std::abs(1.0 / dy) : inf;
    double tx = dx > 0 ? (static_cast<double>(x) + 1 - ax) / dx : dx < 0 ? (ax - static_cast<double>(x)) / -dx : inf;
    double ty = dy > 0 ? (static_cast<double>(y) + 1 - ay) / dy : dy < 0 ? (ay - static_cast<double>(y)) / -dy : inf;
    std::int64_t steps = std::abs(xe - x) + std::abs(ye - y);
    while (steps-- > 0) {
      bool step_x;
      if (x == xe) step_x = false;
      else if (y == ye) step_x = true;
      else step_x = tx <= ty;
      if (step_x && tx == ty && y != ye) mark(x, y + sy);  // through a corner
      if (step_x) {
        x += sx;
        tx += tdx;
      } else {
        y += sy;
        ty += tdy;
      }
      mark(x, y);
    }
  }
  return g;
}

namespace {

// 4-connected flood over unmarked, unlabeled cells; returns the cell count.
std::int64_t flood(const RasterGrid& g, std::vector<std::int32_t>& label, std::size_t seed, std::int32_t id,
                   std::vector<std::size_t>& stack) {
  const std::size_t nx = static_cast<std::size_t>(g.nx);
  const std::size_t total = g.cells();
  std::int64_t count = 0;
  stack.clear();
  stack.push_back(seed);
  label[seed] = id;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    ++count;
    const std::size_t x = c % nx;
    auto visit = [&](std::size_t nb) {
      if (label[nb] == std::numeric_limits<std::int32_t>::min()) {
        label[nb] = id;
        stack.push_back(nb);
      }
    };
    if (x > 0) visit(c - 1);
    if (x + 1 < nx) visit(c + 1);
    if (c >= nx) visit(c - nx);
    if (c + nx < total) visit(c + nx);
  }
  return count;
}

constexpr std::int32_t kUnset = std::numeric_limits<std::int32_t>::min();

}  // namespace

ComponentDecomposition decompose(RasterGrid grid) {
  ComponentDecomposition d;
  const std::size_t total = grid.cells();
  d.label.assign(total, kUnset);
  for (std::size_t c = 0; c < total; ++c)
    if (grid.marked[c]) {
      d.label[c] = -1;
      ++d.marked;
    }
  std::vector<std::size_t> stack;
  // cell 0 lies on the frame ring, never marked
  d.cell_count.push_back(flood(grid, d.label, 0, 0, stack));
  d.first_cell.push_back(0);
  for (std::size_t c = 0; c < total; ++c) {
    if (d.label[c] != kUnset) continue;
    const auto id = static_cast<std::int32_t>(d.cell_count.size());
    d.first_cell.push_back(c);
    d.cell_count.push_back(flood(grid, d.label, c, id, stack));
  }
  d.grid = std::move(grid);
  return d;
}

ComponentDecomposition decompose_exterior(RasterGrid grid) {
  ComponentDecomposition d;
  const std::size_t total = grid.cells();
  d.label.assign(total, kUnset);
  for (std::size_t c = 0; c < total; ++c)
    if (grid.marked[c]) {
      d.label[c] = -1;
      ++d.marked;
    }
  std::vector<std::size_t> stack;
  d.cell_count.push_back(flood(grid, d.label, 0, 0, stack));
  d.first_cell.push_back(0);
  std::int64_t enclosed = 0;
  for (std::size_t c = 0; c < total; ++c) {
    if (d.label[c] != kUnset) continue;
    if (enclosed == 0) d.first_cell.push_back(c);
    d.label[c] = 1;
    ++enclosed;
  }
  if (enclosed > 0) d.cell_count.push_back(enclosed);
  d.grid = std::move(grid);
  return d;
}

std::int64_t filled_cell_count(const RasterGrid& grid) {
  std::vector<std::int32_t> label(grid.cells(), kUnset);
  for (std::size_t c = 0; c < grid.cells(); ++c)
    if (grid.marked[c]) label[c] = -1;
  std::vector<std::size_t> stack;
  const std::int64_t exterior = flood(grid, label, 0, 0, stack);
  return static_cast<std::int64_t>(grid.cells()) - exterior;
}

double filled_area(const ComponentDecomposition& d) {
  std::int64_t cells = d.marked;
  for (std::size_t k = 1; k < d.cell_count.size(); ++k) cells += d.cell_count[k];
  return static_cast<double>(cells) * d.cell_area();
}

double marked_area(const ComponentDecomposition& d) { return static_cast<double>(d.marked) * d.cell_area(); }

std::vector<double> bounded_areas(const ComponentDecomposition& d) {
  std::vector<double> out;
  out.reserve(d.cell_count.size());
  for (std::size_t k = 1; k < d.cell_count.size(); ++k) out.push_back(static_cast<double>(d.cell_count[k]) * d.cell_area());
  return out;
}

namespace {

template <typename InRegion>
SimpleLoop trace(const RasterGrid& g, std::size_t start_cell, InRegion in) {
  const std::int64_t nx = g.nx, ny = g.ny;
  auto inside = [&](std::int64_t i, std::int64_t j) {
    return i >= 0 && j >= 0 && i < nx && j < ny && in(static_cast<std::size_t>(j * nx + i));
  };
  const std::int64_t si = static_cast<std::int64_t>(start_cell) % nx;
  const std::int64_t sj = static_cast<std::int64_t>(start_cell) / nx;
  std::vector<std::int64_t> cs;
  std::int64_t px = si, py = sj, dx = 1, dy = 0;
  do {
    cs.push_back(px);
    cs.push_back(py);
    const std::int64_t qx = px + dx, qy = py + dy;
    const std::int64_t nlx = -dy, nly = dx;
    // cells ahead-left and ahead-right of corner q; components of d±n are ±1
    const std::int64_t alx = qx + (dx + nlx - 1) / 2, aly = qy + (dy + nly - 1) / 2;
    const std::int64_t arx = qx + (dx - nlx - 1) / 2, ary = qy + (dy - nly - 1) / 2;
    if (!inside(alx, aly)) {
      dx = nlx;
      dy = nly;
    } else if (inside(arx, ary)) {
      dx = -nlx;
      dy = -nly;
    }
    px = qx;
    py = qy;
  } while (!(px == si && py == sj && dx == 1 && dy == 0));
  Points v(2, static_cast<Eigen::Index>(cs.size() / 2));
  for (std::size_t k = 0; k < cs.size() / 2; ++k) v.col(static_cast<Eigen::Index>(k)) = g.corner(cs[2 * k], cs[2 * k + 1]);
  return SimpleLoop::by_construction(Loop(std::move(v)));
}

}  // namespace

SimpleLoop outer_boundary(const ComponentDecomposition& d) {
  require(d.marked > 0, ErrorCode::EmptyGrid, "no marked cells");
  std::size_t start = 0;
  while (d.label[start] == 0) ++start;
  return trace(d.grid, start, [&](std::size_t c) { return d.label[c] != 0; });
}

SimpleLoop component_boundary(const ComponentDecomposition& d, int label) {
  require(label >= 1 && label <= d.bounded_count(), ErrorCode::InvalidParameter, "not a bounded component");
  return trace(d.grid, d.first_cell[static_cast<std::size_t>(label)], [&](std::size_t c) { return d.label[c] == label; });
}

std::vector<SimpleLoop> inner_boundaries(const ComponentDecomposition& d) {
  std::vector<SimpleLoop> out;
  out.reserve(static_cast<std::size_t>(d.bounded_count()));
  for (int k = 1; k <= d.bounded_count(); ++k) out.push_back(component_boundary(d, k));
  return out;
}

int label_at(const ComponentDecomposition& d, const Point& p) {
  const auto& g = d.grid;
  const auto i = static_cast<std::int64_t>(std::floor(p.x() / g.h + 0.5)) - g.i0;
  const auto j = static_cast<std::int64_t>(std::floor(p.y() / g.h + 0.5)) - g.j0;
  if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) return -2;
  return d.label[g.index(static_cast<int>(i), static_cast<int>(j))];
}

std::vector<std::int64_t> area_spectrum(const ComponentDecomposition& d, const std::vector<double>& thresholds) {
  std::vector<double> areas = bounded_areas(d);
  std::sort(areas.begin(), areas.end());
  std::vector<std::int64_t> out;
  out.reserve(thresholds.size());
  for (double u : thresholds) out.push_back(areas.end() - std::lower_bound(areas.begin(), areas.end(), u));
  return out;
}

std::vector<int> winding_field(const Points& path, const RasterGrid& g) {
  const std::size_t nx = static_cast<std::size_t>(g.nx);
  // diff has one extra column per row
  std::vector<int> diff((nx + 1) * static_cast<std::size_t>(g.ny), 0);
  const Eigen::Index n = path.cols();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point a = path.col(k), b = path.col((k + 1) % n);
    if (a.y() == b.y()) continue;
    const int sign = b.y() > a.y() ? 1 : -1;
    const Point& lo = sign > 0 ? a : b;
    const Point& hi = sign > 0 ? b : a;
    // rows whose center y satisfies lo.y <= y < hi.y
    const auto jfirst = static_cast<std::int64_t>(std::ceil(lo.y() / g.h)) - g.j0;
    const auto jlast = static_cast<std::int64_t>(std::ceil(hi.y() / g.h)) - 1 - g.j0;
    for (std::int64_t j = std::max<std::int64_t>(jfirst, 0); j <= std::min<std::int64_t>(jlast, g.ny - 1); ++j) {
      const double yc = static_cast<double>(g.j0 + j) * g.h;
      if (yc < lo.y() || yc >= hi.y()) continue;
      const double xc = lo.x() + (yc - lo.y()) * (hi.x() - lo.x()) / (hi.y() - lo.y());
      // centers strictly left of the crossing see it on their rightward ray
      auto first_not_left = static_cast<std::int64_t>(std::ceil(xc / g.h)) - g.i0;
      if (static_cast<double>(g.i0 + first_not_left) * g.h < xc) ++first_not_left;
      first_not_left = std::clamp<std::int64_t>(first_not_left, 0, g.nx);
      const std::size_t row = static_cast<std::size_t>(j) * (nx + 1);
      diff[row] += sign;
      diff[row + static_cast<std::size_t>(first_not_left)] -= sign;
    }
  }
  std::vector<int> w(g.cells());
  for (std::size_t j = 0; j < static_cast<std::size_t>(g.ny); ++j) {
    int acc = 0;
    for (std::size_t i = 0; i < nx; ++i) {
      acc += diff[j * (nx + 1) + i];
      w[j * nx + i] = acc;
    }
  }
  return w;
}

std::vector<double> box_counts(const Points& pts, const std::vector<double>& eps) {
  const Point lo = pts.rowwise().minCoeff();
  std::vector<double> out;
  std::vector<std::uint64_t> keys(static_cast<std::size_t>(pts.cols()));
  for (double e : eps) {
    require(e > 0, ErrorCode::InvalidParameter, "box size must be positive");
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
      const auto ix = static_cast<std::uint64_t>((pts(0, k) - lo.x()) / e);
      const auto iy = static_cast<std::uint64_t>((pts(1, k) - lo.y()) / e);
      keys[static_cast<std::size_t>(k)] = (ix << 32) | iy;
    }
    std::sort(keys.begin(), keys.end());
    out.push_back(static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin()));
  }
  return out;
}

std::vector<double> default_box_ladder(double h, double diam, int n_scales) {
  require(n_scales >= 2, ErrorCode::InvalidParameter, "need at least 2 scales");
  const double lo = 4 * h;
  const double hi = std::min(lo * std::ldexp(1.0, n_scales - 1), diam / 4);
  if (!(hi > lo)) return {};
  std::vector<double> out;
  for (int k = 0; k < n_scales; ++k) out.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n_scales - 1)));
  return out;
}

BoxCount boxcount_dimension(const Points& pts, double eps_min, double eps_max, int n_scales) {
  require(pts.cols() >= 1000, ErrorCode::InsufficientData, "box counting needs at least 1000 points");
  require(eps_min > 0 && eps_max > eps_min && n_scales >= 3, ErrorCode::InvalidParameter, "bad scale ladder");
  BoxCount r;
  for (int k = 0; k < n_scales; ++k) r.eps.push_back(eps_min * std::pow(eps_max / eps_min, static_cast<double>(k) / (n_scales - 1)));
  r.counts = box_counts(pts, r.eps);
  std::vector<double> x, y;
  for (std::size_t k = 0; k < r.eps.size(); ++k) {
    x.push_back(-std::log(r.eps[k]));
    y.push_back(std::log(r.counts[k]));
  }
  const auto f = linear_fit(x, y);
  r.slope = f.slope;
  r.r2 = f.r2;
  return r;
}

namespace {

// 1D squared distance transform of sampled function f (lower envelope of parabolas).
void dt1d(const double* f, double* out, int n, std::vector<int>& v, std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  v.resize(static_cast<std::size_t>(n));
  z.resize(static_cast<std::size_t>(n) + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    double s = -inf;
    while (k >= 0) {
      const int p = v[static_cast<std::size_t>(k)];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)]) --k;
      else break;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = k == 0 ? -inf : s;
    z[static_cast<std::size_t>(k) + 1] = inf;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) out[q] = inf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
    const int p = v[static_cast<std::size_t>(j)];
    out[q] = double(q - p) * (q - p) + f[p];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature, int nx, int ny) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t total = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  require(feature.size() == total, ErrorCode::InvalidParameter, "feature size mismatch");
  std::vector<double> g(total);
  for (std::size_t c = 0; c < total; ++c) g[c] = feature[c] ? 0.0 : inf;
  std::vector<int> v;
  std::vector<double> z, col(static_cast<std::size_t>(ny)), colout(static_cast<std::size_t>(ny));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) col[static_cast<std::size_t>(j)] = g[static_cast<std::size_t>(j) * nx + i];
    dt1d(col.data(), colout.data(), ny, v, z);
    for (int j = 0; j < ny; ++j) g[static_cast<std::size_t>(j) * nx + i] = colout[static_cast<std::size_t>(j)];
  }
  std::vector<double> row(static_cast<std::size_t>(nx));
  for (int j = 0; j < ny; ++j) {
    double* r = g.data() + static_cast<std::size_t>(j) * nx;
    dt1d(r, row.data(), nx, v, z);
    std::copy(row.begin(), row.end(), r);
  }
  return g;
}

std::vector<int> chessboard_distance_transform(const std::vector<std::uint8_t>& feature, int nx, int ny) {
  const std::size_t total = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  require(feature.size() == total, ErrorCode::InvalidParameter, "feature size mismatch");
  constexpr int big = std::numeric_limits<int>::max() / 2;
  std::vector<int> d(total);
  for (std::size_t c = 0; c < total; ++c) d[c] = feature[c] ? 0 : big;
  auto at = [&](int i, int j) -> int& { return d[static_cast<std::size_t>(j) * nx + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int& v = at(i, j);
      if (i > 0) v = std::min(v, at(i - 1, j) + 1);
      if (j > 0) {
        v = std::min(v, at(i, j - 1) + 1);
        if (i > 0) v = std::min(v, at(i - 1, j - 1) + 1);
        if (i + 1 < nx) v = std::min(v, at(i + 1, j - 1) + 1);
      }
    }
  for (int j = ny - 1; j >= 0; --j)
    for (int i = nx - 1; i >= 0; --i) {
      int& v = at(i, j);
      if (i + 1 < nx) v = std::min(v, at(i + 1, j) + 1);
      if (j + 1 < ny) {
        v = std::min(v, at(i, j + 1) + 1);
        if (i > 0) v = std::min(v, at(i - 1, j + 1) + 1);
        if (i + 1 < nx) v = std::min(v, at(i + 1, j + 1) + 1);
      }
    }
  return d;
}

}  // namespace loops
