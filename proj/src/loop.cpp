#include "loops/loop.hpp"

#include <Eigen/Eigenvalues>
#include <cstdint>
#include <numbers>
#include <unordered_map>

namespace loops {

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::BrownianHull: return "brownian-hull";
    case Provenance::PercolationPerimeter: return "percolation-perimeter";
    case Provenance::Synthetic: return "synthetic";
  }
  return "synthetic";
}

SimpleLoop SimpleLoop::checked(Loop loop) {
  require(is_simple(loop), ErrorCode::NotSimple, "loop self-intersects");
  return SimpleLoop(std::move(loop), Check::Exhaustive);
}

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

int sgn(double x) { return (x > 0) - (x < 0); }

}  // namespace

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = sgn(orient(a, b, c)), o2 = sgn(orient(a, b, d));
  const int o3 = sgn(orient(c, d, a)), o4 = sgn(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple(const Points& v) {
  const Eigen::Index n = v.cols();
  if (n < 3) return false;
  // duplicate vertices are a self-touch
  {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      return v(0, a) < v(0, b) || (v(0, a) == v(0, b) && v(1, a) < v(1, b));
    });
    for (std::size_t i = 1; i < idx.size(); ++i)
      if (v.col(idx[i]) == v.col(idx[i - 1])) return false;
  }
  const Point lo = v.rowwise().minCoeff();
  const Point hi = v.rowwise().maxCoeff();
  const double span = std::max((hi - lo).maxCoeff(), 1e-300);
  const double cells = std::max(1.0, std::floor(std::sqrt(static_cast<double>(n))));
  const double cs = span / cells * (1 + 1e-9);
  auto key = [](std::int64_t i, std::int64_t j) { return (static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint64_t>(j); };
  std::unordered_map<std::uint64_t, std::vector<Eigen::Index>> grid;
  grid.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index s = 0; s < n; ++s) {
    const Point a = v.col(s), b = v.col((s + 1) % n);
    const auto i0 = static_cast<std::int64_t>((std::min(a.x(), b.x()) - lo.x()) / cs);
    const auto i1 = static_cast<std::int64_t>((std::max(a.x(), b.x()) - lo.x()) / cs);
    const auto j0 = static_cast<std::int64_t>((std::min(a.y(), b.y()) - lo.y()) / cs);
    const auto j1 = static_cast<std::int64_t>((std::max(a.y(), b.y()) - lo.y()) / cs);
    for (auto i = i0; i <= i1; ++i)
      for (auto j = j0; j <= j1; ++j) grid[key(i, j)].push_back(s);
  }
  for (const auto& [k, segs] : grid) {
    for (std::size_t p = 0; p < segs.size(); ++p) {
      for (std::size_t q = p + 1; q < segs.size(); ++q) {
        Eigen::Index s = segs[p], t = segs[q];
        if (s > t) std::swap(s, t);
        const Point a = v.col(s), b = v.col((s + 1) % n);
        const Point c = v.col(t), d = v.col((t + 1) % n);
        const bool adjacent = (t == s + 1) || (s == 0 && t == n - 1);
        if (!adjacent) {
          if (segments_intersect(a, b, c, d)) return false;
          continue;
        }
        // adjacent: shared vertex is fine, collinear overlap is not
        const Point& shared = (t == s + 1) ? b : a;
        const Point& far1 = (t == s + 1) ? a : b;
        const Point& far2 = (t == s + 1) ? d : c;
        if (orient(far1, shared, far2) == 0 && (far1 - shared).dot(far2 - shared) > 0) return false;
      }
    }
  }
  return true;
}

Loop scaled(const Loop& l, double s) { return Loop(l.vertices() * s); }

Loop translated(const Loop& l, const Point& t) { return Loop(l.vertices().colwise() + t); }

Loop reversed(const Loop& l) { return Loop(l.vertices().rowwise().reverse()); }

Shape normalize_shape(const SimpleLoop& loop, NormalizeMode mode, Provenance prov) {
  const double d = diameter(loop);
  require(d >= 1e-12, ErrorCode::DegenerateLoop, "diameter below 1e-12");
  Points v = loop.vertices();
  if (mode == NormalizeMode::TranslateAndScale) v.colwise() -= area_centroid(v);
  const double r = max_radius(v);
  require(r > 0, ErrorCode::DegenerateLoop, "zero max radius");
  v /= r;
  return Shape{SimpleLoop::by_construction(Loop(std::move(v))), prov};
}

Shape normalize_shape(const Shape& s, NormalizeMode mode) { return normalize_shape(s.loop, mode, s.provenance); }

ShapeFunctionals shape_functionals(const Points& v) {
  const double d = diameter(v);
  require(d >= 1e-12, ErrorCode::DegenerateLoop, "diameter below 1e-12");
  ShapeFunctionals f;
  f.area_over_diam2 = std::abs(signed_area(v)) / (d * d);
  const Eigen::Vector2d mean = v.rowwise().mean();
  const Points c = v.colwise() - mean;
  const Eigen::Matrix2d m = c * c.transpose() / static_cast<double>(v.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
  require(lmin > 0, ErrorCode::DegenerateLoop, "collinear vertices");
  f.anisotropy = std::sqrt(lmax / lmin);
  return f;
}

ShapeFunctionals shape_functionals(const Shape& s) { return shape_functionals(s.loop.vertices()); }

Loop circle_loop(const Point& center, double radius, int n) {
  require(n >= 3 && radius > 0, ErrorCode::InvalidParameter, "circle needs n >= 3 and radius > 0");
  Points v(2, n);
  for (int i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * i / n;
    v.col(i) = center + radius * Point(std::cos(a), std::sin(a));
  }
  return Loop(std::move(v));
}

Loop rectangle_loop(double x0, double y0, double x1, double y1) {
  Points v(2, 4);
  v << x0, x1, x1, x0, y0, y0, y1, y1;
  return Loop(std::move(v));
}

}  // namespace loops
