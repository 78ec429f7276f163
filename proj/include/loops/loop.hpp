#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "loops/error.hpp"

namespace loops {

using Point = Eigen::Vector2d;
using Points = Eigen::Matrix2Xd;

/// Closed polygonal curve; vertex i connects to vertex (i+1) mod n.
template <typename Scalar>
class PolyLoop {
 public:
  using Vertices = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, 2, 1>;

  PolyLoop() = default;

  explicit PolyLoop(Vertices v) : v_(std::move(v)) {
    const Eigen::Index n = v_.cols();
    require(n >= 3, ErrorCode::InvalidParameter, "loop needs at least 3 vertices");
    require(v_.allFinite(), ErrorCode::InvalidParameter, "non-finite vertex");
    for (Eigen::Index i = 0; i < n; ++i) {
      require(v_.col(i) != v_.col((i + 1) % n), ErrorCode::InvalidParameter,
              "consecutive vertices coincide at index " + std::to_string(i));
    }
  }

  Eigen::Index size() const noexcept { return v_.cols(); }
  const Vertices& vertices() const noexcept { return v_; }
  Vec vertex(Eigen::Index i) const { return v_.col(i); }

 private:
  Vertices v_;
};

using Loop = PolyLoop<double>;

/// A loop together with the provenance of its simplicity guarantee.
class SimpleLoop : public Loop {
 public:
  enum class Check { Exhaustive, ByConstruction };

  SimpleLoop() = default;

  /// Verifies simplicity; throws NotSimple otherwise.
  static SimpleLoop checked(Loop loop);
  /// Trusts the caller (traced grid and lattice boundaries).
  static SimpleLoop by_construction(Loop loop) { return SimpleLoop(std::move(loop), Check::ByConstruction); }

  Check check() const noexcept { return check_; }

 private:
  SimpleLoop(Loop loop, Check c) : Loop(std::move(loop)), check_(c) {}
  Check check_ = Check::ByConstruction;
};

struct AnnulusSpec {
  Point center = Point::Zero();
  double r_inner = 1.0;
  double r_outer = 2.0;

  AnnulusSpec() = default;
  AnnulusSpec(Point c, double ri, double ro) : center(std::move(c)), r_inner(ri), r_outer(ro) {
    require(ri > 0 && ro > ri && std::isfinite(ro), ErrorCode::InvalidParameter, "annulus needs 0 < r_inner < r_outer");
  }
  double modulus() const { return std::log(r_outer / r_inner); }
};

enum class Provenance { BrownianHull, PercolationPerimeter, Synthetic };
std::string_view to_string(Provenance p) noexcept;

enum class NormalizeMode { RootScaling, TranslateAndScale };

struct Shape {
  SimpleLoop loop;
  Provenance provenance = Provenance::Synthetic;
};

struct ShapeFunctionals {
  double area_over_diam2 = 0;
  double anisotropy = 1;
};

// ---- free functions on vertex matrices -------------------------------------

/// Shoelace area; winding-weighted for non-simple loops.
template <typename Derived>
typename Derived::Scalar signed_area(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  const Eigen::Index n = v.cols();
  S acc(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1 == n) ? 0 : i + 1;
    acc += v(0, i) * v(1, j) - v(0, j) * v(1, i);
  }
  return acc / S(2);
}

template <typename Derived>
typename Derived::Scalar perimeter_length(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  const Eigen::Index n = v.cols();
  S acc(0);
  for (Eigen::Index i = 0; i < n; ++i) acc += (v.col((i + 1) % n) - v.col(i)).norm();
  return acc;
}

template <typename Derived>
typename Derived::Scalar max_radius(const Eigen::MatrixBase<Derived>& v) {
  return v.colwise().norm().maxCoeff();
}

/// Indices of the convex hull vertices, CCW, collinear points dropped.
template <typename Derived>
std::vector<Eigen::Index> convex_hull_indices(const Eigen::MatrixBase<Derived>& v) {
  const Eigen::Index n = v.cols();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return v(0, a) < v(0, b) || (v(0, a) == v(0, b) && v(1, a) < v(1, b));
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](Eigen::Index a, Eigen::Index b) { return v(0, a) == v(0, b) && v(1, a) == v(1, b); }),
            idx.end());
  if (idx.size() < 3) return idx;
  auto cross = [&](Eigen::Index o, Eigen::Index a, Eigen::Index b) {
    return (v(0, a) - v(0, o)) * (v(1, b) - v(1, o)) - (v(1, a) - v(1, o)) * (v(0, b) - v(0, o));
  };
  std::vector<Eigen::Index> h(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
    h[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
    h[k++] = idx[i];
  }
  h.resize(k - 1);
  return h;
}

/// Max pairwise vertex distance (brute force over hull vertices).
template <typename Derived>
typename Derived::Scalar diameter(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  const auto h = convex_hull_indices(v);
  S best(0);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j) best = std::max(best, (v.col(h[i]) - v.col(h[j])).squaredNorm());
  return std::sqrt(best);
}

/// Squared distance from p to segment [a, b].
template <typename S>
S segment_dist2(const Eigen::Matrix<S, 2, 1>& p, const Eigen::Matrix<S, 2, 1>& a, const Eigen::Matrix<S, 2, 1>& b) {
  const Eigen::Matrix<S, 2, 1> d = b - a;
  const S len2 = d.squaredNorm();
  S t = len2 > S(0) ? (p - a).dot(d) / len2 : S(0);
  t = std::clamp(t, S(0), S(1));
  return (a + t * d - p).squaredNorm();
}

/// Crossing-number winding count (Sunday). Throws PointOnCurve when z is
/// within tol of the trace.
template <typename Derived>
int winding_number_tol(const Eigen::MatrixBase<Derived>& v, const Eigen::Matrix<typename Derived::Scalar, 2, 1>& z,
                       typename Derived::Scalar tol) {
  using S = typename Derived::Scalar;
  using Vec = Eigen::Matrix<S, 2, 1>;
  const Eigen::Index n = v.cols();
  const S tol2 = tol * tol;
  int wn = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec a = v.col(i);
    const Vec b = v.col((i + 1) % n);
    // cheap bbox reject before the exact distance test
    if (!(std::min(a.x(), b.x()) - tol > z.x() || std::max(a.x(), b.x()) + tol < z.x() ||
          std::min(a.y(), b.y()) - tol > z.y() || std::max(a.y(), b.y()) + tol < z.y())) {
      if (segment_dist2<S>(z, a, b) <= tol2) fail(ErrorCode::PointOnCurve, "point lies on the loop");
    }
    const S cross = (b.x() - a.x()) * (z.y() - a.y()) - (z.x() - a.x()) * (b.y() - a.y());
    if (a.y() <= z.y()) {
      if (b.y() > z.y() && cross > S(0)) ++wn;
    } else {
      if (b.y() <= z.y() && cross < S(0)) --wn;
    }
  }
  return wn;
}

template <typename Derived>
int winding_number(const Eigen::MatrixBase<Derived>& v, const Eigen::Matrix<typename Derived::Scalar, 2, 1>& z) {
  using S = typename Derived::Scalar;
  return winding_number_tol(v, z, S(1e-12) * diameter(v));
}

/// Centroid of the (winding-weighted) enclosed region.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 2, 1> area_centroid(const Eigen::MatrixBase<Derived>& v) {
  using S = typename Derived::Scalar;
  const Eigen::Index n = v.cols();
  S a2(0), cx(0), cy(0);
  // shift to the first vertex to limit cancellation
  const Eigen::Matrix<S, 2, 1> o = v.col(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Matrix<S, 2, 1> p = v.col(i) - o;
    const Eigen::Matrix<S, 2, 1> q = v.col((i + 1) % n) - o;
    const S c = p.x() * q.y() - q.x() * p.y();
    a2 += c;
    cx += (p.x() + q.x()) * c;
    cy += (p.y() + q.y()) * c;
  }
  require(a2 != S(0), ErrorCode::DegenerateLoop, "zero enclosed area");
  return o + Eigen::Matrix<S, 2, 1>(cx / (S(3) * a2), cy / (S(3) * a2));
}

// ---- loop overloads ---------------------------------------------------------

template <typename S>
S signed_area(const PolyLoop<S>& l) { return signed_area(l.vertices()); }
template <typename S>
S perimeter_length(const PolyLoop<S>& l) { return perimeter_length(l.vertices()); }
template <typename S>
S max_radius(const PolyLoop<S>& l) { return max_radius(l.vertices()); }
template <typename S>
S diameter(const PolyLoop<S>& l) { return diameter(l.vertices()); }
template <typename S>
int winding_number(const PolyLoop<S>& l, const Eigen::Matrix<S, 2, 1>& z) { return winding_number(l.vertices(), z); }
template <typename S>
Eigen::Matrix<S, 2, 1> area_centroid(const PolyLoop<S>& l) { return area_centroid(l.vertices()); }

/// True iff no two non-adjacent segments meet and adjacent ones share only
/// their common vertex. Uses a uniform grid hash, near-linear for
/// well-spread loops.
bool is_simple(const Points& v);
inline bool is_simple(const Loop& l) { return is_simple(l.vertices()); }

/// Closed-segment intersection test (touching counts).
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);

Loop scaled(const Loop& l, double s);
Loop translated(const Loop& l, const Point& t);
Loop reversed(const Loop& l);

Shape normalize_shape(const SimpleLoop& loop, NormalizeMode mode, Provenance prov = Provenance::Synthetic);
Shape normalize_shape(const Shape& s, NormalizeMode mode);
ShapeFunctionals shape_functionals(const Shape& s);
ShapeFunctionals shape_functionals(const Points& v);

/// Regular polygon helpers used by tests and experiments.
Loop circle_loop(const Point& center, double radius, int n);
Loop rectangle_loop(double x0, double y0, double x1, double y1);

}  // namespace loops
