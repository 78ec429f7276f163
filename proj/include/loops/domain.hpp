#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "loops/loop.hpp"

namespace loops {

struct Box {
  Point lo = Point::Constant(-std::numeric_limits<double>::infinity());
  Point hi = Point::Constant(std::numeric_limits<double>::infinity());

  bool empty() const { return !(lo.x() <= hi.x() && lo.y() <= hi.y()); }
  bool bounded() const { return lo.allFinite() && hi.allFinite(); }
  Box intersect(const Box& o) const { return Box{lo.cwiseMax(o.lo), hi.cwiseMin(o.hi)}; }
};

/// Open planar region: an outer boundary (whole plane, disc or polygon)
/// minus slit segments and closed holes. Boundary pieces are exact, so
/// distance() is the true distance to the boundary.
class PlanarDomain {
 public:
  enum class Outer { Plane, Disc, Polygon };

  static PlanarDomain whole_plane();
  static PlanarDomain disc(const Point& center, double radius);
  static PlanarDomain polygon(const Loop& boundary);

  PlanarDomain& add_slit(const Point& a, const Point& b);
  PlanarDomain& add_hole_disc(const Point& center, double radius);
  PlanarDomain& add_hole_polygon(const Loop& boundary);

  bool contains(const Point& p) const;
  /// Distance from p to the nearest boundary piece.
  double distance(const Point& p) const;
  Point nearest_boundary_point(const Point& p) const;
  /// Whole trace inside: every vertex contained and no segment meets the
  /// boundary.
  bool contains_loop(const Points& v) const;

  /// Image under p -> s p + t.
  PlanarDomain similar(double s, const Point& t) const;

  Box bounding_box() const;
  double diameter() const;

  Outer outer_kind() const { return outer_; }
  const Point& disc_center() const { return center_; }
  double disc_radius() const { return radius_; }
  const std::vector<std::pair<Point, Point>>& slits() const { return slits_; }
  const std::vector<std::pair<Point, double>>& hole_discs() const { return hole_discs_; }
  const std::vector<Loop>& hole_polygons() const { return hole_polys_; }
  const std::optional<Loop>& outer_polygon() const { return outer_poly_; }

 private:
  Outer outer_ = Outer::Plane;
  Point center_ = Point::Zero();
  double radius_ = 0;
  std::optional<Loop> outer_poly_;
  std::vector<std::pair<Point, Point>> slits_;
  std::vector<std::pair<Point, double>> hole_discs_;
  std::vector<Loop> hole_polys_;
};

/// Point in polygon by crossing parity; points on the boundary are
/// reported as outside.
bool inside_polygon(const Points& v, const Point& p);

}  // namespace loops
