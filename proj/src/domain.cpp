#include "loops/domain.hpp"

#include <cmath>

namespace loops {

namespace {

Point project_segment(const Point& p, const Point& a, const Point& b) {
  const Point d = b - a;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return a + t * d;
}

struct Nearest {
  double dist2 = std::numeric_limits<double>::infinity();
  Point point = Point::Zero();
  void offer(const Point& p, const Point& q) {
    const double d2 = (p - q).squaredNorm();
    if (d2 < dist2) {
      dist2 = d2;
      point = q;
    }
  }
};

void offer_polygon(Nearest& n, const Points& v, const Point& p) {
  const Eigen::Index m = v.cols();
  for (Eigen::Index i = 0; i < m; ++i) n.offer(p, project_segment(p, v.col(i), v.col((i + 1) % m)));
}

bool segment_hits_polygon(const Point& a, const Point& b, const Points& v) {
  const Eigen::Index m = v.cols();
  const double xlo = std::min(a.x(), b.x()), xhi = std::max(a.x(), b.x());
  const double ylo = std::min(a.y(), b.y()), yhi = std::max(a.y(), b.y());
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point c = v.col(i), d = v.col((i + 1) % m);
    if (std::max(c.x(), d.x()) < xlo || std::min(c.x(), d.x()) > xhi || std::max(c.y(), d.y()) < ylo ||
        std::min(c.y(), d.y()) > yhi)
      continue;
    if (segments_intersect(a, b, c, d)) return true;
  }
  return false;
}

}  // namespace

bool inside_polygon(const Points& v, const Point& p) {
  const Eigen::Index n = v.cols();
  bool in = false;
  for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
    const Point a = v.col(j), b = v.col(i);
    if (segment_dist2<double>(p, a, b) == 0) return false;
    if ((b.y() > p.y()) != (a.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

PlanarDomain PlanarDomain::whole_plane() { return PlanarDomain(); }

PlanarDomain PlanarDomain::disc(const Point& center, double radius) {
  require(radius > 0, ErrorCode::InvalidParameter, "disc radius must be positive");
  PlanarDomain d;
  d.outer_ = Outer::Disc;
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

PlanarDomain PlanarDomain::polygon(const Loop& boundary) {
  PlanarDomain d;
  d.outer_ = Outer::Polygon;
  d.outer_poly_ = boundary;
  return d;
}

PlanarDomain& PlanarDomain::add_slit(const Point& a, const Point& b) {
  require(a != b, ErrorCode::InvalidParameter, "slit endpoints coincide");
  slits_.emplace_back(a, b);
  return *this;
}

PlanarDomain& PlanarDomain::add_hole_disc(const Point& center, double radius) {
  require(radius > 0, ErrorCode::InvalidParameter, "hole radius must be positive");
  hole_discs_.emplace_back(center, radius);
  return *this;
}

PlanarDomain& PlanarDomain::add_hole_polygon(const Loop& boundary) {
  hole_polys_.push_back(boundary);
  return *this;
}

bool PlanarDomain::contains(const Point& p) const {
  switch (outer_) {
    case Outer::Plane: break;
    case Outer::Disc:
      if ((p - center_).norm() >= radius_) return false;
      break;
    case Outer::Polygon:
      if (!inside_polygon(outer_poly_->vertices(), p)) return false;
      break;
  }
  for (const auto& [c, r] : hole_discs_)
    if ((p - c).norm() <= r) return false;
  for (const auto& h : hole_polys_) {
    const auto& v = h.vertices();
    if (inside_polygon(v, p)) return false;
    Nearest n;
    offer_polygon(n, v, p);
    if (n.dist2 == 0) return false;
  }
  for (const auto& [a, b] : slits_)
    if (segment_dist2<double>(p, a, b) == 0) return false;
  return true;
}

Point PlanarDomain::nearest_boundary_point(const Point& p) const {
  Nearest n;
  switch (outer_) {
    case Outer::Plane: break;
    case Outer::Disc: {
      const Point d = p - center_;
      const double r = d.norm();
      n.offer(p, r > 0 ? Point(center_ + d * (radius_ / r)) : Point(center_ + Point(radius_, 0)));
      break;
    }
    case Outer::Polygon: offer_polygon(n, outer_poly_->vertices(), p); break;
  }
  for (const auto& [c, r] : hole_discs_) {
    const Point d = p - c;
    const double len = d.norm();
    n.offer(p, len > 0 ? Point(c + d * (r / len)) : Point(c + Point(r, 0)));
  }
  for (const auto& h : hole_polys_) offer_polygon(n, h.vertices(), p);
  for (const auto& [a, b] : slits_) n.offer(p, project_segment(p, a, b));
  require(std::isfinite(n.dist2), ErrorCode::InvalidParameter, "whole plane has no boundary");
  return n.point;
}

double PlanarDomain::distance(const Point& p) const {
  if (outer_ == Outer::Plane && slits_.empty() && hole_discs_.empty() && hole_polys_.empty())
    return std::numeric_limits<double>::infinity();
  return (nearest_boundary_point(p) - p).norm();
}

bool PlanarDomain::contains_loop(const Points& v) const {
  const Eigen::Index n = v.cols();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!contains(v.col(i))) return false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point a = v.col(i), b = v.col((i + 1) % n);
    if (outer_ == Outer::Polygon && segment_hits_polygon(a, b, outer_poly_->vertices())) return false;
    for (const auto& [c, r] : hole_discs_)
      if (segment_dist2<double>(c, a, b) <= r * r) return false;
    for (const auto& h : hole_polys_)
      if (segment_hits_polygon(a, b, h.vertices())) return false;
    for (const auto& [c, d] : slits_)
      if (segments_intersect(a, b, c, d)) return false;
  }
  return true;
}

PlanarDomain PlanarDomain::similar(double s, const Point& t) const {
  require(s > 0, ErrorCode::InvalidParameter, "similarity scale must be positive");
  auto map = [&](const Point& p) -> Point { return s * p + t; };
  auto map_loop = [&](const Loop& l) { return Loop((s * l.vertices()).colwise() + t); };
  PlanarDomain d;
  d.outer_ = outer_;
  d.center_ = map(center_);
  d.radius_ = s * radius_;
  if (outer_poly_) d.outer_poly_ = map_loop(*outer_poly_);
  for (const auto& [a, b] : slits_) d.slits_.emplace_back(map(a), map(b));
  for (const auto& [c, r] : hole_discs_) d.hole_discs_.emplace_back(map(c), s * r);
  for (const auto& h : hole_polys_) d.hole_polys_.push_back(map_loop(h));
  return d;
}

Box PlanarDomain::bounding_box() const {
  switch (outer_) {
    case Outer::Plane: return Box{};
    case Outer::Disc: return Box{(center_.array() - radius_).matrix(), (center_.array() + radius_).matrix()};
    case Outer::Polygon: {
      const auto& v = outer_poly_->vertices();
      return Box{v.rowwise().minCoeff(), v.rowwise().maxCoeff()};
    }
  }
  return Box{};
}

double PlanarDomain::diameter() const {
  switch (outer_) {
    case Outer::Plane: return std::numeric_limits<double>::infinity();
    case Outer::Disc: return 2 * radius_;
    case Outer::Polygon: return loops::diameter(outer_poly_->vertices());
  }
  return 0;
}

}  // namespace loops
