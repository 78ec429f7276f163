#include "loops/event.hpp"

namespace loops {

LoopEvent operator&&(LoopEvent a, LoopEvent b) {
  AllOf all;
  for (LoopEvent* e : {&a, &b}) {
    if (auto* sub = std::get_if<AllOf>(&e->node_)) {
      for (auto& t : sub->terms) all.terms.push_back(std::move(t));
    } else {
      all.terms.push_back(std::move(*e));
    }
  }
  return LoopEvent(std::move(all));
}

PreparedLoop::PreparedLoop(const Points& v)
    : v_(&v), hull_(convex_hull_indices(v)), max_r_(loops::max_radius(v)), box_{v.rowwise().minCoeff(), v.rowwise().maxCoeff()} {
  double best = 0;
  for (std::size_t i = 0; i < hull_.size(); ++i)
    for (std::size_t j = i + 1; j < hull_.size(); ++j) best = std::max(best, (v.col(hull_[i]) - v.col(hull_[j])).squaredNorm());
  diam_ = std::sqrt(best);
}

double PreparedLoop::max_radius_about(const Point& c) const {
  if (c.isZero()) return max_r_;
  double best = 0;
  for (auto k : hull_) best = std::max(best, (v_->col(k) - c).squaredNorm());
  return std::sqrt(best);
}

int PreparedLoop::winding(const Point& z) const {
  if ((z.array() < box_.lo.array()).any() || (z.array() > box_.hi.array()).any()) return 0;
  return winding_number_tol(*v_, z, 1e-12 * diam_);
}

bool inside_annulus(const Points& v, const AnnulusSpec& a) {
  const double ro2 = a.r_outer * a.r_outer, ri2 = a.r_inner * a.r_inner;
  const Eigen::Index n = v.cols();
  for (Eigen::Index i = 0; i < n; ++i)
    if ((v.col(i) - a.center).squaredNorm() >= ro2) return false;
  for (Eigen::Index i = 0; i < n; ++i)
    if (segment_dist2<double>(a.center, v.col(i), v.col((i + 1) % n)) <= ri2) return false;
  return true;
}

namespace {

struct Evaluator {
  const PreparedLoop& l;

  bool operator()(const Never&) const { return false; }
  bool operator()(const ContainedIn& e) const { return e.domain.contains_loop(l.vertices()); }
  bool operator()(const Exits& e) const { return !e.domain.contains_loop(l.vertices()); }
  bool operator()(const Surrounds& e) const { return l.winding(e.z) != 0; }
  bool operator()(const SurroundsAnnulusHole& e) const {
    return inside_annulus(l.vertices(), e.annulus) && l.winding(e.annulus.center) != 0;
  }
  bool operator()(const MaxRadiusIn& e) const {
    const double m = l.max_radius_about(e.center);
    return e.lo <= m && m <= e.hi;
  }
  bool operator()(const DiameterIn& e) const { return e.lo <= l.diameter() && l.diameter() <= e.hi; }
  bool operator()(const AllOf& e) const {
    for (const auto& t : e.terms)
      if (!std::visit(*this, t.node())) return false;
    return true;
  }
};

struct Support {
  Box operator()(const Never&) const { return Box{Point::Constant(1), Point::Constant(-1)}; }
  Box operator()(const ContainedIn& e) const { return e.domain.bounding_box(); }
  Box operator()(const Exits&) const { return Box{}; }
  Box operator()(const Surrounds&) const { return Box{}; }
  Box operator()(const SurroundsAnnulusHole& e) const {
    const auto& a = e.annulus;
    return Box{(a.center.array() - a.r_outer).matrix(), (a.center.array() + a.r_outer).matrix()};
  }
  Box operator()(const MaxRadiusIn& e) const {
    return Box{(e.center.array() - e.hi).matrix(), (e.center.array() + e.hi).matrix()};
  }
  Box operator()(const DiameterIn&) const { return Box{}; }
  Box operator()(const AllOf& e) const {
    Box b;
    for (const auto& t : e.terms) b = b.intersect(std::visit(*this, t.node()));
    return b;
  }
};

struct Pullback {
  double s;
  Point t;
  double inv() const { return 1.0 / s; }
  Point map(const Point& p) const { return (p - t) / s; }

  LoopEvent operator()(const Never& e) const { return e; }
  LoopEvent operator()(const ContainedIn& e) const { return ContainedIn{e.domain.similar(inv(), -t / s)}; }
  LoopEvent operator()(const Exits& e) const { return Exits{e.domain.similar(inv(), -t / s)}; }
  LoopEvent operator()(const Surrounds& e) const { return Surrounds{map(e.z)}; }
  LoopEvent operator()(const SurroundsAnnulusHole& e) const {
    return SurroundsAnnulusHole{AnnulusSpec(map(e.annulus.center), e.annulus.r_inner / s, e.annulus.r_outer / s)};
  }
  LoopEvent operator()(const MaxRadiusIn& e) const { return MaxRadiusIn{e.lo / s, e.hi / s, map(e.center)}; }
  LoopEvent operator()(const DiameterIn& e) const { return DiameterIn{e.lo / s, e.hi / s}; }
  LoopEvent operator()(const AllOf& e) const {
    AllOf out;
    for (const auto& t : e.terms) out.terms.push_back(std::visit(*this, t.node()));
    return out;
  }
};

}  // namespace

LoopEvent pullback(const LoopEvent& e, double s, const Point& t) {
  require(s > 0, ErrorCode::InvalidParameter, "pullback scale must be positive");
  return std::visit(Pullback{s, t}, e.node());
}

bool evaluate_event(const LoopEvent& e, const PreparedLoop& loop) { return std::visit(Evaluator{loop}, e.node()); }

bool evaluate_event(const LoopEvent& e, const Points& v) {
  const PreparedLoop p(v);
  return evaluate_event(e, p);
}

Box support_box(const LoopEvent& e) { return std::visit(Support{}, e.node()); }

}  // namespace loops
