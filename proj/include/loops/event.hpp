#pragma once

#include <variant>
#include <vector>

#include "loops/domain.hpp"
#include "loops/loop.hpp"

namespace loops {

class LoopEvent;

struct ContainedIn { PlanarDomain domain; };
/// Complement of ContainedIn.
struct Exits { PlanarDomain domain; };
/// Nonzero winding around z.
struct Surrounds { Point z; };
/// Trace inside the open annulus and nonzero winding around its center.
struct SurroundsAnnulusHole { AnnulusSpec annulus; };
/// Max distance from center (the root by default) within [lo, hi].
struct MaxRadiusIn {
  double lo, hi;
  Point center = Point::Zero();
};
struct DiameterIn { double lo, hi; };
struct Never {};
struct AllOf { std::vector<LoopEvent> terms; };

class LoopEvent {
 public:
  using Node = std::variant<Never, ContainedIn, Exits, Surrounds, SurroundsAnnulusHole, MaxRadiusIn, DiameterIn, AllOf>;

  LoopEvent() : node_(Never{}) {}
  template <typename T>
  LoopEvent(T t) : node_(std::move(t)) {}  // NOLINT(google-explicit-constructor)

  const Node& node() const { return node_; }

  friend LoopEvent operator&&(LoopEvent a, LoopEvent b);

 private:
  Node node_;
};

/// Geometry cached once per loop so several events can share it.
class PreparedLoop {
 public:
  explicit PreparedLoop(const Points& v);

  const Points& vertices() const { return *v_; }
  double diameter() const { return diam_; }
  double max_radius() const { return max_r_; }
  double max_radius_about(const Point& c) const;
  const Box& box() const { return box_; }
  int winding(const Point& z) const;

 private:
  const Points* v_;
  std::vector<Eigen::Index> hull_;
  double diam_;
  double max_r_;
  Box box_;
};

bool evaluate_event(const LoopEvent& e, const PreparedLoop& loop);
bool evaluate_event(const LoopEvent& e, const Points& v);
inline bool evaluate_event(const LoopEvent& e, const Loop& loop) { return evaluate_event(e, loop.vertices()); }

/// Event E' with E'(g) == E(s g + t), s > 0.
LoopEvent pullback(const LoopEvent& e, double s, const Point& t);

/// A box that contains every loop satisfying e (unbounded if none is
/// implied; empty for Never).
Box support_box(const LoopEvent& e);

/// Annulus containment on the exact trace: vertices strictly between the
/// radii and no segment reaching the inner disc.
bool inside_annulus(const Points& v, const AnnulusSpec& a);

}  // namespace loops
