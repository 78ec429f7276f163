#include "loops/brownian.hpp"

#include <cmath>
#include <limits>

#include <boost/random/normal_distribution.hpp>

#include "loops/parallel.hpp"

namespace loops {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kEdge = std::log(1.01);
}  // namespace

void fill_bridge(Engine& eng, double T, int n_steps, Points& out) {
  require(T > 0 && std::isfinite(T), ErrorCode::InvalidParameter, "T must be positive");
  require(n_steps >= 2, ErrorCode::InvalidParameter, "need at least 2 steps");
  boost::random::normal_distribution<double> nd(0.0, std::sqrt(T / n_steps));
  out.resize(2, n_steps + 1);
  out.col(0).setZero();
  for (int k = 1; k <= n_steps; ++k) {
    const double dx = nd(eng);
    const double dy = nd(eng);
    out(0, k) = out(0, k - 1) + dx;
    out(1, k) = out(1, k - 1) + dy;
  }
  const Point wn = out.col(n_steps);
  for (int k = 1; k <= n_steps; ++k) out.col(k) -= (static_cast<double>(k) / n_steps) * wn;
}

BrownianLoopPath sample_bridge(double T, int n_steps, std::uint64_t seed, std::uint64_t stream) {
  Engine eng = make_engine(seed, stream);
  BrownianLoopPath p;
  p.T = T;
  p.n_steps = n_steps;
  fill_bridge(eng, T, n_steps, p.points);
  return p;
}

namespace {

Loop shape_from_bridge(const Points& bridge) {
  Points v = bridge.leftCols(bridge.cols() - 1);
  v /= max_radius(v);
  return Loop(std::move(v));
}

}  // namespace

Loop sample_shape_loop(int n_steps, std::uint64_t seed, std::uint64_t stream) {
  Engine eng = make_engine(seed, stream);
  Points b;
  fill_bridge(eng, 1.0, n_steps, b);
  return shape_from_bridge(b);
}

Points target_geometry(const Points& trace, EventTarget target, double h) {
  if (target == EventTarget::Trace) return trace;
  return outer_boundary(decompose_exterior(rasterize(trace, h))).vertices();
}

// ---- log-scale sets ---------------------------------------------------------

namespace {

struct Crossing {
  double s;
  int sign;
};

// Crossings of the half-line {s u : s > 0} by the closed polygon g, sorted by s.
std::vector<Crossing> ray_crossings(const Points& g, const Point& u) {
  const Point w(-u.y(), u.x());
  std::vector<Crossing> out;
  const Eigen::Index n = g.cols();
  Point a(g.col(n - 1).dot(u), g.col(n - 1).dot(w));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point b(g.col(k).dot(u), g.col(k).dot(w));
    int sign = 0;
    if (a.y() <= 0 && b.y() > 0) sign = 1;
    else if (b.y() <= 0 && a.y() > 0) sign = -1;
    if (sign != 0) {
      const double x = a.x() + (0 - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x > 0) out.push_back({x, sign});
    }
    a = b;
  }
  std::sort(out.begin(), out.end(), [](const Crossing& p, const Crossing& q) { return p.s < q.s; });
  return out;
}

double min_dist_to_origin(const Points& g) {
  const Eigen::Index n = g.cols();
  double best = kInf;
  const Point o = Point::Zero();
  for (Eigen::Index k = 0; k < n; ++k) best = std::min(best, segment_dist2<double>(o, g.col(k), g.col((k + 1) % n)));
  return std::sqrt(best);
}

bool is_origin(const Point& p) { return p.x() == 0 && p.y() == 0; }

double safe_log(double x) { return x > 0 ? std::log(x) : -kInf; }

class ScaleSolver {
 public:
  ScaleSolver(const PreparedLoop& g, double t_lo, double t_hi, int nodes)
      : g_(g), lo_(t_lo), hi_(t_hi), nodes_(nodes) {}

  IntervalSet solve(const LoopEvent& e) const { return std::visit(*this, e.node()); }

  IntervalSet operator()(const Never&) const { return {}; }

  IntervalSet operator()(const AllOf& e) const {
    IntervalSet s = window();
    for (const auto& t : e.terms) {
      if (s.empty()) break;
      s = s.intersect(solve(t));
    }
    return s;
  }

  IntervalSet operator()(const MaxRadiusIn& e) const {
    if (!is_origin(e.center)) return scan(e);
    return clip(safe_log(e.lo / g_.max_radius()), safe_log(e.hi / g_.max_radius()));
  }

  IntervalSet operator()(const DiameterIn& e) const {
    return clip(safe_log(e.lo / g_.diameter()), safe_log(e.hi / g_.diameter()));
  }

  IntervalSet operator()(const Surrounds& e) const {
    if (is_origin(e.z)) return g_.winding(e.z) != 0 ? window() : IntervalSet{};
    const double zn = e.z.norm();
    const auto cr = ray_crossings(g_.vertices(), e.z / zn);
    // winding at s u counts crossings beyond s
    IntervalSet out;
    int wn = 0;
    for (std::size_t k = cr.size(); k-- > 0;) {
      const double s_hi = cr[k].s;
      wn += cr[k].sign;
      const double s_lo = k > 0 ? cr[k - 1].s : 0.0;
      if (wn != 0) out.add(std::log(zn) - std::log(s_hi), std::log(zn) - safe_log(s_lo));
    }
    return out.intersect(window());
  }

  IntervalSet operator()(const SurroundsAnnulusHole& e) const {
    const auto& a = e.annulus;
    if (!is_origin(a.center)) return scan(e);
    const double dmin = min_dist_to_origin(g_.vertices());
    IntervalSet s = clip(safe_log(a.r_inner / dmin), std::log(a.r_outer / g_.max_radius()));
    if (s.empty()) return s;
    return g_.winding(Point::Zero()) != 0 ? s : IntervalSet{};
  }

  IntervalSet operator()(const ContainedIn& e) const { return contained(e.domain, e); }

  IntervalSet operator()(const Exits& e) const {
    return contained(e.domain, LoopEvent(ContainedIn{e.domain})).complement(lo_, hi_);
  }

 private:
  IntervalSet window() const { return IntervalSet(lo_, hi_); }
  IntervalSet clip(double a, double b) const { return IntervalSet(std::max(a, lo_), std::min(b, hi_)); }

  bool holds(const LoopEvent& e, double t) const { return evaluate_event(pullback(e, std::exp(t), Point::Zero()), g_); }

  // Scan a grid of log-scales and bisect every change of truth value.
  IntervalSet scan(const LoopEvent& e) const {
    const int n = std::max(8, static_cast<int>(std::ceil(nodes_ * (hi_ - lo_))));
    const double dt = (hi_ - lo_) / n;
    IntervalSet out;
    bool prev = holds(e, lo_);
    double start = lo_;
    for (int k = 1; k <= n; ++k) {
      const double t = lo_ + k * dt;
      const bool cur = holds(e, t);
      if (cur != prev) {
        double a = t - dt, b = t;
        for (int it = 0; it < 40; ++it) {
          const double m = 0.5 * (a + b);
          if (holds(e, m) == prev) a = m;
          else b = m;
        }
        const double edge = 0.5 * (a + b);
        if (prev) out.add(start, edge);
        else start = edge;
        prev = cur;
      }
    }
    if (prev) out.add(start, hi_);
    return out;
  }

  IntervalSet contained(const PlanarDomain& d, const LoopEvent& as_event) const {
    bool closed_form = d.outer_kind() == PlanarDomain::Outer::Plane ||
                       (d.outer_kind() == PlanarDomain::Outer::Disc && is_origin(d.disc_center()));
    closed_form = closed_form && d.hole_polygons().empty();
    for (const auto& [c, r] : d.hole_discs()) closed_form = closed_form && is_origin(c);
    if (!closed_form) return scan(as_event);

    IntervalSet s = window();
    if (d.outer_kind() == PlanarDomain::Outer::Disc) {
      // open disc: r M < R
      s = s.intersect(IntervalSet(lo_, std::min(hi_, std::log(d.disc_radius() / g_.max_radius()))));
    }
    if (!d.hole_discs().empty()) {
      const double dmin = min_dist_to_origin(g_.vertices());
      for (const auto& [c, r] : d.hole_discs()) s = s.intersect(IntervalSet(std::max(lo_, safe_log(r / dmin)), hi_));
    }
    for (const auto& [a, b] : d.slits()) {
      const double cr = a.x() * b.y() - a.y() * b.x();
      if (std::abs(cr) > 1e-12 * a.norm() * b.norm()) {
        s = s.intersect(slit_hits(a, b).complement(lo_, hi_));
        continue;
      }
      // split a slit through the origin into two radial pieces
      std::vector<std::pair<Point, Point>> pieces;
      if (a.dot(b) < 0) {
        pieces.emplace_back(Point::Zero(), a);
        pieces.emplace_back(Point::Zero(), b);
      } else {
        pieces.emplace_back(a, b);
      }
      for (const auto& [p, q] : pieces) {
        const double s_lo = std::min(p.norm(), q.norm()), s_hi = std::max(p.norm(), q.norm());
        const Point u = (p.norm() > q.norm() ? p : q) / s_hi;
        IntervalSet hit;
        for (const auto& c : ray_crossings(g_.vertices(), u)) hit.add(safe_log(s_lo / c.s), std::log(s_hi / c.s));
        s = s.intersect(hit.complement(lo_, hi_));
      }
    }
    return s;
  }

  // Log-scales at which the scaled trace meets the segment [c, d], which
  // must not be collinear with the origin. For one trace edge the hit
  // scales form an interval: inside the cone over [c, d] the hit scale is
  // k / (n . p), monotone along the edge.
  IntervalSet slit_hits(const Point& c, const Point& d) const {
    const Point n(d.y() - c.y(), c.x() - d.x());
    const double k = n.dot(c);
    const double orient = c.x() * d.y() - c.y() * d.x() > 0 ? 1.0 : -1.0;
    auto cross = [](const Point& p, const Point& q) { return p.x() * q.y() - p.y() * q.x(); };
    const Points& g = g_.vertices();
    const Eigen::Index m = g.cols();
    std::vector<std::pair<double, double>> pieces;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Point a = g.col(i), e = g.col((i + 1) % m) - a;
      // orient * cross(c, p) >= 0 and orient * cross(p, d) >= 0, p = a + u e
      double u0 = 0, u1 = 1;
      auto clip_linear = [&](double v0, double slope) {
        if (slope == 0) {
          if (v0 < 0) u1 = -1;
          return;
        }
        const double r = -v0 / slope;
        if (slope > 0) u0 = std::max(u0, r);
        else u1 = std::min(u1, r);
      };
      clip_linear(orient * cross(c, a), orient * cross(c, e));
      clip_linear(-orient * cross(d, a), -orient * cross(d, e));
      if (u0 > u1) continue;
      const double np0 = n.dot(a + u0 * e), np1 = n.dot(a + u1 * e);
      const double l0 = np0 * k > 0 ? std::log(k / np0) : kInf;
      const double l1 = np1 * k > 0 ? std::log(k / np1) : kInf;
      const double t0 = std::min(l0, l1), t1 = std::max(l0, l1);
      if (t1 < lo_ || t0 > hi_) continue;
      pieces.emplace_back(t0, t1);
    }
    IntervalSet hit;
    hit.add_all(pieces);
    return hit;
  }

  const PreparedLoop& g_;
  double lo_, hi_;
  int nodes_;
};

}  // namespace

IntervalSet log_scale_set(const LoopEvent& e, const PreparedLoop& g, double t_lo, double t_hi, int nodes_per_unit) {
  require(t_lo < t_hi, ErrorCode::InvalidWindow, "empty scale window");
  return ScaleSolver(g, t_lo, t_hi, nodes_per_unit).solve(e);
}

// ---- estimators -------------------------------------------------------------

namespace {

void check_options(const SamplerOptions& o) {
  require(o.n_samples > 0, ErrorCode::EmptyBatch, "n_samples must be positive");
  require(o.n_steps >= 2, ErrorCode::InvalidParameter, "n_steps must be at least 2");
  require(o.hull_resolution > 0, ErrorCode::InvalidParameter, "hull_resolution must be positive");
}

std::vector<MassEstimate> summarize(std::vector<std::vector<double>>& values, std::vector<std::vector<std::uint8_t>>& viol) {
  std::vector<MassEstimate> out(values.size());
  for (std::size_t e = 0; e < values.size(); ++e) {
    out[e].estimate = mean_ci(values[e]);
    out[e].n_samples = values[e].size();
    out[e].window_violations = static_cast<std::size_t>(std::count(viol[e].begin(), viol[e].end(), 1));
    out[e].values = std::move(values[e]);
  }
  return out;
}

}  // namespace

std::vector<MassEstimate> estimate_N0_masses(const std::vector<LoopEvent>& events, EventTarget target,
                                             const ScaleWindow& w, const SamplerOptions& o) {
  check_options(o);
  require(w.r_lo > 0 && w.r_hi > w.r_lo && std::isfinite(w.r_hi), ErrorCode::InvalidWindow, "need 0 < r_lo < r_hi");
  const double t_lo = std::log(w.r_lo), t_hi = std::log(w.r_hi);
  std::vector<std::vector<double>> values(events.size(), std::vector<double>(o.n_samples));
  std::vector<std::vector<std::uint8_t>> viol(events.size(), std::vector<std::uint8_t>(o.n_samples));
  parallel_for(o.n_samples, o.jobs, [&](std::size_t i) {
    const Loop shape = sample_shape_loop(o.n_steps, o.seed, i);
    const Points g = target_geometry(shape.vertices(), target, o.hull_resolution);
    const PreparedLoop pg(g);
    for (std::size_t e = 0; e < events.size(); ++e) {
      const IntervalSet s = log_scale_set(events[e], pg, t_lo, t_hi, o.quadrature_nodes);
      values[e][i] = s.measure();
      if (!s.empty())
        viol[e][i] = s.intervals().front().first < t_lo + kEdge || s.intervals().back().second > t_hi - kEdge;
    }
  });
  return summarize(values, viol);
}

MassEstimate estimate_N0_mass(const LoopEvent& e, EventTarget target, const ScaleWindow& w, const SamplerOptions& o) {
  return estimate_N0_masses({e}, target, w, o).front();
}

std::vector<MassEstimate> estimate_nu_masses(const std::vector<LoopEvent>& events, const ScaleWindow& w,
                                             const SamplerOptions& o) {
  return estimate_N0_masses(events, EventTarget::OuterBoundary, w, o);
}

MassEstimate estimate_nu_mass(const LoopEvent& e, const ScaleWindow& w, const SamplerOptions& o) {
  return estimate_nu_masses({e}, w, o).front();
}

std::vector<MassEstimate> estimate_M_masses(const std::vector<LoopEvent>& events, EventTarget target, const MWindow& w,
                                            const SamplerOptions& o) {
  check_options(o);
  require(w.K.bounded() && !w.K.empty(), ErrorCode::InvalidWindow, "K must be a nonempty bounded box");
  require(w.T_lo > 0 && w.T_hi > w.T_lo && std::isfinite(w.T_hi), ErrorCode::InvalidWindow, "need 0 < T_lo < T_hi");
  require(w.draws_per_bridge >= 1, ErrorCode::InvalidParameter, "draws_per_bridge must be positive");
  const Point side = w.K.hi - w.K.lo;
  const double area = side.x() * side.y();
  const double logT = std::log(w.T_hi / w.T_lo);
  std::vector<std::vector<double>> values(events.size(), std::vector<double>(o.n_samples));
  std::vector<std::vector<std::uint8_t>> viol(events.size(), std::vector<std::uint8_t>(o.n_samples));
  parallel_for(o.n_samples, o.jobs, [&](std::size_t i) {
    Engine eng = make_engine(o.seed, i);
    Points bridge;
    fill_bridge(eng, 1.0, o.n_steps, bridge);
    const Points trace = bridge.leftCols(bridge.cols() - 1);
    const Points g = target_geometry(trace, target, o.hull_resolution);
    const PreparedLoop pg(g);
    std::vector<double> acc(events.size(), 0.0);
    for (int m = 0; m < w.draws_per_bridge; ++m) {
      const double ux = uniform01(eng), uy = uniform01(eng), ut = uniform01(eng);
      const Point z = w.K.lo + Point(ux * side.x(), uy * side.y());
      const double T = w.T_lo * std::exp(ut * logT);
      const double weight = area * logT / (2 * T);
      const bool near_edge = ut < 0.01 || ut > 0.99 || ux < 0.01 || ux > 0.99 || uy < 0.01 || uy > 0.99;
      for (std::size_t e = 0; e < events.size(); ++e) {
        if (evaluate_event(pullback(events[e], std::sqrt(T), z), pg)) {
          acc[e] += weight;
          if (near_edge) viol[e][i] = 1;
        }
      }
    }
    for (std::size_t e = 0; e < events.size(); ++e) values[e][i] = acc[e] / w.draws_per_bridge;
  });
  return summarize(values, viol);
}

MassEstimate estimate_M_mass(const LoopEvent& e, EventTarget target, const MWindow& w, const SamplerOptions& o) {
  return estimate_M_masses({e}, target, w, o).front();
}

// ---- annulus masses integrated over centre and scale -------------------------

namespace {

struct GaugeNorm {
  Gauge g;
  double operator()(const Point& v) const { return g == Gauge::Euclidean ? v.norm() : v.cwiseAbs().maxCoeff(); }
};

// Accumulates sum over cells of (rho - log(dmax/dmin))^+ h^2 for one boundary.
void accumulate_region(const ComponentDecomposition& d, const std::vector<std::size_t>& cells, const Points& hull_pts,
                       const std::vector<double>& dmin_cells, const std::vector<double>& rhos, GaugeNorm norm,
                       std::vector<double>& out) {
  const auto& g = d.grid;
  const double h = g.h;
  const double rho_max = *std::max_element(rhos.begin(), rhos.end());
  double diam = 0;
  for (Eigen::Index a = 0; a < hull_pts.cols(); ++a)
    for (Eigen::Index b = a + 1; b < hull_pts.cols(); ++b) diam = std::max(diam, norm(hull_pts.col(a) - hull_pts.col(b)));
  const double threshold = diam / (2 * std::exp(rho_max));
  const std::size_t nx = static_cast<std::size_t>(g.nx);
  for (std::size_t c : cells) {
    const double dmin = dmin_cells[c] * h - 0.5 * h;
    if (dmin <= threshold) continue;
    const Point p = g.center(static_cast<int>(c % nx), static_cast<int>(c / nx));
    double dmax = 0;
    for (Eigen::Index k = 0; k < hull_pts.cols(); ++k) dmax = std::max(dmax, norm(hull_pts.col(k) - p));
    const double lr = std::log(dmax / dmin);
    for (std::size_t r = 0; r < rhos.size(); ++r)
      if (rhos[r] > lr) out[r] += (rhos[r] - lr) * h * h;
  }
}

std::vector<double> distance_cells(const std::vector<std::uint8_t>& feature, int nx, int ny, Gauge gauge) {
  std::vector<double> out(feature.size());
  if (gauge == Gauge::Euclidean) {
    const auto d2 = squared_distance_transform(feature, nx, ny);
    for (std::size_t c = 0; c < d2.size(); ++c) out[c] = std::sqrt(d2[c]);
  } else {
    const auto d = chessboard_distance_transform(feature, nx, ny);
    for (std::size_t c = 0; c < d.size(); ++c) out[c] = d[c];
  }
  return out;
}

Points hull_points(const Points& v) {
  const auto idx = convex_hull_indices(v);
  Points h(2, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) h.col(static_cast<Eigen::Index>(k)) = v.col(idx[k]);
  return h;
}

}  // namespace

std::vector<MassEstimate> estimate_M_annulus_masses(const std::vector<double>& rhos, BoundarySide side, Gauge gauge,
                                                    const SamplerOptions& o) {
  check_options(o);
  require(!rhos.empty(), ErrorCode::InvalidParameter, "no moduli given");
  for (double r : rhos) require(r > 0, ErrorCode::InvalidParameter, "modulus must be positive");
  std::vector<std::vector<double>> values(rhos.size(), std::vector<double>(o.n_samples));
  std::vector<std::vector<std::uint8_t>> viol(rhos.size(), std::vector<std::uint8_t>(o.n_samples, 0));
  const GaugeNorm norm{gauge};
  parallel_for(o.n_samples, o.jobs, [&](std::size_t i) {
    Engine eng = make_engine(o.seed, i);
    Points bridge;
    fill_bridge(eng, 1.0, o.n_steps, bridge);
    const Points trace = bridge.leftCols(bridge.cols() - 1);
    RasterGrid grid = rasterize(trace, o.hull_resolution);
    std::vector<double> acc(rhos.size(), 0.0);
    if (side == BoundarySide::Outer) {
      const auto d = decompose_exterior(std::move(grid));
      std::vector<std::uint8_t> feat(d.label.size());
      std::vector<std::size_t> cells;
      for (std::size_t c = 0; c < d.label.size(); ++c) {
        feat[c] = d.label[c] == 0;
        if (d.label[c] != 0) cells.push_back(c);
      }
      const auto dist = distance_cells(feat, d.grid.nx, d.grid.ny, gauge);
      const Points hp = hull_points(outer_boundary(d).vertices());
      accumulate_region(d, cells, hp, dist, rhos, norm, acc);
    } else {
      const auto d = decompose(std::move(grid));
      std::vector<std::uint8_t> feat(d.label.size());
      for (std::size_t c = 0; c < d.label.size(); ++c) feat[c] = d.label[c] == -1;
      const auto dist = distance_cells(feat, d.grid.nx, d.grid.ny, gauge);
      // bucket cells by component
      const int k = d.bounded_count();
      std::vector<std::size_t> start(static_cast<std::size_t>(k) + 2, 0);
      for (auto l : d.label)
        if (l > 0) ++start[static_cast<std::size_t>(l) + 1];
      for (std::size_t a = 1; a < start.size(); ++a) start[a] += start[a - 1];
      std::vector<std::size_t> order(start.back());
      std::vector<std::size_t> fill(start.begin(), start.end() - 1);
      for (std::size_t c = 0; c < d.label.size(); ++c)
        if (d.label[c] > 0) order[fill[static_cast<std::size_t>(d.label[c])]++] = c;
      const std::size_t nx = static_cast<std::size_t>(d.grid.nx);
      const double hh = 0.5 * d.grid.h;
      for (int l = 1; l <= k; ++l) {
        const std::vector<std::size_t> cells(order.begin() + static_cast<std::ptrdiff_t>(start[static_cast<std::size_t>(l)]),
                                             order.begin() + static_cast<std::ptrdiff_t>(start[static_cast<std::size_t>(l) + 1]));
        Points centers(2, static_cast<Eigen::Index>(cells.size()));
        for (std::size_t a = 0; a < cells.size(); ++a)
          centers.col(static_cast<Eigen::Index>(a)) = d.grid.center(static_cast<int>(cells[a] % nx), static_cast<int>(cells[a] / nx));
        // corners of the extreme cells span the component's hull
        const auto hc = convex_hull_indices(centers);
        const std::size_t nh = hc.empty() ? cells.size() : hc.size();
        Points corners(2, static_cast<Eigen::Index>(4 * nh));
        for (std::size_t a = 0; a < nh; ++a) {
          const Point p = centers.col(hc.empty() ? static_cast<Eigen::Index>(a) : hc[a]);
          corners.col(static_cast<Eigen::Index>(4 * a + 0)) = p + Point(-hh, -hh);
          corners.col(static_cast<Eigen::Index>(4 * a + 1)) = p + Point(hh, -hh);
          corners.col(static_cast<Eigen::Index>(4 * a + 2)) = p + Point(hh, hh);
          corners.col(static_cast<Eigen::Index>(4 * a + 3)) = p + Point(-hh, hh);
        }
        accumulate_region(d, cells, hull_points(corners), dist, rhos, norm, acc);
      }
    }
    for (std::size_t r = 0; r < rhos.size(); ++r) values[r][i] = acc[r];
  });
  return summarize(values, viol);
}

// ---- hull areas and winding spectrum ----------------------------------------

Estimate expected_hull_area(double T, int n_steps, std::size_t n_samples, double h, std::uint64_t seed, int jobs) {
  require(n_samples > 0, ErrorCode::EmptyBatch, "n_samples must be positive");
  std::vector<double> a(n_samples);
  parallel_for(n_samples, jobs, [&](std::size_t i) {
    Engine eng = make_engine(seed, i);
    Points b;
    fill_bridge(eng, T, n_steps, b);
    a[i] = static_cast<double>(filled_cell_count(rasterize(b.leftCols(b.cols() - 1), h))) * h * h;
  });
  return mean_ci(a);
}

HullAreaStudy hull_area_study(double T, int n_steps, std::size_t n_samples, const std::vector<double>& resolutions,
                              std::uint64_t seed, double exponent, bool coupled, int jobs) {
  require(n_samples > 0, ErrorCode::EmptyBatch, "n_samples must be positive");
  require(resolutions.size() >= 2, ErrorCode::InvalidParameter, "need at least two resolutions");
  for (std::size_t k = 1; k < resolutions.size(); ++k)
    require(resolutions[k] < resolutions[k - 1], ErrorCode::InvalidParameter, "resolutions must decrease");
  const std::size_t nr = resolutions.size();
  // coarser levels see the same bridge thinned so that step/h stays fixed
  std::vector<Eigen::Index> strides(nr, 1);
  if (coupled) {
    for (std::size_t r = 0; r < nr; ++r) {
      const double q = resolutions[r] / resolutions[nr - 1];
      const auto stride = static_cast<Eigen::Index>(std::llround(q * q));
      require(std::abs(q * q - static_cast<double>(stride)) < 1e-9 && n_steps % stride == 0 && n_steps / stride >= 3,
              ErrorCode::InvalidParameter, "resolution ratios must thin the bridge evenly");
      strides[r] = stride;
    }
  }
  std::vector<std::vector<double>> a(nr, std::vector<double>(n_samples));
  parallel_for(n_samples, jobs, [&](std::size_t i) {
    Engine eng = make_engine(seed, i);
    Points b;
    fill_bridge(eng, T, n_steps, b);
    for (std::size_t r = 0; r < nr; ++r) {
      const double h = resolutions[r];
      const Eigen::Index stride = strides[r];
      Points trace(2, n_steps / stride);
      for (Eigen::Index k = 0; k < trace.cols(); ++k) trace.col(k) = b.col(k * stride);
      a[r][i] = static_cast<double>(filled_cell_count(rasterize(trace, h))) * h * h;
    }
  });
  HullAreaStudy s;
  s.resolutions = resolutions;
  s.exponent = exponent;
  for (const auto& v : a) s.area.push_back(mean_ci(v));
  const double q = std::pow(resolutions[nr - 2] / resolutions[nr - 1], exponent);
  std::vector<double> ext(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) ext[i] = (q * a[nr - 1][i] - a[nr - 2][i]) / (q - 1);
  s.extrapolated = mean_ci(ext);
  s.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  if (nr >= 3) {
    const double d1 = s.area[nr - 3].mean - s.area[nr - 2].mean;
    const double d2 = s.area[nr - 2].mean - s.area[nr - 1].mean;
    if (d1 * d2 > 0) s.fitted_exponent = std::log(d1 / d2) / std::log(resolutions[nr - 2] / resolutions[nr - 1]);
  }
  return s;
}

WindingSpectrum winding_area_spectrum(double T, int n_steps, std::size_t n_samples, double h, std::uint64_t seed,
                                      int n_max, int jobs) {
  require(n_samples > 0, ErrorCode::EmptyBatch, "n_samples must be positive");
  require(n_max >= 1, ErrorCode::InvalidParameter, "n_max must be positive");
  const std::size_t width = static_cast<std::size_t>(2 * n_max + 1);
  std::vector<std::vector<double>> a(width, std::vector<double>(n_samples));
  std::vector<double> hull(n_samples), moment(n_samples);
  parallel_for(n_samples, jobs, [&](std::size_t i) {
    Engine eng = make_engine(seed, i);
    Points b;
    fill_bridge(eng, T, n_steps, b);
    const Points trace = b.leftCols(b.cols() - 1);
    const RasterGrid g = rasterize(trace, h);
    const auto wf = winding_field(trace, g);
    std::vector<std::int64_t> counts(width, 0);
    std::int64_t mom = 0;
    for (int w : wf) {
      mom += w;
      if (std::abs(w) <= n_max) ++counts[static_cast<std::size_t>(w + n_max)];
    }
    for (std::size_t k = 0; k < width; ++k) a[k][i] = static_cast<double>(counts[k]) * h * h;
    moment[i] = static_cast<double>(mom) * h * h;
    hull[i] = static_cast<double>(filled_cell_count(g)) * h * h;
  });
  WindingSpectrum s;
  s.n_max = n_max;
  for (int n = -n_max; n <= n_max; ++n) s.area[n] = mean_ci(a[static_cast<std::size_t>(n + n_max)]);
  s.hull_area = mean_ci(hull);
  s.first_moment = mean_ci(moment);
  return s;
}

// ---- two roots --------------------------------------------------------------

namespace {

bool forces_surrounding(const LoopEvent& e, const Point& z) {
  if (const auto* s = std::get_if<Surrounds>(&e.node())) return s->z == z;
  if (const auto* a = std::get_if<SurroundsAnnulusHole>(&e.node())) return a->annulus.center == z;
  if (const auto* all = std::get_if<AllOf>(&e.node()))
    return std::any_of(all->terms.begin(), all->terms.end(), [&](const LoopEvent& t) { return forces_surrounding(t, z); });
  return false;
}

}  // namespace

TwoRootReport two_root_agreement(const Point& ztilde, const std::vector<LoopEvent>& events, const ScaleWindow& w,
                                 const SamplerOptions& o) {
  for (const auto& e : events)
    require(forces_surrounding(e, Point::Zero()) && forces_surrounding(e, ztilde), ErrorCode::PreconditionFailed,
            "event must force surrounding both roots");
  TwoRootReport r;
  r.rooted_at_zero = estimate_nu_masses(events, w, o);
  if (is_origin(ztilde)) {
    r.rooted_at_ztilde = r.rooted_at_zero;
  } else {
    std::vector<LoopEvent> shifted;
    for (const auto& e : events) shifted.push_back(pullback(e, 1.0, ztilde));
    SamplerOptions o2 = o;
    o2.seed = stream_seed(o.seed, 0x7a7e);
    r.rooted_at_ztilde = estimate_nu_masses(shifted, w, o2);
  }
  for (std::size_t k = 0; k < events.size(); ++k)
    r.difference.push_back(compare(r.rooted_at_ztilde[k].estimate, r.rooted_at_zero[k].estimate));
  return r;
}

}  // namespace loops
