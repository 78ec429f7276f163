#include "loops/percolation.hpp"

#include <cmath>
#include <string>

#include "loops/error.hpp"
#include "loops/parallel.hpp"
#include "loops/rng.hpp"

namespace loops {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Hex corners on the integer lattice (X in half units, Y in units of 1/(2 sqrt 3)).
// Corner k sits at angle 60k - 30 degrees from the site.
constexpr int kCorner[6][2] = {{1, -1}, {1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}};

Point corner_point(int q, int r, int k) {
  const int X = 2 * q + r + kCorner[k][0];
  const int Y = 3 * r + kCorner[k][1];
  return Point(0.5 * X, Y / (2 * kSqrt3));
}

// Traces the cycle of hex edges with pred on the left, starting at the edge of
// site (q, r) facing direction d. Calls visit(q, r, d) for each edge.
template <class Pred, class Visit>
SimpleLoop trace(int q, int r, int d, Pred&& in, Visit&& visit) {
  std::vector<Point> pts;
  const int q0 = q, r0 = r, d0 = d;
  do {
    visit(q, r, d);
    pts.push_back(corner_point(q, r, d));
    const int d1 = (d + 1) % 6;
    const int cq = q + kHexDir[d1][0], cr = r + kHexDir[d1][1];
    if (in(cq, cr)) {
      q = cq;
      r = cr;
      d = (d + 5) % 6;
    } else {
      d = d1;
    }
  } while (q != q0 || r != r0 || d != d0);
  Points v(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = pts[k];
  return SimpleLoop::by_construction(Loop(std::move(v)));
}

struct Extent {
  double x_lo, x_hi, y_lo, y_hi;
};

Extent site_extent(const Cluster& k, int L) {
  Extent e{1e300, -1e300, 1e300, -1e300};
  for (int s : k.sites) {
    const Point p = PercConfig::position(s % L, s / L);
    e.x_lo = std::min(e.x_lo, p.x());
    e.x_hi = std::max(e.x_hi, p.x());
    e.y_lo = std::min(e.y_lo, p.y());
    e.y_hi = std::max(e.y_hi, p.y());
  }
  return e;
}

}  // namespace

Point PercConfig::position(int q, int r) { return Point(q + 0.5 * r, 0.5 * kSqrt3 * r); }

PercConfig sample_config(int L, double p, std::uint64_t seed, std::uint64_t stream) {
  require(L >= 2, ErrorCode::InvalidParameter, "L must be at least 2");
  require(p >= 0 && p <= 1, ErrorCode::InvalidParameter, "p must lie in [0, 1]");
  PercConfig c;
  c.L = L;
  c.p = p;
  c.white.resize(static_cast<std::size_t>(L) * L);
  Engine eng = make_engine(seed, stream);
  for (auto& w : c.white) w = uniform01(eng) < p;
  return c;
}

PercConfig config_from_rows(const std::vector<std::string>& rows) {
  require(!rows.empty(), ErrorCode::InvalidParameter, "no rows");
  const int L = static_cast<int>(rows.size());
  PercConfig c;
  c.L = L;
  c.white.assign(static_cast<std::size_t>(L) * L, 0);
  for (int k = 0; k < L; ++k) {
    const int r = L - 1 - k;
    require(static_cast<int>(rows[static_cast<std::size_t>(k)].size()) == L, ErrorCode::InvalidParameter, "rows must be L long");
    for (int q = 0; q < L; ++q) c.white[static_cast<std::size_t>(c.index(q, r))] = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] == '#';
  }
  return c;
}

std::vector<Cluster> clusters(const PercConfig& c, bool white) {
  const int L = c.L;
  std::vector<std::uint8_t> seen(c.white.size(), 0);
  std::vector<Cluster> out;
  std::vector<int> stack;
  for (int s = 0; s < L * L; ++s) {
    if (seen[static_cast<std::size_t>(s)] || (c.white[static_cast<std::size_t>(s)] != 0) != white) continue;
    Cluster k;
    k.white = white;
    k.q_lo = k.r_lo = L;
    k.q_hi = k.r_hi = -1;
    seen[static_cast<std::size_t>(s)] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      k.sites.push_back(t);
      const int q = t % L, r = t / L;
      k.q_lo = std::min(k.q_lo, q);
      k.q_hi = std::max(k.q_hi, q);
      k.r_lo = std::min(k.r_lo, r);
      k.r_hi = std::max(k.r_hi, r);
      for (const auto& dir : kHexDir) {
        const int nq = q + dir[0], nr = r + dir[1];
        if (!c.inside(nq, nr)) continue;
        const int u = c.index(nq, nr);
        if (seen[static_cast<std::size_t>(u)] || (c.white[static_cast<std::size_t>(u)] != 0) != white) continue;
        seen[static_cast<std::size_t>(u)] = 1;
        stack.push_back(u);
      }
    }
    std::sort(k.sites.begin(), k.sites.end());
    k.touches_frame = k.q_lo == 0 || k.r_lo == 0 || k.q_hi == L - 1 || k.r_hi == L - 1;
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<SimpleLoop> interface_loops(const PercConfig& c) {
  const int L = c.L;
  std::vector<std::uint8_t> used(static_cast<std::size_t>(L) * L * 6, 0);
  auto in = [&](int q, int r) { return c.is_white(q, r); };
  auto mark = [&](int q, int r, int d) { used[static_cast<std::size_t>(c.index(q, r)) * 6 + static_cast<std::size_t>(d)] = 1; };
  std::vector<SimpleLoop> out;
  for (int r = 0; r < L; ++r)
    for (int q = 0; q < L; ++q) {
      if (!in(q, r)) continue;
      for (int d = 0; d < 6; ++d) {
        if (used[static_cast<std::size_t>(c.index(q, r)) * 6 + static_cast<std::size_t>(d)]) continue;
        if (in(q + kHexDir[d][0], r + kHexDir[d][1])) continue;
        out.push_back(trace(q, r, d, in, mark));
      }
    }
  return out;
}

SimpleLoop outer_interface(const Cluster& k, const PercConfig& c) {
  require(!k.sites.empty(), ErrorCode::InvalidParameter, "empty cluster");
  std::vector<std::uint8_t> mine(c.white.size(), 0);
  for (int s : k.sites) mine[static_cast<std::size_t>(s)] = 1;
  auto in = [&](int q, int r) { return c.inside(q, r) && mine[static_cast<std::size_t>(c.index(q, r))]; };
  const int s = k.sites.front();  // lowest row, leftmost
  return trace(s % c.L, s / c.L, 3, in, [](int, int, int) {});
}

PerimeterLoop outer_perimeter(const Cluster& k, const PercConfig& c, std::size_t id) {
  require(!k.sites.empty(), ErrorCode::InvalidParameter, "empty cluster");
  require(!k.touches_frame, ErrorCode::TouchesFrame, "cluster touches the frame");
  const int L = c.L;
  const int q0 = std::max(0, k.q_lo - 2), q1 = std::min(L - 1, k.q_hi + 2);
  const int r0 = std::max(0, k.r_lo - 2), r1 = std::min(L - 1, k.r_hi + 2);
  const int wq = q1 - q0 + 1, wr = r1 - r0 + 1;
  const int n = wq * wr;
  const int inf = n;
  auto local = [&](int q, int r) { return (r - r0) * wq + (q - q0); };
  auto in_window = [&](int q, int r) { return q >= q0 && q <= q1 && r >= r0 && r <= r1; };
  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(n), 0);
  for (int s : k.sites) blocked[static_cast<std::size_t>(local(s % L, s / L))] = 1;
  auto on_edge = [&](int v) {
    const int q = v % wq, r = v / wq;
    return q == 0 || r == 0 || q == wq - 1 || r == wr - 1;
  };

  // neighbours of node v (window sites not in the cluster, plus infinity)
  std::vector<int> nb_buf;
  auto neighbours = [&](int v, std::vector<int>& out) {
    out.clear();
    if (v == inf) {
      for (int u = 0; u < n; ++u)
        if (!blocked[static_cast<std::size_t>(u)] && on_edge(u)) out.push_back(u);
      return;
    }
    const int q = v % wq + q0, r = v / wq + r0;
    for (const auto& dir : kHexDir) {
      const int nq = q + dir[0], nr = r + dir[1];
      if (!in_window(nq, nr)) continue;
      const int u = local(nq, nr);
      if (!blocked[static_cast<std::size_t>(u)]) out.push_back(u);
    }
    if (on_edge(v)) out.push_back(inf);
  };

  // iterative DFS from infinity for discovery times and low points
  std::vector<int> disc(static_cast<std::size_t>(n) + 1, -1), low(static_cast<std::size_t>(n) + 1, 0),
      parent(static_cast<std::size_t>(n) + 1, -1);
  std::vector<int> order;
  struct Frame {
    int v;
    std::vector<int> nbs;
    std::size_t next;
  };
  std::vector<Frame> stack;
  int timer = 0;
  disc[static_cast<std::size_t>(inf)] = low[static_cast<std::size_t>(inf)] = timer++;
  order.push_back(inf);
  stack.push_back({inf, {}, 0});
  neighbours(inf, stack.back().nbs);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.nbs.size()) {
      const int u = f.nbs[f.next++];
      const auto us = static_cast<std::size_t>(u);
      if (disc[us] < 0) {
        parent[us] = f.v;
        disc[us] = low[us] = timer++;
        order.push_back(u);
        Frame g{u, {}, 0};
        neighbours(u, g.nbs);
        stack.push_back(std::move(g));
      } else if (u != parent[static_cast<std::size_t>(f.v)]) {
        low[static_cast<std::size_t>(f.v)] = std::min(low[static_cast<std::size_t>(f.v)], disc[us]);
      }
    } else {
      const int v = f.v;
      stack.pop_back();
      if (!stack.empty()) {
        const auto p = static_cast<std::size_t>(stack.back().v);
        low[p] = std::min(low[p], low[static_cast<std::size_t>(v)]);
      }
    }
  }

  // a vertex shares a block with infinity iff its tree edge does
  std::vector<std::uint8_t> core(static_cast<std::size_t>(n) + 1, 0);
  core[static_cast<std::size_t>(inf)] = 1;
  for (int v : order) {
    if (v == inf) continue;
    const int p = parent[static_cast<std::size_t>(v)];
    core[static_cast<std::size_t>(v)] =
        p == inf || (low[static_cast<std::size_t>(v)] < disc[static_cast<std::size_t>(p)] && core[static_cast<std::size_t>(p)]);
  }

  auto filled = [&](int q, int r) { return in_window(q, r) && !core[static_cast<std::size_t>(local(q, r))]; };
  PerimeterLoop out;
  out.cluster = id;
  for (int v = 0; v < n; ++v) out.filled_sites += !core[static_cast<std::size_t>(v)];
  int q = k.sites.front() % L;
  const int r = k.sites.front() / L;
  while (filled(q - 1, r)) --q;
  out.loop = trace(q, r, 3, filled, [](int, int, int) {});
  return out;
}

std::vector<PerimeterLoop> perimeters_in_window(const PercConfig& c, double d_lo, double d_hi) {
  std::vector<PerimeterLoop> out;
  const auto ks = clusters(c, true);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const Cluster& k = ks[i];
    if (k.touches_frame) continue;
    const Extent e = site_extent(k, c.L);
    const double w = e.x_hi - e.x_lo, h = e.y_hi - e.y_lo;
    if (std::max(w, h) > d_hi || std::hypot(w + 2, h + 2) < d_lo) continue;
    PerimeterLoop p = outer_perimeter(k, c, i);
    const double d = diameter(p.loop);
    if (d >= d_lo && d <= d_hi) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Shape> perimeter_shape_sample(int L, double d_lo, double d_hi, std::size_t n_configs, std::uint64_t seed,
                                          int jobs) {
  require(d_lo > 0 && d_hi > d_lo && d_hi <= L / 4.0, ErrorCode::InvalidWindow, "diameter window must fit in L/4");
  std::vector<std::vector<Shape>> per(n_configs);
  parallel_for(n_configs, jobs, [&](std::size_t i) {
    const PercConfig c = sample_config(L, 0.5, seed, i);
    for (const auto& p : perimeters_in_window(c, d_lo, d_hi))
      per[i].push_back(normalize_shape(p.loop, NormalizeMode::TranslateAndScale, Provenance::PercolationPerimeter));
  });
  std::vector<Shape> out;
  for (auto& v : per)
    for (auto& s : v) out.push_back(std::move(s));
  return out;
}

Estimate pi_mass_estimate(const LoopEvent& e, int L, std::size_t n_configs, std::uint64_t seed, int n_translations,
                          int jobs) {
  require(n_configs > 0, ErrorCode::EmptyBatch, "n_configs must be positive");
  require(n_translations > 0, ErrorCode::InvalidParameter, "n_translations must be positive");
  const Box s = support_box(e);
  require(s.bounded(), ErrorCode::InvalidWindow, "event must have a bounded support");
  if (s.empty()) return mean_ci(std::vector<double>(n_configs, 0.0));
  const double diag = (s.hi - s.lo).norm();
  // axial coordinates of a point
  auto axial = [](const Point& p) { return Point(p.x() - p.y() / kSqrt3, 2 * p.y() / kSqrt3); };
  const double margin = 2;
  auto safe = [&](const Point& z) {
    for (const Point& c : {Point(s.lo.x(), s.lo.y()), Point(s.hi.x(), s.lo.y()), Point(s.lo.x(), s.hi.y()), Point(s.hi.x(), s.hi.y())}) {
      const Point a = axial(c + z);
      if (a.minCoeff() < margin || a.maxCoeff() > L - 1 - margin) return false;
    }
    return true;
  };
  // bounding rectangle of the rhombus
  const Point lo(0, 0), hi(1.5 * (L - 1), 0.5 * kSqrt3 * (L - 1));
  std::vector<double> counts(n_configs);
  parallel_for(n_configs, jobs, [&](std::size_t i) {
    const PercConfig c = sample_config(L, 0.5, seed, i);
    Engine eng = make_engine(stream_seed(seed, 0x9e37), i);
    std::vector<Point> zs;
    for (int t = 0, tries = 0; t < n_translations; ++tries) {
      require(tries < 1000 * n_translations, ErrorCode::InvalidWindow, "event does not fit in the box");
      const Point z = lo + Point(uniform01(eng) * (hi.x() - lo.x()), uniform01(eng) * (hi.y() - lo.y())) - s.lo;
      if (!safe(z)) continue;
      zs.push_back(z);
      ++t;
    }
    const auto loops = perimeters_in_window(c, 0, diag);
    std::vector<Box> boxes;
    for (const auto& p : loops) {
      const auto& v = p.loop.vertices();
      boxes.push_back(Box{v.rowwise().minCoeff(), v.rowwise().maxCoeff()});
    }
    double hits = 0;
    for (const Point& z : zs) {
      const LoopEvent ez = pullback(e, 1.0, -z);
      for (std::size_t j = 0; j < loops.size(); ++j) {
        if ((boxes[j].lo - z).x() < s.lo.x() || (boxes[j].lo - z).y() < s.lo.y() || (boxes[j].hi - z).x() > s.hi.x() ||
            (boxes[j].hi - z).y() > s.hi.y())
          continue;
        hits += evaluate_event(ez, PreparedLoop(loops[j].loop.vertices()));
      }
    }
    counts[i] = hits / n_translations;
  });
  return mean_ci(counts);
}

}  // namespace loops
