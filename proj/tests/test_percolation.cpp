#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <numbers>

#include "loops/error.hpp"
#include "loops/percolation.hpp"

namespace loops {
namespace {

PercConfig blank(int L) {
  PercConfig c;
  c.L = L;
  c.white.assign(static_cast<std::size_t>(L) * L, 0);
  return c;
}

void set_white(PercConfig& c, std::initializer_list<std::pair<int, int>> sites) {
  for (auto [q, r] : sites) c.white[static_cast<std::size_t>(c.index(q, r))] = 1;
}

// site whose hexagon contains the point
std::pair<int, int> site_at(const Point& p) {
  const double r = 2 * p.y() / std::sqrt(3.0);
  const double q = p.x() - r / 2;
  // cube rounding
  double x = q, z = r, y = -x - z;
  double rx = std::round(x), ry = std::round(y), rz = std::round(z);
  const double dx = std::abs(rx - x), dy = std::abs(ry - y), dz = std::abs(rz - z);
  if (dx > dy && dx > dz) rx = -ry - rz;
  else if (dz >= dy) rz = -rx - ry;
  return {static_cast<int>(rx), static_cast<int>(rz)};
}

TEST(PercConfig, ExtremeProbabilities) {
  const auto w = sample_config(16, 1.0, 1);
  EXPECT_EQ(std::count(w.white.begin(), w.white.end(), 1), 256);
  const auto b = sample_config(16, 0.0, 1);
  EXPECT_EQ(std::count(b.white.begin(), b.white.end(), 1), 0);
  EXPECT_THROW(sample_config(1, 0.5, 1), Error);
  EXPECT_THROW(sample_config(8, 1.5, 1), Error);
}

TEST(PercConfig, WhiteDensity) {
  const int L = 512;
  const auto c = sample_config(L, 0.5, 3);
  const double f = static_cast<double>(std::count(c.white.begin(), c.white.end(), 1)) / (L * L);
  EXPECT_NEAR(f, 0.5, 4 * 0.5 / L);
}

TEST(PercConfig, Deterministic) {
  EXPECT_EQ(sample_config(32, 0.5, 9, 2).white, sample_config(32, 0.5, 9, 2).white);
  EXPECT_NE(sample_config(32, 0.5, 9, 2).white, sample_config(32, 0.5, 9, 3).white);
}

TEST(PercConfig, RowsFixture) {
  const auto c = config_from_rows({"#..", "...", ".#."});
  EXPECT_TRUE(c.is_white(0, 2));
  EXPECT_TRUE(c.is_white(1, 0));
  EXPECT_FALSE(c.is_white(1, 1));
}

TEST(Clusters, SingleSite) {
  auto c = blank(8);
  set_white(c, {{3, 3}});
  const auto ks = clusters(c, true);
  ASSERT_EQ(ks.size(), 1u);
  EXPECT_EQ(ks[0].sites.size(), 1u);
  EXPECT_FALSE(ks[0].touches_frame);
  EXPECT_EQ(clusters(c, false).size(), 1u);
}

TEST(Clusters, TriangularNeighbours) {
  for (const auto& d : kHexDir) {
    auto c = blank(8);
    set_white(c, {{3, 3}, {3 + d[0], 3 + d[1]}});
    const auto ks = clusters(c, true);
    ASSERT_EQ(ks.size(), 1u);
    EXPECT_EQ(ks[0].sites.size(), 2u);
  }
  // (1,1) is not a neighbour
  auto c = blank(8);
  set_white(c, {{3, 3}, {4, 4}});
  EXPECT_EQ(clusters(c, true).size(), 2u);
}

TEST(Clusters, ZigzagFixture) {
  // antidiagonal chain: consecutive sites differ by (-1, +1)
  const std::vector<std::pair<int, int>> z = {{5, 1}, {4, 2}, {3, 3}, {2, 4}, {1, 5}};
  // hand adjacency table: only consecutive pairs are neighbours
  const bool adj[5][5] = {{0, 1, 0, 0, 0}, {1, 0, 1, 0, 0}, {0, 1, 0, 1, 0}, {0, 0, 1, 0, 1}, {0, 0, 0, 1, 0}};
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      const int dq = z[b].first - z[a].first, dr = z[b].second - z[a].second;
      bool nb = false;
      for (const auto& d : kHexDir) nb = nb || (d[0] == dq && d[1] == dr);
      EXPECT_EQ(nb, adj[a][b]);
    }
  auto c = blank(8);
  for (auto [q, r] : z) c.white[static_cast<std::size_t>(c.index(q, r))] = 1;
  const auto ks = clusters(c, true);
  ASSERT_EQ(ks.size(), 1u);
  EXPECT_EQ(ks[0].sites.size(), 5u);
}

TEST(Clusters, PartitionProperty) {
  const auto c = sample_config(40, 0.5, 4);
  std::vector<int> owner(c.white.size(), 0);
  for (bool col : {true, false})
    for (const auto& k : clusters(c, col))
      for (int s : k.sites) {
        ++owner[static_cast<std::size_t>(s)];
        EXPECT_EQ(c.white[static_cast<std::size_t>(s)] != 0, col);
      }
  for (int o : owner) EXPECT_EQ(o, 1);
}

TEST(Interface, SingleHexagon) {
  auto c = blank(6);
  set_white(c, {{2, 2}});
  const auto ls = interface_loops(c);
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_EQ(hex_edge_count(ls[0]), 6);
  // regular hexagon of side 1/sqrt(3)
  EXPECT_NEAR(perimeter_length(ls[0]), 6 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(signed_area(ls[0]), std::sqrt(3.0) / 2, 1e-12);
}

TEST(Interface, TwoFusedHexagons) {
  auto c = blank(6);
  set_white(c, {{2, 2}, {3, 2}});
  const auto ls = interface_loops(c);
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_EQ(hex_edge_count(ls[0]), 10);
}

TEST(Interface, AllBlackIsEmpty) { EXPECT_TRUE(interface_loops(blank(10)).empty()); }

TEST(Interface, EdgesSeparateColoursProperty) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = sample_config(24, 0.5, seed);
    std::size_t total = 0;
    for (const auto& l : interface_loops(c)) {
      EXPECT_NO_THROW(SimpleLoop::checked(l));
      const auto& v = l.vertices();
      for (Eigen::Index k = 0; k < v.cols(); ++k) {
        const Point a = v.col(k), b = v.col((k + 1) % v.cols());
        const Point t = (b - a).normalized();
        const Point n(-t.y(), t.x());
        const Point m = 0.5 * (a + b);
        const auto [lq, lr] = site_at(m + 0.5 * n);
        const auto [rq, rr] = site_at(m - 0.5 * n);
        EXPECT_TRUE(c.is_white(lq, lr));
        EXPECT_FALSE(c.is_white(rq, rr));
      }
      total += static_cast<std::size_t>(v.cols());
    }
    // every white/non-white adjacency used exactly once
    std::size_t pairs = 0;
    for (int r = 0; r < c.L; ++r)
      for (int q = 0; q < c.L; ++q)
        if (c.is_white(q, r))
          for (const auto& d : kHexDir) pairs += !c.is_white(q + d[0], r + d[1]);
    EXPECT_EQ(total, pairs);
  }
}

// ---- perimeters ----

TEST(Perimeter, ConvexClusterEqualsInterface) {
  auto c = blank(10);
  set_white(c, {{4, 4}, {5, 4}, {4, 5}, {5, 5}});
  const auto ks = clusters(c, true);
  ASSERT_EQ(ks.size(), 1u);
  const auto p = outer_perimeter(ks[0], c);
  const auto o = outer_interface(ks[0], c);
  EXPECT_EQ(hex_edge_count(p.loop), hex_edge_count(o));
  EXPECT_NEAR(signed_area(p.loop), signed_area(o), 1e-12);
  EXPECT_EQ(p.filled_sites, 4);
  auto one = blank(5);
  set_white(one, {{2, 2}});
  EXPECT_EQ(hex_edge_count(outer_perimeter(clusters(one, true)[0], one).loop), 6);
}

TEST(Perimeter, SingleSiteMouthPocketIsFilled) {
  // five of the six neighbours of (5,5); the mouth (6,5) is the only way out
  auto c = blank(12);
  set_white(c, {{5, 6}, {4, 6}, {4, 5}, {5, 4}, {6, 4}});
  const auto ks = clusters(c, true);
  ASSERT_EQ(ks.size(), 1u);
  const auto p = outer_perimeter(ks[0], c);
  const auto o = outer_interface(ks[0], c);
  // 5 sites with 4 contacts: 30 - 8 edges; with the pocket: 36 - 18
  EXPECT_EQ(hex_edge_count(o), 22);
  EXPECT_EQ(hex_edge_count(p.loop), 18);
  EXPECT_EQ(p.filled_sites, 6);
  EXPECT_NE(winding_number(p.loop, PercConfig::position(5, 5)), 0);
  EXPECT_EQ(winding_number(p.loop, PercConfig::position(6, 5)), 0);
}

TEST(Perimeter, WideMouthPocketStaysOpen) {
  auto c = blank(12);
  set_white(c, {{5, 6}, {4, 6}, {4, 5}, {5, 4}});
  const auto ks = clusters(c, true);
  ASSERT_EQ(ks.size(), 1u);
  const auto p = outer_perimeter(ks[0], c);
  EXPECT_EQ(hex_edge_count(p.loop), hex_edge_count(outer_interface(ks[0], c)));
  EXPECT_EQ(hex_edge_count(p.loop), 18);
  EXPECT_EQ(winding_number(p.loop, PercConfig::position(5, 5)), 0);
}

TEST(Perimeter, TouchesFrame) {
  auto c = blank(6);
  set_white(c, {{0, 2}});
  try {
    outer_perimeter(clusters(c, true)[0], c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TouchesFrame);
  }
}

// Independent oracle: x is kept iff two vertex-disjoint paths lead from x
// to the frame avoiding the cluster (unit vertex capacities, max flow >= 2).
bool two_disjoint_paths(const PercConfig& c, const std::vector<std::uint8_t>& blocked, int x) {
  const int n = c.L * c.L;
  // node 2v = in, 2v+1 = out, 2n = sink
  const int sink = 2 * n;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(2 * n + 1));
  struct E {
    int to, cap;
  };
  std::vector<E> edges;
  auto add = [&](int a, int b, int cap) {
    adj[static_cast<std::size_t>(a)].push_back(static_cast<int>(edges.size()));
    edges.push_back({b, cap});
    adj[static_cast<std::size_t>(b)].push_back(static_cast<int>(edges.size()));
    edges.push_back({a, 0});
  };
  for (int v = 0; v < n; ++v) {
    if (blocked[static_cast<std::size_t>(v)]) continue;
    add(2 * v, 2 * v + 1, v == x ? 2 : 1);
    const int q = v % c.L, r = v / c.L;
    for (const auto& d : kHexDir) {
      const int nq = q + d[0], nr = r + d[1];
      if (!c.inside(nq, nr)) continue;
      const int u = c.index(nq, nr);
      if (!blocked[static_cast<std::size_t>(u)]) add(2 * v + 1, 2 * u, 1);
    }
    if (q == 0 || r == 0 || q == c.L - 1 || r == c.L - 1) add(2 * v + 1, sink, 1);
  }
  int flow = 0;
  while (flow < 2) {
    std::vector<int> prev(static_cast<std::size_t>(2 * n + 1), -1);
    std::deque<int> queue{2 * x};
    prev[static_cast<std::size_t>(2 * x)] = -2;
    while (!queue.empty() && prev[static_cast<std::size_t>(sink)] < 0) {
      const int a = queue.front();
      queue.pop_front();
      for (int e : adj[static_cast<std::size_t>(a)]) {
        const auto& ed = edges[static_cast<std::size_t>(e)];
        if (ed.cap > 0 && prev[static_cast<std::size_t>(ed.to)] == -1) {
          prev[static_cast<std::size_t>(ed.to)] = e;
          queue.push_back(ed.to);
        }
      }
    }
    if (prev[static_cast<std::size_t>(sink)] < 0) break;
    for (int v = sink; v != 2 * x;) {
      const int e = prev[static_cast<std::size_t>(v)];
      edges[static_cast<std::size_t>(e)].cap -= 1;
      edges[static_cast<std::size_t>(e ^ 1)].cap += 1;
      v = edges[static_cast<std::size_t>(e ^ 1)].to;
    }
    ++flow;
  }
  return flow >= 2;
}

TEST(Perimeter, FjordFillingMatchesFlowOracleProperty) {
  int checked = 0, with_fjords = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto c = sample_config(18, 0.5, seed);
    for (const auto& k : clusters(c, true)) {
      if (k.touches_frame || k.sites.size() < 3) continue;
      const auto p = outer_perimeter(k, c);
      std::vector<std::uint8_t> blocked(c.white.size(), 0);
      for (int s : k.sites) blocked[static_cast<std::size_t>(s)] = 1;
      int filled = 0;
      for (int v = 0; v < c.L * c.L; ++v) {
        const Point at = PercConfig::position(v % c.L, v / c.L);
        const bool inside = winding_number(p.loop, at) != 0;
        filled += inside;
        if (blocked[static_cast<std::size_t>(v)]) {
          EXPECT_EQ(winding_number(p.loop, at), 1);
          continue;
        }
        EXPECT_EQ(inside, !two_disjoint_paths(c, blocked, v)) << "seed " << seed << " site " << v;
      }
      EXPECT_EQ(filled, p.filled_sites);
      with_fjords += hex_edge_count(p.loop) < hex_edge_count(outer_interface(k, c));
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
  EXPECT_GT(with_fjords, 0);
}

TEST(Perimeter, NeverLongerThanInterfaceProperty) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto c = sample_config(64, 0.5, seed);
    for (const auto& k : clusters(c, true)) {
      if (k.touches_frame) continue;
      const auto p = outer_perimeter(k, c);
      const auto o = outer_interface(k, c);
      EXPECT_LE(hex_edge_count(p.loop), hex_edge_count(o));
      EXPECT_GT(signed_area(p.loop), 0);
      // equal exactly when nothing beyond the interface interior was filled
      int interior = 0;
      for (int r = k.r_lo; r <= k.r_hi; ++r)
        for (int q = k.q_lo; q <= k.q_hi; ++q) interior += winding_number(o, PercConfig::position(q, r)) != 0;
      EXPECT_EQ(interior == p.filled_sites, hex_edge_count(p.loop) == hex_edge_count(o));
    }
  }
}

// ---- samples and pi mass ----

TEST(PerimeterSample, EmptyWindowAndInvariants) {
  EXPECT_TRUE(perimeter_shape_sample(64, 0.1, 0.5, 2, 1).empty());
  const auto s = perimeter_shape_sample(64, 4, 16, 2, 1);
  ASSERT_FALSE(s.empty());
  for (const auto& sh : s) {
    EXPECT_NEAR(max_radius(sh.loop), 1.0, 1e-12);
    EXPECT_NEAR(area_centroid(sh.loop.vertices()).norm(), 0.0, 1e-9);
    EXPECT_EQ(sh.provenance, Provenance::PercolationPerimeter);
  }
  EXPECT_THROW(perimeter_shape_sample(64, 4, 20, 1, 1), Error);
}

TEST(PerimeterSample, CountScalesWithArea) {
  const double a = static_cast<double>(perimeter_shape_sample(128, 4, 8, 16, 2).size()) / 16;
  const double b = static_cast<double>(perimeter_shape_sample(256, 4, 8, 4, 3).size()) / 4;
  // frame effects shave a margin of order the window size
  EXPECT_NEAR(b / a, 4.0, 0.4);
}

TEST(PiMass, EmptyEventIsZero) {
  const LoopEvent e = LoopEvent(ContainedIn{PlanarDomain::disc(Point::Zero(), 5)}) && Never{};
  EXPECT_EQ(pi_mass_estimate(e, 48, 4, 1).mean, 0.0);
  EXPECT_THROW(pi_mass_estimate(Surrounds{Point::Zero()}, 48, 4, 1), Error);
}

TEST(PiMass, HexRotationInvariance) {
  const Loop rect = rectangle_loop(0, 0, 10, 5);
  const double a = std::numbers::pi / 3;
  Eigen::Matrix2d rot;
  rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const Loop turned(rot * rect.vertices());
  const LoopEvent e = LoopEvent(ContainedIn{PlanarDomain::polygon(rect)}) && Surrounds{Point(3, 2.5)};
  const LoopEvent f = LoopEvent(ContainedIn{PlanarDomain::polygon(turned)}) && Surrounds{rot * Point(3, 2.5)};
  const auto x = pi_mass_estimate(e, 64, 30, 5, 64);
  const auto y = pi_mass_estimate(f, 64, 30, 6, 64);
  EXPECT_GT(x.mean, 0.0);
  EXPECT_NEAR(x.mean, y.mean, 3 * std::hypot(x.se(), y.se()));
}

TEST(PiMass, DeterministicAcrossJobs) {
  const LoopEvent e = LoopEvent(ContainedIn{PlanarDomain::disc(Point::Zero(), 6)}) && Surrounds{Point::Zero()};
  EXPECT_EQ(pi_mass_estimate(e, 48, 6, 2, 16, 1).mean, pi_mass_estimate(e, 48, 6, 2, 16, 3).mean);
}

}  // namespace
}  // namespace loops
