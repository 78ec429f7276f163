#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "loops/hull.hpp"
#include "test_util.hpp"

using namespace loops;
using test::grid_from_ascii;

TEST(Rasterize, UnitSquareRing) {
  const RasterGrid g = rasterize(test::unit_square().vertices(), 0.5);
  EXPECT_EQ(g.marked_count(), 8);
  const auto d = decompose(g);
  EXPECT_EQ(d.bounded_count(), 1);
  // ring cells are 4-connected: each has two marked 4-neighbours
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.marked[g.index(i, j)]) continue;
      int nb = 0;
      if (i > 0) nb += g.marked[g.index(i - 1, j)];
      if (i + 1 < g.nx) nb += g.marked[g.index(i + 1, j)];
      if (j > 0) nb += g.marked[g.index(i, j - 1)];
      if (j + 1 < g.ny) nb += g.marked[g.index(i, j + 1)];
      EXPECT_EQ(nb, 2);
    }
}

TEST(Rasterize, HorizontalSegment) {
  const double h = 0.1, L = 2.345;
  Points seg(2, 2);
  seg << 0.013, 0.013 + L, 0.02, 0.02;
  const RasterGrid g = rasterize(seg, h);
  const double expect = std::ceil(L / h) + 1;
  EXPECT_LE(std::abs(static_cast<double>(g.marked_count()) - expect), 1.0);
}

TEST(Rasterize, InsideInflatedBox) {
  auto eng = make_engine(4);
  const Points p = test::random_closed_walk(eng, 500, 0.05);
  const RasterGrid g = rasterize(p, 0.01);
  const Point lo = p.rowwise().minCoeff(), hi = p.rowwise().maxCoeff();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.marked[g.index(i, j)]) continue;
      const Point c = g.center(i, j);
      EXPECT_GE(c.x(), lo.x() - g.h);
      EXPECT_LE(c.x(), hi.x() + g.h);
      EXPECT_GE(c.y(), lo.y() - g.h);
      EXPECT_LE(c.y(), hi.y() + g.h);
      EXPECT_TRUE(i > 0 && j > 0 && i < g.nx - 1 && j < g.ny - 1);
    }
}

TEST(Rasterize, InvalidResolution) {
  EXPECT_THROW(rasterize(test::unit_square().vertices(), 0), Error);
  EXPECT_THROW(rasterize(test::unit_square().vertices(), -1), Error);
}

TEST(Rasterize, SupercoverIsFourConnectedProperty) {
  auto eng = make_engine(12);
  const Points p = test::random_closed_walk(eng, 2000, 0.03);
  const auto d = decompose(rasterize(p, 0.01));
  // flood the marked cells with 4-connectivity from one of them
  const auto& g = d.grid;
  std::vector<std::uint8_t> seen(g.cells(), 0);
  std::vector<std::size_t> st;
  for (std::size_t c = 0; c < g.cells(); ++c)
    if (g.marked[c]) {
      st.push_back(c);
      seen[c] = 1;
      break;
    }
  std::int64_t reached = 0;
  while (!st.empty()) {
    const std::size_t c = st.back();
    st.pop_back();
    ++reached;
    const std::size_t nx = static_cast<std::size_t>(g.nx);
    for (std::size_t nb : {c - 1, c + 1, c - nx, c + nx})
      if (nb < g.cells() && g.marked[nb] && !seen[nb]) {
        seen[nb] = 1;
        st.push_back(nb);
      }
  }
  EXPECT_EQ(reached, g.marked_count());
}

TEST(Decompose, Fixtures) {
  EXPECT_EQ(decompose(grid_from_ascii({"####", "#..#", "#..#", "####"})).bounded_count(), 1);
  EXPECT_EQ(decompose(grid_from_ascii({"###.###", "#.#.#.#", "###.###"})).bounded_count(), 2);
  EXPECT_EQ(decompose(grid_from_ascii({"###", "###", "###"})).bounded_count(), 0);
}

TEST(OuterBoundary, SquareRing) {
  const auto d = decompose(grid_from_ascii({"####", "#..#", "#..#", "####"}));
  const SimpleLoop o = outer_boundary(d);
  EXPECT_EQ(o.size(), 16);
  EXPECT_DOUBLE_EQ(signed_area(o), 16.0);
  EXPECT_DOUBLE_EQ(diameter(o), 4 * std::sqrt(2.0));
  EXPECT_TRUE(is_simple(o));
}

TEST(OuterBoundary, FigureEightLobes) {
  const auto d = decompose(grid_from_ascii({"###....", "#.#....", "#####..", "..#.#..", "..###.."}));
  EXPECT_EQ(d.bounded_count(), 2);
  const SimpleLoop o = outer_boundary(d);
  EXPECT_TRUE(is_simple(o));
  EXPECT_DOUBLE_EQ(signed_area(o), filled_area(d));
}

TEST(OuterBoundary, SingleCell) {
  const auto d = decompose(grid_from_ascii({"#"}, 0.5));
  const SimpleLoop o = outer_boundary(d);
  EXPECT_EQ(o.size(), 4);
  EXPECT_DOUBLE_EQ(signed_area(o), 0.25);
  EXPECT_DOUBLE_EQ(filled_area(d), 0.25);
}

TEST(OuterBoundary, EmptyGridThrows) {
  const auto d = decompose(grid_from_ascii({"..", ".."}));
  try {
    outer_boundary(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGrid);
  }
}

TEST(InnerBoundaries, RingAndBlob) {
  const auto ring = inner_boundaries(decompose(grid_from_ascii({"####", "#..#", "#..#", "####"})));
  ASSERT_EQ(ring.size(), 1u);
  EXPECT_DOUBLE_EQ(signed_area(ring[0]), 4.0);
  EXPECT_TRUE(inner_boundaries(decompose(grid_from_ascii({"###", "###"}))).empty());
}

TEST(InnerBoundaries, RingWithinRing) {
  const auto d = decompose(grid_from_ascii({
      "#########",
      "#.......#",
      "#.#####.#",
      "#.#...#.#",
      "#.#####.#",
      "#.......#",
      "#########",
  }));
  ASSERT_EQ(d.bounded_count(), 2);
  const auto loops = inner_boundaries(d);
  // label 1 is the gap (found first in scan order), label 2 the island's hole
  const Point gap_cell = d.grid.center(2, 2);
  const Point hole_cell = d.grid.center(5, 4);
  EXPECT_EQ(label_at(d, gap_cell), 1);
  EXPECT_EQ(label_at(d, hole_cell), 2);
  EXPECT_EQ(winding_number(loops[0], hole_cell), 1);
  EXPECT_EQ(winding_number(loops[1], hole_cell), 1);
  EXPECT_EQ(winding_number(loops[1], gap_cell), 0);
  EXPECT_EQ(d.cell_count[1], 7 * 5 - 5 * 3);
  EXPECT_EQ(d.cell_count[2], 3);
  for (const auto& l : loops) EXPECT_TRUE(is_simple(l));
}

TEST(FilledArea, Examples) {
  const auto d = decompose(grid_from_ascii({"####", "#..#", "#..#", "####"}));
  EXPECT_EQ(d.marked, 12);
  EXPECT_DOUBLE_EQ(filled_area(d), 16.0);
  EXPECT_EQ(filled_cell_count(d.grid), 16);
}

TEST(FilledArea, RasterIdentityProperty) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto eng = make_engine(77, seed);
    const Points p = test::random_closed_walk(eng, 3000, 0.02);
    const double h = 1.0 / 128;
    const auto d = decompose(rasterize(p, h));
    const SimpleLoop o = outer_boundary(d);
    double inner = 0;
    for (double a : bounded_areas(d)) inner += a;
    EXPECT_EQ(filled_area(d), marked_area(d) + inner);
    EXPECT_EQ(filled_area(d), signed_area(o));
    EXPECT_EQ(static_cast<double>(filled_cell_count(d.grid)) * h * h, filled_area(d));
    for (const auto& l : inner_boundaries(d)) EXPECT_GT(signed_area(l), 0);
    if (seed < 2) {
      EXPECT_TRUE(is_simple(o));
      for (const auto& l : inner_boundaries(d)) EXPECT_TRUE(is_simple(l));
    }
    // winding 1 around every marked cell
    const auto& g = d.grid;
    for (int j = 0; j < g.ny; j += 3)
      for (int i = 0; i < g.nx; i += 3)
        if (g.marked[g.index(i, j)]) EXPECT_EQ(winding_number(o, g.center(i, j)), 1);
  }
}

TEST(FilledArea, TranslationEquivarianceProperty) {
  auto eng = make_engine(31);
  const Points p = test::random_closed_walk(eng, 1500, 0.02);
  const double h = 1.0 / 64;
  const auto a = decompose(rasterize(p, h));
  const Points q = p.colwise() + Point(37 * h, -11 * h);
  const auto b = decompose(rasterize(q, h));
  EXPECT_EQ(filled_area(a), filled_area(b));
  EXPECT_EQ(bounded_areas(a), bounded_areas(b));
  EXPECT_EQ(b.grid.i0 - a.grid.i0, 37);
}

TEST(AreaSpectrum, Examples) {
  const auto ring = decompose(grid_from_ascii({"####", "#..#", "#..#", "####"}));
  EXPECT_EQ(area_spectrum(ring, {1.0})[0], 1);
  const auto blob = decompose(grid_from_ascii({"###", "###"}));
  for (auto n : area_spectrum(blob, {0.0, 1.0, 5.0})) EXPECT_EQ(n, 0);
  auto eng = make_engine(3);
  const auto d = decompose(rasterize(test::random_closed_walk(eng, 2000, 0.02), 1.0 / 128));
  const std::vector<double> us{1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  const auto n = area_spectrum(d, us);
  for (std::size_t k = 1; k < n.size(); ++k) EXPECT_LE(n[k], n[k - 1]);
}

TEST(BoxCount, Segment) {
  Points pts(2, 100000);
  for (Eigen::Index k = 0; k < pts.cols(); ++k) pts.col(k) = Point(0.3 + 1e-5 * k, 0.1 + 0.5e-5 * k);
  EXPECT_NEAR(boxcount_dimension(pts, 1e-3, 1e-1, 8).slope, 1.0, 0.05);
}

TEST(BoxCount, FilledSquare) {
  Points pts(2, 500 * 500);
  for (int i = 0; i < 500; ++i)
    for (int j = 0; j < 500; ++j) pts.col(i * 500 + j) = Point(i / 500.0, j / 500.0);
  EXPECT_NEAR(boxcount_dimension(pts, 1e-2, 1e-1, 8).slope, 2.0, 0.05);
}

TEST(BoxCount, Circle) {
  EXPECT_NEAR(boxcount_dimension(circle_loop(Point::Zero(), 1, 100000).vertices(), 2e-3, 2e-1, 8).slope, 1.0, 0.05);
}

TEST(BoxCount, TooFewPoints) {
  try {
    boxcount_dimension(circle_loop(Point::Zero(), 1, 999).vertices(), 1e-2, 1e-1, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}

TEST(BoxCount, DefaultLadder) {
  const auto l = default_box_ladder(1.0, 4096.0);
  ASSERT_EQ(l.size(), 8u);
  EXPECT_DOUBLE_EQ(l.front(), 4.0);
  EXPECT_NEAR(l.back(), 512.0, 1e-9);
  const auto c = default_box_ladder(1.0, 128.0);
  EXPECT_NEAR(c.back(), 32.0, 1e-9);
  EXPECT_TRUE(default_box_ladder(1.0, 10.0).empty());
}

TEST(WindingField, MatchesDirectWindingProperty) {
  auto eng = make_engine(19);
  // offset so no cell center lies on the path
  const Points p = test::random_closed_walk(eng, 400, 0.05).colwise() + Point(0.0123, 0.0071);
  const RasterGrid g = rasterize(p, 1.0 / 32);
  const auto w = winding_field(p, g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) EXPECT_EQ(w[g.index(i, j)], winding_number_tol(p, g.center(i, j), 0.0));
}

TEST(DistanceTransform, MatchesBruteForce) {
  auto eng = make_engine(2);
  const int nx = 23, ny = 17;
  std::vector<std::uint8_t> f(nx * ny, 0);
  for (auto& c : f) c = uniform01(eng) < 0.05;
  f[5] = 1;
  const auto d = squared_distance_transform(f, nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double best = 1e300;
      for (int b = 0; b < ny; ++b)
        for (int a = 0; a < nx; ++a)
          if (f[b * nx + a]) best = std::min(best, double((a - i) * (a - i) + (b - j) * (b - j)));
      EXPECT_EQ(d[j * nx + i], best);
    }
}
