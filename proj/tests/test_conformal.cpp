#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "loops/conformal.hpp"
#include "loops/error.hpp"
#include "oracles.hpp"

namespace loops {
namespace {

using test::oracle_log_deriv;
using test::oracle_map;

TEST(SlitOracle, AgreesWithClosedFormCapacity) {
  for (double r : {0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) EXPECT_NEAR(oracle_log_deriv(r), slit_capacity(r), 1e-7) << r;
  EXPECT_NEAR(slit_capacity(0.5), std::log(9.0 / 8), 1e-15);
}

TEST(SlitOracle, OracleMapsIntoDisc) {
  for (double a = 0.1; a < 6; a += 0.7)
    for (double rad : {0.2, 0.6, 0.95}) EXPECT_LT(std::abs(oracle_map(0.4, std::polar(rad, a))), 1.0);
}

TEST(SlitMap, MatchesOracleUpToRotation) {
  for (double r : {0.2, 0.5, 0.8})
    for (double a = 0.3; a < 6; a += 0.9)
      for (double rad : {0.1, 0.5, 0.9}) {
        const Complex z = std::polar(rad, a);
        EXPECT_NEAR(std::abs(slit_map(r, 0.0, z)), std::abs(oracle_map(r, z)), 1e-10);
      }
}

TEST(SlitMap, InverseRoundTrip) {
  for (double th : {0.0, 1.0, 2.5})
    for (double a = 0.1; a < 6; a += 0.8) {
      const Complex w = std::polar(0.7, a);
      const Complex z = slit_map_inverse(0.4, th, w);
      EXPECT_LT(std::abs(z), 1.0);
      EXPECT_NEAR(std::abs(slit_map(0.4, th, z) - w), 0.0, 1e-10);
    }
}

TEST(SlitMap, NormalizedAtOrigin) {
  const double h = 1e-6;
  const Complex d = (slit_map(0.3, 1.2, h) - slit_map(0.3, 1.2, -h)) / (2 * h);
  EXPECT_NEAR(d.real(), std::exp(slit_capacity(0.3)), 1e-6);
  EXPECT_NEAR(d.imag(), 0.0, 1e-6);
  EXPECT_EQ(slit_map(0.3, 1.2, 0.0), Complex(0.0));
}

TEST(SlitRadius, Examples) {
  EXPECT_DOUBLE_EQ(slit_radius_for_capacity(0.0), 1.0);
  EXPECT_NEAR(slit_radius_for_capacity(std::log(9.0 / 8)), 0.5, 1e-14);
  EXPECT_THROW(slit_radius_for_capacity(-0.1), Error);
}

TEST(SlitRadius, InverseAndDecreasingProperty) {
  double prev = 1.0;
  for (double t = 0.05; t < 8; t += 0.05) {
    const double r = slit_radius_for_capacity(t);
    EXPECT_LT(r, prev);
    EXPECT_NEAR(slit_capacity(r), t, 1e-10);
    prev = r;
  }
}

// ---- walk on spheres ----

TEST(WalkExit, DiscIsRotationallySymmetric) {
  const auto d = PlanarDomain::disc(Point::Zero(), 1.0);
  const double eps = 1e-4;
  const int n = 20000;
  Point sum = Point::Zero();
  for (int i = 0; i < n; ++i) {
    const Point e = walk_exit(d, Point::Zero(), eps, 3, static_cast<std::uint64_t>(i));
    EXPECT_NEAR(e.norm(), 1.0, eps);
    sum += e;
  }
  // each coordinate has variance 1/2
  EXPECT_LT(std::abs(sum.x() / n), 3 * std::sqrt(0.5 / n));
  EXPECT_LT(std::abs(sum.y() / n), 3 * std::sqrt(0.5 / n));
}

TEST(WalkExit, SquareOctantsAreBalanced) {
  const auto d = PlanarDomain::polygon(rectangle_loop(-1, -1, 1, 1));
  const int n = 16000;
  std::vector<int> counts(8, 0);
  for (int i = 0; i < n; ++i) {
    const Point e = walk_exit(d, Point::Zero(), 1e-4, 4, static_cast<std::uint64_t>(i));
    double a = std::atan2(e.y(), e.x());
    if (a < 0) a += 2 * std::numbers::pi;
    ++counts[std::min(7, static_cast<int>(a / (std::numbers::pi / 4)))];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += std::pow(c - n / 8.0, 2) / (n / 8.0);
  const boost::math::chi_squared dist(7);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01);
}

TEST(WalkExit, InvalidStart) {
  const auto d = PlanarDomain::disc(Point::Zero(), 1.0);
  try {
    walk_exit(d, Point(2, 0), 1e-4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidStart);
  }
  EXPECT_THROW(walk_exit(d, Point(1 - 1e-6, 0), 1e-4, 1), Error);
}

TEST(LogDeriv, UnitDiscIsZero) {
  const auto e = log_deriv_at_zero(PlanarDomain::disc(Point::Zero(), 1.0), 2000, 0, 1);
  EXPECT_NEAR(e.mean, 0.0, 1e-12);
}

TEST(LogDeriv, SmallDiscIsLogInverseRadius) {
  const auto e = log_deriv_at_zero(PlanarDomain::disc(Point::Zero(), 1 / std::numbers::e), 1000, 0, 1);
  EXPECT_NEAR(e.mean, 1.0, 1e-12);
}

TEST(LogDeriv, SlitHalf) {
  auto d = PlanarDomain::disc(Point::Zero(), 1.0);
  d.add_slit(Point(0.5, 0), Point(1, 0));
  const auto e = log_deriv_at_zero(d, 200000, 1e-5, 2);
  EXPECT_NEAR(e.mean, std::log(9.0 / 8), 3 * e.se());
  EXPECT_GT(e.mean, -3 * e.se());
}

TEST(LogDeriv, ComposedSlitsAddCapacities) {
  const double r1 = 0.6, r2 = 0.5;
  const auto d = composed_slit_domain(r1, r2, 2.0);
  const auto e = log_deriv_at_zero(d, 40000, 1e-5, 3);
  const double target = slit_capacity(r1) + slit_capacity(r2);
  EXPECT_NEAR(e.mean, target, std::max(1.5 * e.half_width_95, 2e-3));
}

TEST(LogDeriv, ComposedSlitEndsOnCircle) {
  const auto d = composed_slit_domain(0.6, 0.5, 2.0, 50);
  const auto& s = d.slits();
  ASSERT_EQ(s.size(), 51u);
  EXPECT_NEAR(s.back().second.norm(), 1.0, 1e-15);
  const Complex tip = slit_map(0.6, 0.0, Complex(s[1].first.x(), s[1].first.y()));
  EXPECT_NEAR(std::abs(tip), 0.5, 1e-9);
  EXPECT_NEAR(std::arg(tip), 2.0, 1e-9);
}

TEST(LogDeriv, ComposedSlitEndpointKeepsHalfPlane) {
  // endpoint on the circle used to flip to its conjugate near theta = pi/2
  for (double th : {0.9, 1.5, 1.5707963267948966, 1.6, 2.5, -1.5707963267948966}) {
    const auto d = composed_slit_domain(0.5, 0.5, th, 400);
    double longest = 0;
    for (std::size_t i = 1; i < d.slits().size(); ++i)
      longest = std::max(longest, (d.slits()[i].second - d.slits()[i].first).norm());
    EXPECT_LT(longest, 0.01) << "theta " << th;
  }
}

TEST(LogDeriv, ComposedSlitsAddCapacitiesAtRightAngle) {
  const auto d = composed_slit_domain(0.5, 0.5, std::numbers::pi / 2);
  const auto e = log_deriv_at_zero(d, 40000, 1e-5, 5);
  EXPECT_NEAR(e.mean, 2 * slit_capacity(0.5), std::max(1.5 * e.half_width_95, 2e-3));
}

TEST(LogDeriv, MonotoneUnderInclusionProperty) {
  // longer slit removes more
  double prev = -1;
  for (double r : {0.8, 0.5, 0.2}) {
    auto d = PlanarDomain::disc(Point::Zero(), 1.0);
    d.add_slit(Point(r, 0), Point(1, 0));
    const auto e = log_deriv_at_zero(d, 4000, 1e-4, 9);
    EXPECT_GT(e.mean, prev);
    prev = e.mean;
  }
}

// ---- modulus ----

TEST(Modulus, RoundAnnuli) {
  EXPECT_NEAR(modulus_estimate(round_annulus_mask(1, std::numbers::e, 512)), 1.0, 0.02);
  EXPECT_NEAR(modulus_estimate(round_annulus_mask(1, std::exp(2.0), 512)), 2.0, 0.04);
}

TEST(Modulus, SquareFrameStableUnderRefinement) {
  const double a = modulus_estimate(square_frame_mask(0.25, 512));
  const double b = modulus_estimate(square_frame_mask(0.25, 1024));
  EXPECT_LT(std::abs(a - b) / b, 0.01);
}

TEST(Modulus, RigidMotionInvariance) {
  const auto m = round_annulus_mask(0.3, 1.0, 64);
  AnnularRegion r;  // rotated by 90 degrees and shifted
  r.nx = m.ny + 5;
  r.ny = m.nx + 2;
  r.region.assign(static_cast<std::size_t>(r.nx) * r.ny, 0);
  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i)
      if (m.at(i, j)) r.region[static_cast<std::size_t>(i + 1) * r.nx + (m.ny - 1 - j) + 3] = 1;
  EXPECT_NEAR(modulus_estimate(m), modulus_estimate(r), 1e-6);
}

TEST(Modulus, ScalingByTwo) {
  const auto m = square_frame_mask(0.5, 64);
  AnnularRegion r;
  r.nx = 2 * m.nx;
  r.ny = 2 * m.ny;
  r.region.assign(static_cast<std::size_t>(r.nx) * r.ny, 0);
  for (int j = 0; j < r.ny; ++j)
    for (int i = 0; i < r.nx; ++i) r.region[static_cast<std::size_t>(j) * r.nx + i] = m.at(i / 2, j / 2);
  EXPECT_NEAR(modulus_estimate(m) / modulus_estimate(r), 1.0, 0.02);
}

TEST(Modulus, NotAnnular) {
  AnnularRegion disc;
  disc.nx = disc.ny = 8;
  disc.region.assign(64, 1);
  EXPECT_THROW(modulus_estimate(disc), Error);
  AnnularRegion two = square_frame_mask(0.5, 32);
  for (int i = 0; i < two.nx; ++i) two.region[static_cast<std::size_t>(two.ny / 2) * two.nx + i] = 0;
  try {
    modulus_estimate(two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAnnular);
  }
}

}  // namespace
}  // namespace loops
