#include "loops/conformal.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "loops/error.hpp"
#include "loops/parallel.hpp"

namespace loops {

Point walk_exit(const PlanarDomain& d, const Point& z0, double eps, Engine& eng) {
  require(eps > 0, ErrorCode::InvalidParameter, "shell width must be positive");
  require(d.bounding_box().bounded(), ErrorCode::InvalidParameter, "walk needs a bounded domain");
  require(d.contains(z0) && d.distance(z0) > eps, ErrorCode::InvalidStart, "start point must lie inside the domain");
  Point z = z0;
  for (;;) {
    const double r = d.distance(z);
    if (r < eps) return d.nearest_boundary_point(z);
    const double a = 2 * std::numbers::pi * uniform01(eng);
    z += r * Point(std::cos(a), std::sin(a));
  }
}

Point walk_exit(const PlanarDomain& d, const Point& z0, double eps, std::uint64_t seed, std::uint64_t stream) {
  Engine eng = make_engine(seed, stream);
  return walk_exit(d, z0, eps, eng);
}

Estimate log_deriv_at_zero(const PlanarDomain& d, std::size_t n_samples, double eps, std::uint64_t seed, int jobs) {
  require(n_samples > 0, ErrorCode::EmptyBatch, "n_samples must be positive");
  if (eps <= 0) eps = 1e-4 * d.diameter();
  require(d.contains(Point::Zero()) && d.distance(Point::Zero()) > eps, ErrorCode::InvalidStart, "origin must be interior");
  std::vector<double> v(n_samples);
  parallel_for(n_samples, jobs, [&](std::size_t i) {
    Engine eng = make_engine(seed, i);
    v[i] = -std::log(walk_exit(d, Point::Zero(), eps, eng).norm());
  });
  return mean_ci(v);
}

double slit_capacity(double r) {
  require(r > 0 && r <= 1, ErrorCode::InvalidParameter, "slit radius must lie in (0, 1]");
  return 2 * std::log1p(r) - std::log(4 * r);
}

double slit_radius_for_capacity(double t) {
  require(t >= 0 && std::isfinite(t), ErrorCode::InvalidParameter, "capacity must be nonnegative");
  // (1+r)^2 = 4 e^t r  ->  r^2 + 2(1 - 2e^t) r + 1 = 0, smaller root
  const double b = 2 * std::exp(t) - 1;
  return 1 / (b + std::sqrt(b * b - 1));
}

namespace {

Complex koebe(Complex z) { return z / ((1.0 + z) * (1.0 + z)); }

// inverse of koebe on the unit disc
Complex koebe_inverse(Complex w) {
  // roots of w z^2 + (2w - 1) z + w multiply to 1
  const Complex s = std::sqrt(1.0 - 4.0 * w);
  const Complex z = 2.0 * w / (1.0 - 2.0 * w + s);
  return std::abs(z) > 1 ? 1.0 / z : z;
}

// Both maps commute with conjugation; on the circle the root choice in
// koebe_inverse is decided by rounding, so keep the input's half-plane.
Complex same_side(Complex in, Complex out) { return in.imag() * out.imag() < 0 ? std::conj(out) : out; }

}  // namespace

Complex slit_map(double r, double theta, Complex z) {
  const Complex rot = std::polar(1.0, theta);
  const double k = r / ((1 + r) * (1 + r));
  const Complex u = z / rot;
  return rot * same_side(u, koebe_inverse(koebe(u) / (4 * k)));
}

Complex slit_map_inverse(double r, double theta, Complex w) {
  const Complex rot = std::polar(1.0, theta);
  const double k = r / ((1 + r) * (1 + r));
  const Complex u = w / rot;
  return rot * same_side(u, koebe_inverse(4 * k * koebe(u)));
}

PlanarDomain composed_slit_domain(double r1, double r2, double theta, int n_pieces) {
  require(r1 > 0 && r1 < 1 && r2 > 0 && r2 < 1, ErrorCode::InvalidParameter, "slit radii must lie in (0, 1)");
  require(n_pieces >= 1, ErrorCode::InvalidParameter, "need at least one piece");
  PlanarDomain d = PlanarDomain::disc(Point::Zero(), 1.0);
  d.add_slit(Point(r1, 0), Point(1, 0));
  // the tip end is densest in curvature; space nodes like r2 + (1-r2) u^2
  auto node = [&](int k) {
    const double u = static_cast<double>(k) / n_pieces;
    const double s = r2 + (1 - r2) * u * u;
    const Complex z = slit_map_inverse(r1, 0.0, std::polar(s, theta));
    return Point(z.real(), z.imag());
  };
  Point prev = node(0);
  for (int k = 1; k <= n_pieces; ++k) {
    Point cur = node(k);
    if (k == n_pieces) cur /= cur.norm();
    d.add_slit(prev, cur);
    prev = cur;
  }
  return d;
}

double modulus_estimate(const AnnularRegion& a, double tolerance) {
  require(a.nx > 0 && a.ny > 0 && a.region.size() == static_cast<std::size_t>(a.nx) * a.ny, ErrorCode::InvalidParameter,
          "mask size mismatch");
  // complement components on a grid padded by one ring
  const int px = a.nx + 2, py = a.ny + 2;
  std::vector<int> comp(static_cast<std::size_t>(px) * py, -1);
  auto pid = [&](int i, int j) { return static_cast<std::size_t>(j) * px + i; };
  auto free_cell = [&](int i, int j) { return !a.at(i - 1, j - 1); };
  int n_comp = 0;
  std::vector<std::size_t> stack;
  for (int j = 0; j < py; ++j)
    for (int i = 0; i < px; ++i) {
      if (!free_cell(i, j) || comp[pid(i, j)] >= 0) continue;
      comp[pid(i, j)] = n_comp;
      stack.push_back(pid(i, j));
      while (!stack.empty()) {
        const std::size_t c = stack.back();
        stack.pop_back();
        const int ci = static_cast<int>(c % px), cj = static_cast<int>(c / px);
        const int nb[4][2] = {{ci + 1, cj}, {ci - 1, cj}, {ci, cj + 1}, {ci, cj - 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= px || q[1] >= py) continue;
          if (!free_cell(q[0], q[1]) || comp[pid(q[0], q[1])] >= 0) continue;
          comp[pid(q[0], q[1])] = n_comp;
          stack.push_back(pid(q[0], q[1]));
        }
      }
      ++n_comp;
    }
  require(n_comp == 2, ErrorCode::NotAnnular, "complement must have exactly two components");
  // component 0 holds the padding ring, so it is the unbounded one

  std::vector<int> unknown(comp.size(), -1);
  int n = 0;
  for (int j = 1; j <= a.ny; ++j)
    for (int i = 1; i <= a.nx; ++i)
      if (!free_cell(i, j)) unknown[pid(i, j)] = n++;
  require(n > 0, ErrorCode::NotAnnular, "empty region");

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int j = 1; j <= a.ny; ++j)
    for (int i = 1; i <= a.nx; ++i) {
      const int u = unknown[pid(i, j)];
      if (u < 0) continue;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& q : nb) {
        const std::size_t p = pid(q[0], q[1]);
        if (unknown[p] >= 0) {
          trip.emplace_back(u, u, 1.0);
          trip.emplace_back(u, unknown[p], -1.0);
        } else {
          // Dirichlet value sits on the shared face, half a cell away
          trip.emplace_back(u, u, 2.0);
          if (comp[p] == 0) rhs[u] += 2.0;
        }
      }
    }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::NaturalOrdering<int>>> cg;
  cg.setTolerance(tolerance);
  cg.setMaxIterations(10 * n);
  cg.compute(A);
  const Eigen::VectorXd x = cg.solve(rhs);

  auto value = [&](std::size_t p) -> double {
    if (unknown[p] >= 0) return x[unknown[p]];
    return comp[p] == 0 ? 1.0 : 0.0;
  };
  double energy = 0;
  auto edge = [&](std::size_t p, std::size_t q) {
    const bool up = unknown[p] >= 0, uq = unknown[q] >= 0;
    if (up || uq) energy += (up && uq ? 1.0 : 2.0) * std::pow(value(p) - value(q), 2);
  };
  for (int j = 0; j < py; ++j)
    for (int i = 0; i < px; ++i) {
      if (i + 1 < px) edge(pid(i, j), pid(i + 1, j));
      if (j + 1 < py) edge(pid(i, j), pid(i, j + 1));
    }
  return 2 * std::numbers::pi / energy;
}

AnnularRegion round_annulus_mask(double r_in, double r_out, int n) {
  require(r_in > 0 && r_out > r_in && n >= 8, ErrorCode::InvalidParameter, "bad annulus");
  AnnularRegion a;
  a.nx = a.ny = n + 2;
  const double h = 2 * r_out / n;
  a.region.assign(static_cast<std::size_t>(a.nx) * a.ny, 0);
  for (int j = 0; j < a.ny; ++j)
    for (int i = 0; i < a.nx; ++i) {
      const double r = h * Point(i + 0.5 - 0.5 * a.nx, j + 0.5 - 0.5 * a.ny).norm();
      a.region[static_cast<std::size_t>(j) * a.nx + i] = r > r_in && r < r_out;
    }
  return a;
}

AnnularRegion square_frame_mask(double ratio, int n) {
  require(ratio > 0 && ratio < 1 && n >= 8, ErrorCode::InvalidParameter, "bad frame");
  AnnularRegion a;
  a.nx = a.ny = n + 2;
  const double half = 0.5 * n, inner = 0.5 * n * ratio;
  a.region.assign(static_cast<std::size_t>(a.nx) * a.ny, 0);
  for (int j = 0; j < a.ny; ++j)
    for (int i = 0; i < a.nx; ++i) {
      const double m = std::max(std::abs(i + 0.5 - 0.5 * a.nx), std::abs(j + 0.5 - 0.5 * a.ny));
      a.region[static_cast<std::size_t>(j) * a.nx + i] = m > inner && m < half;
    }
  return a;
}

}  // namespace loops
