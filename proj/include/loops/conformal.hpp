#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "loops/domain.hpp"
#include "loops/rng.hpp"
#include "loops/stats.hpp"

namespace loops {

using Complex = std::complex<double>;

/// Walk on spheres from z0 until within eps of the boundary; returns the
/// nearest boundary point.
Point walk_exit(const PlanarDomain& d, const Point& z0, double eps, Engine& eng);
Point walk_exit(const PlanarDomain& d, const Point& z0, double eps, std::uint64_t seed, std::uint64_t stream = 0);

/// -E log|exit| from the origin. eps <= 0 picks 1e-4 times the domain diameter.
Estimate log_deriv_at_zero(const PlanarDomain& d, std::size_t n_samples, double eps, std::uint64_t seed, int jobs = 0);

/// log of the derivative at 0 of the normalized map from the unit disc minus
/// [r, 1) onto the disc: log((1+r)^2 / (4r)).
double slit_capacity(double r);
/// Inverse of slit_capacity on (0, 1].
double slit_radius_for_capacity(double t);

/// Normalized map from the unit disc minus the slit [r e^{i theta}, e^{i theta})
/// onto the disc, and its inverse.
Complex slit_map(double r, double theta, Complex z);
Complex slit_map_inverse(double r, double theta, Complex w);

/// Unit disc with slit U = [r1, 1) and the pullback of the slit
/// [r2 e^{i theta}, e^{i theta}) under the slit map of U, the latter as a
/// polyline of n_pieces segments. Its capacity is the sum of the two.
PlanarDomain composed_slit_domain(double r1, double r2, double theta, int n_pieces = 400);

/// Cell mask of an annular region: 1 = region, 0 = complement.
struct AnnularRegion {
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> region;

  bool at(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny && region[static_cast<std::size_t>(j) * nx + i];
  }
};

/// Conformal modulus from the discrete Dirichlet energy: potential 0 on the
/// bounded complement component, 1 on the unbounded one, rho = 2 pi / energy.
double modulus_estimate(const AnnularRegion& a, double tolerance = 1e-8);

/// Round annulus r_in < |z| < r_out on a grid with n cells across the outer diameter.
AnnularRegion round_annulus_mask(double r_in, double r_out, int n);
/// Concentric square frame, inner side / outer side = ratio < 1, outer side spanning n cells.
AnnularRegion square_frame_mask(double ratio, int n);

}  // namespace loops
