#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "loops/event.hpp"
#include "loops/hull.hpp"
#include "loops/interval.hpp"
#include "loops/rng.hpp"
#include "loops/stats.hpp"

namespace loops {

/// Rooted planar Brownian bridge sampled at n_steps + 1 equally spaced times.
struct BrownianLoopPath {
  Points points;
  double T = 1;
  int n_steps = 0;
};

BrownianLoopPath sample_bridge(double T, int n_steps, std::uint64_t seed, std::uint64_t stream = 0);
/// Fills out (2 x (n_steps+1)) from the engine; used by the batch samplers.
void fill_bridge(Engine& eng, double T, int n_steps, Points& out);

/// T = 1 bridge divided by its max radius, closing vertex dropped.
Loop sample_shape_loop(int n_steps, std::uint64_t seed, std::uint64_t stream = 0);

enum class EventTarget { Trace, OuterBoundary };

struct SamplerOptions {
  std::size_t n_samples = 1000;
  int n_steps = 1 << 16;
  /// Raster cell size in units of the sampled shape (max radius 1 for N0,
  /// unit time for M).
  double hull_resolution = 1.0 / 512;
  std::uint64_t seed = 1;
  int jobs = 0;
  /// Nodes per unit of log-scale for events without a closed-form scale set.
  int quadrature_nodes = 128;
};

struct ScaleWindow {
  double r_lo = 0.5, r_hi = 2;
};

struct MassEstimate {
  Estimate estimate;
  std::size_t n_samples = 0;
  /// Samples accepted within 1% of a window edge.
  std::size_t window_violations = 0;
  std::vector<double> values;  ///< per-sample contributions
};

/// Set of t = log r inside [t_lo, t_hi] for which the event holds on r * g.
/// Closed forms for root-centred atoms and radial slits; other atoms are
/// resolved by scanning and bisection.
IntervalSet log_scale_set(const LoopEvent& e, const PreparedLoop& g, double t_lo, double t_hi, int nodes_per_unit = 128);

/// Target geometry of a sampled shape: the trace itself or its raster outer boundary.
Points target_geometry(const Points& trace, EventTarget target, double h);

/// N0 masses of events, integrated exactly over the log-uniform scale: each
/// shape contributes the measure of its accepted log-scale set. All events
/// share the same shapes.
std::vector<MassEstimate> estimate_N0_masses(const std::vector<LoopEvent>& events, EventTarget target,
                                             const ScaleWindow& w, const SamplerOptions& o);
MassEstimate estimate_N0_mass(const LoopEvent& e, EventTarget target, const ScaleWindow& w, const SamplerOptions& o);

/// nu: outer boundaries of N0 loops.
std::vector<MassEstimate> estimate_nu_masses(const std::vector<LoopEvent>& events, const ScaleWindow& w,
                                             const SamplerOptions& o);
MassEstimate estimate_nu_mass(const LoopEvent& e, const ScaleWindow& w, const SamplerOptions& o);

struct MWindow {
  Box K;
  double T_lo = 1, T_hi = 2;
  int draws_per_bridge = 16;
};

/// M masses: z uniform on K, T log-uniform, weight |K| log(T_hi/T_lo) / (2T).
/// Each T = 1 bridge is reused for draws_per_bridge (z, T) pairs.
std::vector<MassEstimate> estimate_M_masses(const std::vector<LoopEvent>& events, EventTarget target, const MWindow& w,
                                            const SamplerOptions& o);
MassEstimate estimate_M_mass(const LoopEvent& e, EventTarget target, const MWindow& w, const SamplerOptions& o);

enum class BoundarySide { Outer, Inner };
enum class Gauge { Euclidean, Chebyshev };

/// M mass of {boundary loop lies in an annulus of modulus rho centred at c
/// and surrounds c}, integrated over c and scale in closed form:
///   E[ sum over boundaries B of  int_{inside B} (rho - log(dmax_B(c)/dmin_B(c)))^+ d^2c ],
/// Outer: B = outer boundary. Inner: B ranges over the bounded complement
/// components. Chebyshev gauge gives concentric square frames with side
/// ratio e^rho.
std::vector<MassEstimate> estimate_M_annulus_masses(const std::vector<double>& rhos, BoundarySide side, Gauge gauge,
                                                    const SamplerOptions& o);

struct HullAreaStudy {
  std::vector<double> resolutions;
  std::vector<Estimate> area;          ///< per resolution
  Estimate extrapolated;               ///< from the two finest resolutions
  double exponent = 0;                 ///< assumed error exponent
  double fitted_exponent = 0;          ///< from three resolutions, NaN otherwise
};

Estimate expected_hull_area(double T, int n_steps, std::size_t n_samples, double h, std::uint64_t seed, int jobs = 0);
/// Paired multi-resolution hull areas of the same bridges; Richardson step
/// uses error ~ h^exponent. With coupled set, the level at resolution h uses
/// every (h/h_min)^2-th bridge vertex, so the polygon's missing frontier area
/// shrinks with the raster error and one Richardson step removes both.
HullAreaStudy hull_area_study(double T, int n_steps, std::size_t n_samples, const std::vector<double>& resolutions,
                              std::uint64_t seed, double exponent = 2.0 / 3.0, bool coupled = true, int jobs = 0);

struct WindingSpectrum {
  int n_max = 0;
  std::map<int, Estimate> area;  ///< E[A_n] for |n| <= n_max
  Estimate hull_area;
  Estimate first_moment;         ///< E[sum n A_n]
};

WindingSpectrum winding_area_spectrum(double T, int n_steps, std::size_t n_samples, double h, std::uint64_t seed,
                                      int n_max, int jobs = 0);

struct TwoRootReport {
  std::vector<MassEstimate> rooted_at_zero;
  std::vector<MassEstimate> rooted_at_ztilde;
  std::vector<Comparison> difference;
};

/// Compares N0 and N^ztilde outer-boundary masses of events that force
/// surrounding both 0 and ztilde.
TwoRootReport two_root_agreement(const Point& ztilde, const std::vector<LoopEvent>& events, const ScaleWindow& w,
                                 const SamplerOptions& o);

}  // namespace loops
