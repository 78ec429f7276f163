#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loops/event.hpp"
#include "loops/loop.hpp"
#include "loops/stats.hpp"

namespace loops {

/// Site configuration on an L x L rhombus of the triangular lattice in axial
/// coordinates (q, r); site (q, r) sits at (q + r/2, r sqrt(3)/2). Sites
/// outside the box count as black.
struct PercConfig {
  int L = 0;
  double p = 0.5;
  std::vector<std::uint8_t> white;

  bool inside(int q, int r) const { return q >= 0 && r >= 0 && q < L && r < L; }
  int index(int q, int r) const { return r * L + q; }
  bool is_white(int q, int r) const { return inside(q, r) && white[static_cast<std::size_t>(index(q, r))]; }
  static Point position(int q, int r);
};

/// Axial offsets of the six neighbours, counterclockwise from +x.
inline constexpr int kHexDir[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};

PercConfig sample_config(int L, double p, std::uint64_t seed, std::uint64_t stream = 0);
/// Builds a configuration from rows of '#' (white) and '.', top row = largest r.
PercConfig config_from_rows(const std::vector<std::string>& rows);

struct Cluster {
  bool white = true;
  std::vector<int> sites;  ///< site indices
  int q_lo = 0, q_hi = 0, r_lo = 0, r_hi = 0;
  bool touches_frame = false;
};

/// 6-adjacency clusters of one colour, in order of their lowest site index.
std::vector<Cluster> clusters(const PercConfig& c, bool white);

/// All closed hex-dual cycles separating white from black, white on the left.
std::vector<SimpleLoop> interface_loops(const PercConfig& c);
/// Number of hex edges of a traced loop (each of length 1/sqrt(3)).
inline Eigen::Index hex_edge_count(const Loop& l) { return l.vertices().cols(); }

/// Outer interface loop of a cluster (counterclockwise).
SimpleLoop outer_interface(const Cluster& k, const PercConfig& c);

struct PerimeterLoop {
  SimpleLoop loop;
  std::size_t cluster = 0;
  int filled_sites = 0;  ///< cluster sites plus enclosed and fjord sites
};

/// Outer perimeter: the boundary of the cluster with every complement site
/// not biconnected to infinity filled in. Throws TouchesFrame.
PerimeterLoop outer_perimeter(const Cluster& k, const PercConfig& c, std::size_t id = 0);

/// Outer perimeters of white clusters with diameter in [d_lo, d_hi], frame
/// touching clusters skipped.
std::vector<PerimeterLoop> perimeters_in_window(const PercConfig& c, double d_lo, double d_hi);

/// Translate-and-scale shapes of white perimeters with diameter in
/// [d_lo, d_hi] over n_configs configurations at p = 1/2.
std::vector<Shape> perimeter_shape_sample(int L, double d_lo, double d_hi, std::size_t n_configs, std::uint64_t seed,
                                          int jobs = 0);

/// Expected number of white perimeters in the event (placed at a uniformly
/// random lattice position inside the frame-safe region), one value per
/// configuration averaged over n_translations placements.
Estimate pi_mass_estimate(const LoopEvent& e, int L, std::size_t n_configs, std::uint64_t seed,
                          int n_translations = 64, int jobs = 0);

}  // namespace loops
