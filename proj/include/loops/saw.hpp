#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loops/event.hpp"
#include "loops/stats.hpp"

namespace loops {

/// Self-avoiding polygon as a closed step string over {E, N, W, S}.
struct LatticeLoop {
  std::string steps;
  std::array<int, 2> anchor{0, 0};

  int length() const { return static_cast<int>(steps.size()); }
  /// Vertices anchor + partial sums, closing vertex dropped.
  std::vector<std::array<int, 2>> vertices() const;
  Loop to_loop(double delta = 1.0) const;
};

/// Translation classes of polygons; reflections and rotations are distinct
/// classes, traversal direction and starting vertex are not.
struct SapCensus {
  int n_max = 0;
  std::vector<std::int64_t> counts;               ///< indexed by length
  std::vector<std::vector<std::string>> classes;  ///< sorted representatives per length
};

/// Representative: start at the lowest-leftmost vertex, first step E
/// (counterclockwise). Only the first search_order entries' order differs
/// between runs; counts and representatives do not.
SapCensus enumerate_saps(int n_max, int budget = 22, std::array<char, 4> search_order = {'E', 'N', 'W', 'S'},
                         int jobs = 0);

/// Canonical step string of any closed self-avoiding step string.
std::string canonical_sap(const std::string& steps);

struct SapMass {
  double mass = 0;
  int truncation_length = 0;
  std::map<int, double> by_length;
  std::map<int, std::int64_t> positioned;  ///< number of positioned loops per length
};

/// Sum of lambda^-n over positioned loops of length <= census n_max on delta Z^2
/// satisfying the event. The event needs a bounded support or a Surrounds term.
SapMass sap_mass(const LoopEvent& e, const SapCensus& census, double lambda, double delta = 1.0);

struct ConnectiveEstimate {
  std::vector<int> n;
  std::vector<double> lambda_hat;  ///< sqrt(count_n / count_{n-2})
  double extrapolated = 0;         ///< linear fit of lambda_hat against 1/n, intercept
};

ConnectiveEstimate connective_estimate(const SapCensus& census);

struct FrameMass {
  int side = 0;
  int min_length = 0;
  bool truncated_to_zero = false;
  double mass = 0;
  std::int64_t loops = 0;
};

/// Loops inside the square frame [0,s]^2 minus the open square (w, s-w)^2
/// winding around its centre.
std::vector<FrameMass> annulus_decay(const std::vector<int>& sides, int width, double lambda, const SapCensus& census);

}  // namespace loops
