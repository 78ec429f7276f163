#pragma once

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "loops/conformal.hpp"

namespace loops::test {

// Brute force: every closed self-avoiding walk from the origin, reduced to
// the lexicographically smallest string over starting points and directions.
inline std::string lexmin(const std::string& s) {
  const std::size_t n = s.size();
  std::string rev;
  for (std::size_t k = 0; k < n; ++k) {
    const char c = s[n - 1 - k];
    rev.push_back(c == 'E' ? 'W' : c == 'W' ? 'E' : c == 'N' ? 'S' : 'N');
  }
  std::string best = s;
  for (std::size_t k = 0; k < n; ++k) {
    best = std::min(best, s.substr(k) + s.substr(0, k));
    best = std::min(best, rev.substr(k) + rev.substr(0, k));
  }
  return best;
}

inline void naive(int n, int x, int y, std::string& path, std::set<std::pair<int, int>>& seen, std::set<std::string>& out) {
  static const char dirs[4] = {'E', 'N', 'W', 'S'};
  static const int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
  for (int d = 0; d < 4; ++d) {
    const int nx = x + dx[d], ny = y + dy[d];
    if (static_cast<int>(path.size()) + 1 == n) {
      if (nx == 0 && ny == 0) out.insert(lexmin(path + dirs[d]));
      continue;
    }
    if (seen.count({nx, ny}) || (nx == 0 && ny == 0)) continue;
    seen.insert({nx, ny});
    path.push_back(dirs[d]);
    naive(n, nx, ny, path, seen, out);
    path.pop_back();
    seen.erase({nx, ny});
  }
}

inline std::set<std::string> naive_classes(int n) {
  std::set<std::string> out;
  std::string path;
  std::set<std::pair<int, int>> seen;
  naive(n, 0, 0, path, seen, out);
  return out;
}

// Independent normalized map of D minus [r, 1) onto D:
// Moebius to D minus (-1, 0], square root to the right half disc, a Moebius
// map sending its corners i, -i to 0, infinity (third quadrant), squaring to
// the upper half plane, Cayley back to D.
inline Complex oracle_chain(double r, Complex z) {
  const Complex i(0, 1);
  const Complex m = (r - z) / (1.0 - r * z);
  const Complex s = std::sqrt(m);
  const Complex q = (s - i) / (s + i);
  return q * q;
}

inline Complex oracle_map(double r, Complex z) {
  const Complex x0 = oracle_chain(r, 0.0);
  const Complex x = oracle_chain(r, z);
  return (x - x0) / (x - std::conj(x0));
}

inline double oracle_log_deriv(double r) {
  const double h = 1e-5;
  const Complex d = (oracle_map(r, h) - oracle_map(r, -h)) / (2 * h);
  return std::log(std::abs(d));
}

}  // namespace loops::test
