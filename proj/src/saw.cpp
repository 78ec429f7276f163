#include "loops/saw.hpp"

#include <algorithm>
#include <cmath>

#include "loops/error.hpp"
#include "loops/parallel.hpp"

namespace loops {

namespace {

std::array<int, 2> step_of(char c) {
  switch (c) {
    case 'E': return {1, 0};
    case 'N': return {0, 1};
    case 'W': return {-1, 0};
    case 'S': return {0, -1};
  }
  fail(ErrorCode::InvalidFormat, std::string("bad step ") + c);
}

char reverse_step(char c) {
  switch (c) {
    case 'E': return 'W';
    case 'W': return 'E';
    case 'N': return 'S';
    default: return 'N';
  }
}

struct Walker {
  int n_max;
  int size, off;
  std::vector<std::uint8_t> occ;
  std::array<char, 4> order;
  std::string path;
  std::vector<std::vector<std::string>> found;

  Walker(int n, std::array<char, 4> o) : n_max(n), size(2 * n + 5), off(n + 2), occ(static_cast<std::size_t>(size) * size, 0), order(o), found(static_cast<std::size_t>(n) + 1) {}

  std::uint8_t& at(int x, int y) { return occ[static_cast<std::size_t>(y + off) * size + (x + off)]; }

  static bool allowed(int x, int y) { return y > 0 || (y == 0 && x > 0); }

  void dfs(int x, int y) {
    const int k = static_cast<int>(path.size());
    if (x == 0 && y == 1) {
      if (k + 1 <= n_max) found[static_cast<std::size_t>(k) + 1].push_back(path + 'S');
      return;
    }
    // must still reach (0,1) and close
    if (std::abs(x) + std::abs(y - 1) + 1 > n_max - k) return;
    for (char c : order) {
      const auto d = step_of(c);
      const int nx = x + d[0], ny = y + d[1];
      if (!allowed(nx, ny) && !(nx == 0 && ny == 1)) continue;
      if (at(nx, ny)) continue;
      at(nx, ny) = 1;
      path.push_back(c);
      dfs(nx, ny);
      path.pop_back();
      at(nx, ny) = 0;
    }
  }
};

}  // namespace

std::vector<std::array<int, 2>> LatticeLoop::vertices() const {
  std::vector<std::array<int, 2>> v;
  std::array<int, 2> p = anchor;
  for (char c : steps) {
    v.push_back(p);
    const auto d = step_of(c);
    p = {p[0] + d[0], p[1] + d[1]};
  }
  return v;
}

Loop LatticeLoop::to_loop(double delta) const {
  const auto v = vertices();
  Points pts(2, static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) pts.col(static_cast<Eigen::Index>(k)) = delta * Point(v[k][0], v[k][1]);
  return Loop(std::move(pts));
}

std::string canonical_sap(const std::string& steps) {
  require(steps.size() >= 4, ErrorCode::InvalidParameter, "polygon too short");
  LatticeLoop l{steps, {0, 0}};
  const auto v = l.vertices();
  // closed?
  int sx = 0, sy = 0;
  for (char c : steps) {
    const auto d = step_of(c);
    sx += d[0];
    sy += d[1];
  }
  require(sx == 0 && sy == 0, ErrorCode::InvalidParameter, "steps do not close");
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k][1] < v[best][1] || (v[k][1] == v[best][1] && v[k][0] < v[best][0])) best = k;
  const std::size_t n = steps.size();
  std::string fwd = steps.substr(best) + steps.substr(0, best);
  if (fwd[0] == 'E') return fwd;
  // walk the other way round from the same vertex
  std::string back;
  for (std::size_t k = 0; k < n; ++k) back.push_back(reverse_step(fwd[n - 1 - k]));
  return back;
}

SapCensus enumerate_saps(int n_max, int budget, std::array<char, 4> search_order, int jobs) {
  require(n_max >= 0, ErrorCode::InvalidParameter, "n_max must be nonnegative");
  require(n_max <= budget, ErrorCode::BudgetExceeded, "n_max exceeds the enumeration budget");
  {
    auto s = search_order;
    std::sort(s.begin(), s.end());
    require(s == std::array<char, 4>{'E', 'N', 'S', 'W'}, ErrorCode::InvalidParameter, "search order must permute ENWS");
  }
  SapCensus c;
  c.n_max = n_max;
  c.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
  c.classes.resize(static_cast<std::size_t>(n_max) + 1);
  if (n_max < 4) return c;

  // prefixes of a few steps after the forced first E, searched independently
  const int depth = std::min(6, n_max - 3);
  struct Prefix {
    std::string steps;
  };
  std::vector<Prefix> prefixes;
  {
    Walker w(n_max, search_order);
    w.at(0, 0) = 1;
    w.at(1, 0) = 1;
    std::vector<std::pair<std::string, std::array<int, 2>>> frontier{{"E", {1, 0}}};
    for (int k = 1; k < depth; ++k) {
      std::vector<std::pair<std::string, std::array<int, 2>>> next;
      for (const auto& [s, p] : frontier) {
        if (p[0] == 0 && p[1] == 1) {
          next.push_back({s, p});
          continue;
        }
        // occupancy along s
        std::vector<std::array<int, 2>> seen{{0, 0}};
        std::array<int, 2> q{0, 0};
        for (char ch : s) {
          const auto d = step_of(ch);
          q = {q[0] + d[0], q[1] + d[1]};
          seen.push_back(q);
        }
        for (char ch : search_order) {
          const auto d = step_of(ch);
          const std::array<int, 2> t{p[0] + d[0], p[1] + d[1]};
          if (!Walker::allowed(t[0], t[1]) && !(t[0] == 0 && t[1] == 1)) continue;
          if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
          next.push_back({s + ch, t});
        }
      }
      frontier = std::move(next);
    }
    for (auto& f : frontier) prefixes.push_back({f.first});
  }

  std::vector<std::vector<std::vector<std::string>>> parts(prefixes.size());
  parallel_for(prefixes.size(), jobs, [&](std::size_t i) {
    Walker w(n_max, search_order);
    w.at(0, 0) = 1;
    int x = 0, y = 0;
    for (char ch : prefixes[i].steps) {
      const auto d = step_of(ch);
      x += d[0];
      y += d[1];
      w.at(x, y) = 1;
    }
    w.path = prefixes[i].steps;
    // the prefix may already sit at (0,1) with the closing step pending
    if (x == 0 && y == 1) {
      if (static_cast<int>(w.path.size()) + 1 <= n_max) w.found[w.path.size() + 1].push_back(w.path + 'S');
    } else {
      w.dfs(x, y);
    }
    parts[i] = std::move(w.found);
  });
  for (auto& p : parts)
    for (std::size_t n = 0; n < p.size(); ++n)
      for (auto& s : p[n]) c.classes[n].push_back(std::move(s));
  for (std::size_t n = 0; n < c.classes.size(); ++n) {
    std::sort(c.classes[n].begin(), c.classes[n].end());
    c.counts[n] = static_cast<std::int64_t>(c.classes[n].size());
  }
  return c;
}

namespace {

bool find_surrounded_point(const LoopEvent& e, Point& z) {
  if (const auto* s = std::get_if<Surrounds>(&e.node())) {
    z = s->z;
    return true;
  }
  if (const auto* a = std::get_if<SurroundsAnnulusHole>(&e.node())) {
    z = a->annulus.center;
    return true;
  }
  if (const auto* all = std::get_if<AllOf>(&e.node()))
    for (const auto& t : all->terms)
      if (find_surrounded_point(t, z)) return true;
  return false;
}

}  // namespace

SapMass sap_mass(const LoopEvent& e, const SapCensus& census, double lambda, double delta) {
  require(lambda > 0 && delta > 0, ErrorCode::InvalidParameter, "lambda and delta must be positive");
  const Box s = support_box(e);
  Point z;
  const bool bounded = s.bounded();
  const bool surrounds = !bounded && find_surrounded_point(e, z);
  require(bounded || surrounds, ErrorCode::InvalidWindow, "event must confine the loop's position");
  SapMass m;
  m.truncation_length = census.n_max;
  if (bounded && s.empty()) return m;
  for (std::size_t n = 4; n < census.classes.size(); ++n) {
    double sum = 0;
    std::int64_t count = 0;
    const double w = std::pow(lambda, -static_cast<double>(n));
    for (const auto& rep : census.classes[n]) {
      LatticeLoop l{rep, {0, 0}};
      const auto v = l.vertices();
      int x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
      for (const auto& p : v) {
        x_lo = std::min(x_lo, p[0]);
        x_hi = std::max(x_hi, p[0]);
        y_lo = std::min(y_lo, p[1]);
        y_hi = std::max(y_hi, p[1]);
      }
      int tx0, tx1, ty0, ty1;
      if (bounded) {
        tx0 = static_cast<int>(std::ceil(s.lo.x() / delta - x_lo));
        tx1 = static_cast<int>(std::floor(s.hi.x() / delta - x_hi));
        ty0 = static_cast<int>(std::ceil(s.lo.y() / delta - y_lo));
        ty1 = static_cast<int>(std::floor(s.hi.y() / delta - y_hi));
      } else {
        // z strictly inside the translated bounding box
        const Point u = z / delta;
        tx0 = static_cast<int>(std::floor(u.x() - x_hi)) + 1;
        tx1 = static_cast<int>(std::ceil(u.x() - x_lo)) - 1;
        ty0 = static_cast<int>(std::floor(u.y() - y_hi)) + 1;
        ty1 = static_cast<int>(std::ceil(u.y() - y_lo)) - 1;
      }
      const Loop base = l.to_loop(delta);
      for (int ty = ty0; ty <= ty1; ++ty)
        for (int tx = tx0; tx <= tx1; ++tx) {
          const Points pts = base.vertices().colwise() + Point(delta * tx, delta * ty);
          bool hit;
          try {
            hit = evaluate_event(e, PreparedLoop(pts));
          } catch (const Error& err) {
            if (err.code() != ErrorCode::PointOnCurve) throw;
            hit = false;  // a loop through the point does not surround it
          }
          if (hit) {
            sum += w;
            ++count;
          }
        }
    }
    if (count > 0) {
      m.by_length[static_cast<int>(n)] = sum;
      m.positioned[static_cast<int>(n)] = count;
    }
    m.mass += sum;
  }
  return m;
}

ConnectiveEstimate connective_estimate(const SapCensus& census) {
  require(census.n_max >= 10, ErrorCode::InsufficientData, "census needs n_max >= 10");
  ConnectiveEstimate r;
  std::vector<double> x;
  for (int n = 6; n <= census.n_max; n += 2) {
    const auto a = census.counts[static_cast<std::size_t>(n)], b = census.counts[static_cast<std::size_t>(n) - 2];
    if (a <= 0 || b <= 0) continue;
    r.n.push_back(n);
    r.lambda_hat.push_back(std::sqrt(static_cast<double>(a) / static_cast<double>(b)));
    x.push_back(1.0 / n);
  }
  // extrapolate the last (up to) five ratios in 1/n
  const std::size_t k = std::min<std::size_t>(5, x.size());
  const std::vector<double> xs(x.end() - static_cast<std::ptrdiff_t>(k), x.end());
  const std::vector<double> ys(r.lambda_hat.end() - static_cast<std::ptrdiff_t>(k), r.lambda_hat.end());
  r.extrapolated = linear_fit(xs, ys).intercept;
  return r;
}

std::vector<FrameMass> annulus_decay(const std::vector<int>& sides, int width, double lambda, const SapCensus& census) {
  require(width >= 1 && lambda > 0, ErrorCode::InvalidParameter, "bad frame parameters");
  std::vector<FrameMass> out;
  for (int s : sides) {
    require(s - 2 * width >= 1, ErrorCode::InvalidParameter, "frame needs a hole");
    FrameMass f;
    f.side = s;
    f.min_length = 4 * (s - 2 * width);
    f.truncated_to_zero = f.min_length > census.n_max;
    // centre doubled to stay on integers
    const int c2 = s;
    auto in_hole = [&](int x, int y) { return x > width && x < s - width && y > width && y < s - width; };
    for (std::size_t n = static_cast<std::size_t>(std::max(4, f.min_length)); n < census.classes.size(); ++n) {
      const double w = std::pow(lambda, -static_cast<double>(n));
      for (const auto& rep : census.classes[n]) {
        const auto v = LatticeLoop{rep, {0, 0}}.vertices();
        int x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
        for (const auto& p : v) {
          x_lo = std::min(x_lo, p[0]);
          x_hi = std::max(x_hi, p[0]);
          y_lo = std::min(y_lo, p[1]);
          y_hi = std::max(y_hi, p[1]);
        }
        for (int ty = -y_lo; ty <= s - y_hi; ++ty)
          for (int tx = -x_lo; tx <= s - x_hi; ++tx) {
            bool ok = true;
            int crossings = 0;
            for (std::size_t k = 0; k < v.size() && ok; ++k) {
              const int x = v[k][0] + tx, y = v[k][1] + ty;
              if (in_hole(x, y)) ok = false;
              const auto& q = v[(k + 1) % v.size()];
              // vertical edge crossing the ray y = s/2 to the right of the centre
              if (q[0] == v[k][0]) {
                const int ya = 2 * std::min(y, q[1] + ty), yb = 2 * std::max(y, q[1] + ty);
                if (2 * x > c2 && ya <= c2 && c2 < yb) ++crossings;
              }
            }
            if (ok && crossings % 2 == 1) {
              f.mass += w;
              ++f.loops;
            }
          }
      }
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace loops
