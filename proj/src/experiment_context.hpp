#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "loops/experiments.hpp"
#include "loops/rng.hpp"

namespace loops::detail {

class Params {
 public:
  explicit Params(std::map<std::string, std::string> v) : v_(std::move(v)) {}

  const std::string& text(const std::string& key) const;
  /// Accepts "a/b" fractions.
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma separated reals.
  std::vector<double> reals(const std::string& key) const;

 private:
  std::map<std::string, std::string> v_;
};

struct Context {
  Params p;
  std::uint64_t seed = 1;
  int jobs = 0;
  RunRecord& rec;
  std::vector<std::pair<std::string, Plot>> plots;

  std::uint64_t sub_seed(std::uint64_t k) const { return stream_seed(seed, k); }
  void estimate(const std::string& name, const Estimate& e) { rec.estimates.push_back({name, e}); }
  void value(const std::string& name, double v) { rec.estimates.push_back({name, Estimate{v, 0, 1}}); }
  void check(const std::string& name, double v, double lo, double hi, const std::string& reference) {
    Check c{name, v, lo, hi, false, reference};
    c.pass = check_passes(c);
    rec.checks.push_back(c);
  }
  /// |a - b| <= tol, stored as the signed difference.
  void check_close(const std::string& name, double a, double b, double tol, const std::string& reference) {
    check(name, a - b, -tol, tol, reference);
  }
  void note(const std::string& s) { rec.notes.push_back(s); }
  void plot(const std::string& tag, Plot p) { plots.emplace_back(tag, std::move(p)); }
  /// InvalidConfig unless cond.
  void need(bool cond, const std::string& what) const;
};

void area_pi5(Context& c);
void n0_normalization(Context& c);
void restriction(Context& c);
void m_vs_n0_ratio(Context& c);
void inner_outer_symmetry(Context& c);
void two_sided_count(Context& c);
void annulus_mass(Context& c);
void winding_spectrum(Context& c);
void components(Context& c);
void ergodic_shapes(Context& c);
void dimensions(Context& c);
void perc_vs_brownian_shapes(Context& c);
void saw(Context& c);
void two_root(Context& c);

}  // namespace loops::detail
