#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace loops {

/// Finite union of closed intervals on the line, kept sorted and disjoint.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(double lo, double hi) { add(lo, hi); }

  void add(double lo, double hi) {
    if (!(lo < hi)) return;
    iv_.emplace_back(lo, hi);
    normalize();
  }

  void add_all(const std::vector<std::pair<double, double>>& pieces) {
    for (const auto& [lo, hi] : pieces)
      if (lo < hi) iv_.emplace_back(lo, hi);
    normalize();
  }

  IntervalSet unite(const IntervalSet& o) const {
    IntervalSet r = *this;
    r.iv_.insert(r.iv_.end(), o.iv_.begin(), o.iv_.end());
    r.normalize();
    return r;
  }

  IntervalSet intersect(const IntervalSet& o) const {
    IntervalSet r;
    std::size_t i = 0, j = 0;
    while (i < iv_.size() && j < o.iv_.size()) {
      const double lo = std::max(iv_[i].first, o.iv_[j].first);
      const double hi = std::min(iv_[i].second, o.iv_[j].second);
      if (lo < hi) r.iv_.emplace_back(lo, hi);
      if (iv_[i].second < o.iv_[j].second) ++i;
      else ++j;
    }
    return r;
  }

  /// Complement relative to [lo, hi].
  IntervalSet complement(double lo, double hi) const {
    IntervalSet r;
    double cur = lo;
    for (const auto& [a, b] : iv_) {
      if (b <= lo || a >= hi) continue;
      if (a > cur) r.iv_.emplace_back(cur, std::min(a, hi));
      cur = std::max(cur, b);
    }
    if (cur < hi) r.iv_.emplace_back(cur, hi);
    return r;
  }

  double measure() const {
    double m = 0;
    for (const auto& [a, b] : iv_) m += b - a;
    return m;
  }

  bool empty() const { return iv_.empty(); }
  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }

 private:
  void normalize() {
    std::sort(iv_.begin(), iv_.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& p : iv_) {
      if (!out.empty() && p.first <= out.back().second) out.back().second = std::max(out.back().second, p.second);
      else out.push_back(p);
    }
    iv_ = std::move(out);
  }

  std::vector<std::pair<double, double>> iv_;
};

}  // namespace loops
