#include "loops/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "loops/error.hpp"

namespace loops {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

Estimate weighted_mean_ci(std::span<const double> values, std::span<const double> weights) {
  require(values.size() == weights.size(), ErrorCode::InvalidParameter, "values and weights differ in length");
  const std::size_t n = values.size();
  require(n > 0, ErrorCode::EmptyBatch, "no samples");
  double sw = 0, sw2 = 0, swx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    require(weights[i] >= 0 && std::isfinite(weights[i]), ErrorCode::InvalidParameter, "negative or non-finite weight");
    sw += weights[i];
    sw2 += weights[i] * weights[i];
    swx += weights[i] * values[i];
  }
  require(sw > 0, ErrorCode::AllZeroWeights, "all weights are zero");
  require(n >= 2, ErrorCode::InsufficientData, "need at least 2 samples for an interval");
  Estimate e;
  e.mean = swx / sw;
  e.n_effective = sw * sw / sw2;

  const std::size_t b = std::min<std::size_t>(kBatches, n);
  const double wbar = sw / static_cast<double>(b);
  double acc = 0;
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t lo = k * n / b, hi = (k + 1) * n / b;
    double bw = 0, bwx = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      bw += weights[i];
      bwx += weights[i] * values[i];
    }
    // W_b (R_b - R) = sum w (x - R) over the batch
    const double dev = bwx - bw * e.mean;
    acc += (dev / wbar) * (dev / wbar);
  }
  const double var = acc / (static_cast<double>(b) * static_cast<double>(b - 1));
  e.half_width_95 = kZ95 * std::sqrt(var);
  // constant values must give an exact zero width
  const bool constant = std::all_of(values.begin(), values.end(), [&](double x) { return x == values[0]; });
  if (constant) {
    e.mean = values[0];
    e.half_width_95 = 0;
  }
  return e;
}

Estimate mean_ci(std::span<const double> values) {
  const std::vector<double> w(values.size(), 1.0);
  return weighted_mean_ci(values, w);
}

Estimate mass_ci(std::span<const double> weighted_indicators) {
  return mean_ci(weighted_indicators);
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0, sign = 1;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

namespace {

double kish(std::span<const double> w) {
  double s = 0, s2 = 0;
  for (double x : w) {
    s += x;
    s2 += x * x;
  }
  return s * s / s2;
}

KsResult ks_core(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                 std::span<const double> wb) {
  require(!a.empty() && !b.empty(), ErrorCode::EmptyBatch, "empty sample");
  require(a.size() == wa.size() && b.size() == wb.size(), ErrorCode::InvalidParameter, "weights length mismatch");
  auto order = [](std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    return idx;
  };
  const auto ia = order(a), ib = order(b);
  const double ta = std::accumulate(wa.begin(), wa.end(), 0.0);
  const double tb = std::accumulate(wb.begin(), wb.end(), 0.0);
  require(ta > 0 && tb > 0, ErrorCode::AllZeroWeights, "zero total weight");
  double fa = 0, fb = 0, d = 0;
  std::size_t i = 0, j = 0;
  while (i < ia.size() || j < ib.size()) {
    double x;
    if (j >= ib.size() || (i < ia.size() && a[ia[i]] <= b[ib[j]])) x = a[ia[i]];
    else x = b[ib[j]];
    // advance both past every tie at x
    while (i < ia.size() && a[ia[i]] == x) fa += wa[ia[i++]];
    while (j < ib.size() && b[ib[j]] == x) fb += wb[ib[j++]];
    d = std::max(d, std::abs(fa / ta - fb / tb));
  }
  const double na = kish(wa), nb = kish(wb);
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  return KsResult{d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)};
}

}  // namespace

KsResult ks_statistic(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> wa(a.size(), 1.0), wb(b.size(), 1.0);
  return ks_core(a, wa, b, wb);
}

KsResult ks_statistic_weighted(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                               std::span<const double> wb) {
  return ks_core(a, wa, b, wb);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size(), ErrorCode::InvalidParameter, "xs and ys differ in length");
  const std::size_t n = xs.size();
  require(n >= 3, ErrorCode::DegenerateDesign, "need at least 3 points");
  const Eigen::Map<const Eigen::VectorXd> x(xs.data(), static_cast<Eigen::Index>(n));
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(n));
  const double mx = x.mean(), my = y.mean();
  const Eigen::VectorXd dx = x.array() - mx, dy = y.array() - my;
  const double sxx = dx.squaredNorm();
  require(sxx > 0, ErrorCode::DegenerateDesign, "all xs equal");
  LinearFit f;
  f.slope = dx.dot(dy) / sxx;
  f.intercept = my - f.slope * mx;
  const double syy = dy.squaredNorm();
  const Eigen::VectorXd res = dy - f.slope * dx;
  const double sse = res.squaredNorm();
  f.r2 = syy > 0 ? std::max(0.0, 1 - sse / syy) : 0.0;
  f.slope_se = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

Comparison compare(const Estimate& a, const Estimate& b) {
  return Comparison{a.mean - b.mean, std::hypot(a.se(), b.se())};
}

}  // namespace loops
