#pragma once

#include <span>
#include <vector>

namespace loops {

struct Estimate {
  double mean = 0;
  double half_width_95 = 0;
  double n_effective = 0;

  double se() const { return half_width_95 / 1.959963984540054; }
  double lo() const { return mean - half_width_95; }
  double hi() const { return mean + half_width_95; }
};

inline constexpr int kBatches = 32;

/// Ratio estimator sum(w*x)/sum(w) with a batch-means variance over
/// contiguous batches and a normal 95% interval. n_effective is Kish's
/// effective size.
Estimate weighted_mean_ci(std::span<const double> values, std::span<const double> weights);
Estimate mean_ci(std::span<const double> values);

/// Mean of importance weights: the estimate of a measure's mass.
/// Equivalent to mean_ci over the per-sample weighted indicators.
Estimate mass_ci(std::span<const double> weighted_indicators);

struct KsResult {
  double d = 0;
  double p_value = 1;  ///< asymptotic
};

KsResult ks_statistic(std::span<const double> a, std::span<const double> b);
/// Weighted two-sample version; effective sizes are Kish sizes.
KsResult ks_statistic_weighted(std::span<const double> a, std::span<const double> wa, std::span<const double> b,
                               std::span<const double> wb);
/// Asymptotic Kolmogorov tail Q(lambda).
double kolmogorov_q(double lambda);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  double slope_se = 0;
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Difference a - b with its pooled standard error.
struct Comparison {
  double diff = 0;
  double pooled_se = 0;
  double z() const { return pooled_se > 0 ? diff / pooled_se : (diff == 0 ? 0.0 : 1e300); }
};
Comparison compare(const Estimate& a, const Estimate& b);

}  // namespace loops
