#include <algorithm>
#include <cmath>
#include <limits>

#include "experiment_context.hpp"
#include "loops/brownian.hpp"
#include "loops/error.hpp"
#include "loops/parallel.hpp"
#include "loops/percolation.hpp"
#include "loops/saw.hpp"

namespace loops::detail {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Every edge split into k pieces, so box counting sees the curve.
Points densify(const Points& v, int k) {
  const Eigen::Index n = v.cols();
  Points out(2, n * k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point a = v.col(i), b = v.col((i + 1) % n);
    for (int j = 0; j < k; ++j) out.col(i * k + j) = a + (b - a) * (static_cast<double>(j) / k);
  }
  return out;
}

// Box-counting slope between 4 cells and an eighth of the diameter; NaN
// when the loop is below min_diam cells.
double curve_dimension(const Points& v, double cell, double min_diam, int scales) {
  const double d = diameter(v);
  if (d < min_diam * cell) return kNaN;
  const double spacing = perimeter_length(v) / static_cast<double>(v.cols());
  const int k = std::max(1, static_cast<int>(std::ceil(spacing / (0.5 * cell))));
  Points pts = densify(v, k);
  if (pts.cols() < 1000) pts = densify(v, k * static_cast<int>(std::ceil(1000.0 / static_cast<double>(pts.cols()))));
  return boxcount_dimension(pts, 4 * cell, d / 8, scales).slope;
}

}  // namespace

void dimensions(Context& c) {
  const auto n_loops = c.p.integer("n_loops"), steps = c.p.integer("steps"), scales = c.p.integer("scales");
  const auto max_tries = c.p.integer("max_tries"), L = c.p.integer("L"), max_configs = c.p.integer("max_configs");
  const auto min_loops = c.p.integer("min_loops");
  const double h = c.p.real("h"), min_diam = c.p.real("min_diam"), tol = c.p.real("tol");
  c.need(n_loops >= 2 && steps >= 2 && scales >= 3 && max_tries >= n_loops && L >= 16 && max_configs >= 1 &&
             min_loops >= 2 && h > 0 && min_diam >= 8,
         "bad dimensions parameters");

  // Brownian frontiers: draw in blocks until n_loops are large enough
  std::vector<double> brown;
  std::size_t tried = 0;
  while (brown.size() < static_cast<std::size_t>(n_loops) && tried < static_cast<std::size_t>(max_tries)) {
    const std::size_t block = std::min<std::size_t>(static_cast<std::size_t>(n_loops), static_cast<std::size_t>(max_tries) - tried);
    std::vector<double> s(block);
    parallel_for(block, c.jobs, [&](std::size_t i) {
      const auto b = sample_bridge(1.0, static_cast<int>(steps), c.sub_seed(1), tried + i);
      s[i] = curve_dimension(target_geometry(b.points, EventTarget::OuterBoundary, h), h, min_diam, static_cast<int>(scales));
    });
    for (double v : s)
      if (!std::isnan(v) && brown.size() < static_cast<std::size_t>(n_loops)) brown.push_back(v);
    tried += block;
  }

  // percolation: whole configurations until both families are large enough
  std::vector<double> iface, perim;
  std::size_t used = 0;
  const std::size_t batch = 8;
  while ((iface.size() < static_cast<std::size_t>(min_loops) || perim.size() < static_cast<std::size_t>(min_loops)) &&
         used < static_cast<std::size_t>(max_configs)) {
    const std::size_t nb = std::min(batch, static_cast<std::size_t>(max_configs) - used);
    std::vector<std::vector<double>> fi(nb), fp(nb);
    parallel_for(nb, c.jobs, [&](std::size_t i) {
      const auto cfg = sample_config(static_cast<int>(L), 0.5, c.sub_seed(2), used + i);
      for (const auto& l : interface_loops(cfg)) {
        const double s = curve_dimension(l.vertices(), 1.0, min_diam, static_cast<int>(scales));
        if (!std::isnan(s)) fi[i].push_back(s);
      }
      for (const auto& p : perimeters_in_window(cfg, min_diam, kInf)) {
        const double s = curve_dimension(p.loop.vertices(), 1.0, min_diam, static_cast<int>(scales));
        if (!std::isnan(s)) fp[i].push_back(s);
      }
    });
    // stop at the configuration where both counts are reached, whatever the batch size
    for (std::size_t i = 0; i < nb; ++i) {
      if (iface.size() >= static_cast<std::size_t>(min_loops) && perim.size() >= static_cast<std::size_t>(min_loops)) break;
      iface.insert(iface.end(), fi[i].begin(), fi[i].end());
      perim.insert(perim.end(), fp[i].begin(), fp[i].end());
      ++used;
    }
  }
  c.value("brownian_loops_tried", static_cast<double>(tried));
  c.value("percolation_configs", static_cast<double>(used));

  struct Family {
    const char* name;
    const std::vector<double>& v;
    double target;
    const char* ref;
  };
  for (const Family& f : {Family{"brownian_frontier", brown, 4.0 / 3, "4/3"}, Family{"percolation_interface", iface, 7.0 / 4, "7/4"},
                          Family{"percolation_perimeter", perim, 4.0 / 3, "4/3"}}) {
    const std::string n = f.name;
    c.check("count_" + n, static_cast<double>(f.v.size()), static_cast<double>(min_loops), kInf, "loops with large diameter");
    if (f.v.size() < 2) {
      c.check("dimension_" + n, kNaN, f.target - tol, f.target + tol, f.ref);
      continue;
    }
    const auto e = mean_ci(f.v);
    c.estimate("dimension_" + n, e);
    c.check_close("dimension_" + n, e.mean, f.target, tol, f.ref);
  }
}

void perc_vs_brownian_shapes(Context& c) {
  const auto L = c.p.integer("L"), min_shapes = c.p.integer("min_shapes"), batch = c.p.integer("batch");
  const auto max_configs = c.p.integer("max_configs"), bn = c.p.integer("brownian_n"), steps = c.p.integer("steps");
  const double d_lo = c.p.real("d_lo"), d_hi = c.p.real("d_hi"), h = c.p.real("h"), alpha = c.p.real("alpha");
  const double tol = c.p.real("tol_rel");
  c.need(min_shapes >= 2 && batch >= 1 && max_configs >= batch && bn >= 2 && steps >= 2 && h > 0, "bad shape parameters");

  std::vector<double> pa, pb;
  std::size_t configs = 0;
  for (std::uint64_t k = 0; pa.size() < static_cast<std::size_t>(min_shapes) && configs < static_cast<std::size_t>(max_configs); ++k) {
    const auto shapes = perimeter_shape_sample(static_cast<int>(L), d_lo, d_hi, static_cast<std::size_t>(batch), c.sub_seed(100 + k), c.jobs);
    for (const auto& s : shapes) {
      const auto f = shape_functionals(s);
      pa.push_back(f.area_over_diam2);
      pb.push_back(f.anisotropy);
    }
    configs += static_cast<std::size_t>(batch);
  }
  c.value("percolation_configs", static_cast<double>(configs));
  c.value("percolation_shapes", static_cast<double>(pa.size()));

  // frontier of a unit-time loop; the scale-invariant measure restricted to a
  // diameter window weighs each shape by its diameter squared
  std::vector<double> ba(static_cast<std::size_t>(bn)), bb(ba.size()), w(ba.size());
  parallel_for(ba.size(), c.jobs, [&](std::size_t i) {
    const auto b = sample_bridge(1.0, static_cast<int>(steps), c.sub_seed(1), i);
    const Points g = target_geometry(b.points, EventTarget::OuterBoundary, h);
    const double d = diameter(g);
    const Shape s = normalize_shape(SimpleLoop::by_construction(Loop(g)), NormalizeMode::TranslateAndScale, Provenance::BrownianHull);
    const auto f = shape_functionals(s);
    ba[i] = f.area_over_diam2;
    bb[i] = f.anisotropy;
    w[i] = d * d;
  });
  c.check("percolation_shape_count", static_cast<double>(pa.size()), static_cast<double>(min_shapes), kInf, "enough perimeters");
  if (pa.size() < 2) return;
  const std::vector<double> ones(pa.size(), 1.0);
  struct Functional {
    const char* name;
    const std::vector<double>& perc;
    const std::vector<double>& brown;
  };
  for (const Functional& f : {Functional{"area_over_diam2", pa, ba}, Functional{"anisotropy", pb, bb}}) {
    const std::string n = f.name;
    const auto ks = ks_statistic_weighted(f.perc, ones, f.brown, w);
    c.value("ks_d_" + n, ks.d);
    c.value("ks_p_asymptotic_" + n, ks.p_value);
    c.check("ks_" + n, ks.p_value, alpha, 1.0, "same law (asymptotic p-value)");
    const auto ep = mean_ci(f.perc);
    const auto eb = weighted_mean_ci(f.brown, w);
    c.estimate("percolation_mean_" + n, ep);
    c.estimate("brownian_mean_" + n, eb);
    c.check("mean_rel_" + n, ep.mean / eb.mean - 1, -tol, tol, "equal means");
  }
}

void saw(Context& c) {
  const auto n_max = c.p.integer("n_max"), width = c.p.integer("width");
  double lambda = c.p.real("lambda");
  const auto sides_d = c.p.reals("sides");
  c.need(n_max >= 10 && width >= 1 && lambda >= 0 && sides_d.size() >= 3, "bad saw parameters");
  std::vector<int> sides;
  for (double s : sides_d) {
    c.need(s == std::floor(s) && s - 2 * width >= 1, "frame sides must be integers leaving a hole");
    sides.push_back(static_cast<int>(s));
  }
  const auto census = enumerate_saps(static_cast<int>(n_max), 22, {'E', 'N', 'W', 'S'}, c.jobs);
  static const std::int64_t known[] = {1, 2, 7, 28, 124, 588, 2938, 15268, 81826, 449572};
  double mismatches = 0;
  for (int n = 4; n <= n_max; n += 2) {
    c.value("count_" + std::to_string(n), static_cast<double>(census.counts[static_cast<std::size_t>(n)]));
    if (n <= 22 && census.counts[static_cast<std::size_t>(n)] != known[(n - 4) / 2]) ++mismatches;
  }
  for (int n = 1; n <= n_max; n += 2) mismatches += census.counts[static_cast<std::size_t>(n)] != 0;
  c.check("census_known_counts", mismatches, 0, 0, "published polygon counts, odd lengths empty");

  const auto ce = connective_estimate(census);
  for (std::size_t k = 0; k < ce.n.size(); ++k) c.value("lambda_hat_" + std::to_string(ce.n[k]), ce.lambda_hat[k]);
  c.value("lambda_extrapolated", ce.extrapolated);
  c.check("lambda_hat_min", *std::min_element(ce.lambda_hat.begin(), ce.lambda_hat.end()), 1 + 1e-12, kInf, "in (1, 3)");
  c.check("lambda_hat_max", *std::max_element(ce.lambda_hat.begin(), ce.lambda_hat.end()), -kInf, 3 - 1e-12, "in (1, 3)");
  const std::size_t m = ce.lambda_hat.size();
  c.check("lambda_hat_settling",
          std::abs(ce.lambda_hat[m - 1] - ce.lambda_hat[m - 2]) - std::abs(ce.lambda_hat[1] - ce.lambda_hat[0]), -kInf, -kTiny,
          "late ratio steps smaller than early ones");
  if (lambda == 0) lambda = ce.extrapolated;
  c.value("lambda_used", lambda);

  const auto face = sap_mass(Surrounds{Point(0.5, 0.5)}, census, lambda);
  c.value("face_mass", face.mass);
  c.check("face_anchor_4", face.by_length.at(4) * std::pow(lambda, 4) - 1, -1e-12, 1e-12, "one square");
  c.check("face_anchor_6", face.by_length.at(6) * std::pow(lambda, 6) - 4, -1e-12, 1e-12, "four dominoes");

  const auto decay = annulus_decay(sides, static_cast<int>(width), lambda, census);
  std::vector<double> x, y, all_sides, masses;
  for (const auto& f : decay) {
    c.value("frame_mass_s=" + std::to_string(f.side), f.mass);
    if (f.truncated_to_zero) c.note("frame side " + std::to_string(f.side) + " needs length " + std::to_string(f.min_length) + " > n_max");
    masses.push_back(f.mass);
    all_sides.push_back(f.side);
    if (f.mass > 0) {
      x.push_back(f.side);
      y.push_back(std::log(f.mass));
    }
  }
  double worst = kInf;
  for (std::size_t k = 1; k < masses.size(); ++k) worst = std::min(worst, masses[k - 1] - masses[k]);
  c.check("frame_mass_decreasing", worst, kTiny, kInf, "strictly decreasing in the side");
  const double r2 = x.size() >= 3 ? linear_fit(x, y).r2 : kNaN;
  c.value("frame_fit_r2", r2);
  c.check("frame_fit_r2", r2, c.p.real("min_r2"), 1.0, "log mass linear in the side");
  c.plot("frames", Plot{"Square-frame loop mass", "side", "mass", false, true, {{"mass", all_sides, masses}}});
}

}  // namespace loops::detail
