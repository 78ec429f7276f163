#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "experiment_context.hpp"
#include "loops/brownian.hpp"
#include "loops/conformal.hpp"
#include "loops/error.hpp"
#include "loops/parallel.hpp"

namespace loops::detail {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Estimate scaled(const Estimate& e, double s) { return Estimate{e.mean * s, e.half_width_95 * std::abs(s), e.n_effective}; }

double pooled_se(std::initializer_list<Estimate> es) {
  double s = 0;
  for (const auto& e : es) s += e.se() * e.se();
  return std::sqrt(s);
}

PlanarDomain slit_domain(double r, double angle) {
  PlanarDomain d = PlanarDomain::disc(Point::Zero(), 1.0);
  const Point u(std::cos(angle), std::sin(angle));
  d.add_slit(r * u, u);
  return d;
}

LoopEvent hits(const PlanarDomain& smaller) {
  return LoopEvent(ContainedIn{PlanarDomain::disc(Point::Zero(), 1.0)}) && Exits{smaller};
}

SamplerOptions sampler(const Context& c, std::int64_t n, std::int64_t steps, double h, std::uint64_t stream) {
  c.need(n >= 2, "sample count must be at least 2");
  c.need(steps >= 2 && steps <= (std::int64_t{1} << 26), "steps out of range");
  c.need(h > 0, "resolution must be positive");
  SamplerOptions o;
  o.n_samples = static_cast<std::size_t>(n);
  o.n_steps = static_cast<int>(steps);
  o.hull_resolution = h;
  o.seed = c.sub_seed(stream);
  o.jobs = c.jobs;
  return o;
}

// Min successive difference of a sequence; positive iff strictly increasing.
double min_step(const std::vector<double>& v) {
  double m = kInf;
  for (std::size_t k = 1; k < v.size(); ++k) m = std::min(m, v[k] - v[k - 1]);
  return m;
}

}  // namespace

void area_pi5(Context& c) {
  const double T = c.p.real("T"), h = c.p.real("h"), exponent = c.p.real("exponent"), tol = c.p.real("tol_rel");
  const auto n = c.p.integer("n"), steps = c.p.integer("steps");
  c.need(n >= 2, "n must be at least 2");
  c.need(T > 0 && h > 0 && steps >= 2 && exponent > 0 && tol >= 0, "bad area-pi5 parameters");
  const auto s = hull_area_study(T, static_cast<int>(steps), static_cast<std::size_t>(n), {h, h / 2}, c.seed, exponent,
                                 c.p.flag("coupled"), c.jobs);
  c.estimate("area_h", s.area[0]);
  c.estimate("area_h_half", s.area[1]);
  c.estimate("extrapolated", s.extrapolated);
  const double target = std::numbers::pi * T / 5;
  c.value("target", target);
  c.check("extrapolated_rel_error", s.extrapolated.mean / target - 1, -tol, tol, "pi T / 5");
  Plot p{"Expected hull area", "h", "area", false, false, {}};
  p.series.push_back({"raster estimate", {h, h / 2}, {s.area[0].mean, s.area[1].mean}});
  p.series.push_back({"extrapolated", {0.0}, {s.extrapolated.mean}});
  p.series.push_back({"pi T / 5", {0.0, h}, {target, target}});
  c.plot("area", std::move(p));
}

void n0_normalization(Context& c) {
  const auto radii = c.p.reals("radii");
  const double lo = c.p.real("window_lo"), hi = c.p.real("window_hi"), tol = c.p.real("tol");
  c.need(!radii.empty(), "radii must be nonempty");
  std::vector<LoopEvent> events;
  for (double r : radii) {
    c.need(r > 0, "radii must be positive");
    events.push_back(MaxRadiusIn{1.0, std::exp(r)});
  }
  auto o = sampler(c, c.p.integer("n"), c.p.integer("steps"), 1.0 / 256, 1);
  const auto m = estimate_N0_masses(events, EventTarget::Trace, ScaleWindow{lo, hi}, o);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const std::string tag = "r=" + fmt_num(radii[k]);
    c.estimate("mass_" + tag, m[k].estimate);
    c.value("window_violations_" + tag, static_cast<double>(m[k].window_violations));
    c.check_close("mass_" + tag, m[k].estimate.mean, radii[k], tol, "r");
  }
}

void restriction(Context& c) {
  const auto radii = c.p.reals("radii");
  const double tol_rel = c.p.real("tol_rel"), tol_se = c.p.real("tol_se");
  const double r1 = c.p.real("r1"), r2 = c.p.real("r2"), theta = c.p.real("theta");
  const auto wos_n = c.p.integer("wos_n"), pieces = c.p.integer("pieces");
  const double eps = c.p.real("wos_eps");
  c.need(!radii.empty(), "radii must be nonempty");
  for (double r : radii) c.need(r > 0 && r < 1, "slit radii must lie in (0, 1)");
  c.need(r1 > 0 && r1 < 1 && r2 > 0 && r2 < 1, "composed slit radii must lie in (0, 1)");
  c.need(wos_n >= 2 && eps > 0 && pieces >= 2, "bad walk-on-spheres parameters");

  std::vector<LoopEvent> events;
  std::vector<PlanarDomain> domains;
  for (double r : radii) domains.push_back(slit_domain(r, 0));
  domains.push_back(composed_slit_domain(r1, r2, theta, static_cast<int>(pieces)));
  domains.push_back(slit_domain(r1, 0));
  domains.push_back(slit_domain(r2, theta));
  for (const auto& d : domains) events.push_back(hits(d));

  auto o = sampler(c, c.p.integer("n"), c.p.integer("steps"), c.p.real("h"), 1);
  const auto nu = estimate_nu_masses(events, ScaleWindow{c.p.real("window_lo"), c.p.real("window_hi")}, o);
  std::vector<Estimate> wos;
  for (std::size_t k = 0; k < domains.size(); ++k)
    wos.push_back(log_deriv_at_zero(domains[k], static_cast<std::size_t>(wos_n), eps, c.sub_seed(100 + k), c.jobs));

  for (std::size_t k = 0; k < radii.size(); ++k) {
    const std::string tag = "r=" + fmt_num(radii[k]);
    const double target = slit_capacity(radii[k]);
    c.estimate("nu_" + tag, nu[k].estimate);
    c.estimate("logderiv_" + tag, wos[k]);
    c.value("formula_" + tag, target);
    c.value("window_violations_" + tag, static_cast<double>(nu[k].window_violations));
    const double rel = tol_rel * target;
    c.check_close("nu_vs_logderiv_" + tag, nu[k].estimate.mean, wos[k].mean,
                  std::max(rel, tol_se * pooled_se({nu[k].estimate, wos[k]})), "log Phi'(0) by walk on spheres");
    c.check_close("nu_vs_formula_" + tag, nu[k].estimate.mean, target, std::max(rel, tol_se * nu[k].estimate.se()),
                  "log((1+r)^2/(4r))");
    c.check_close("logderiv_vs_formula_" + tag, wos[k].mean, target, std::max(rel, tol_se * wos[k].se()),
                  "log((1+r)^2/(4r))");
  }

  const std::size_t u = radii.size();
  const Estimate &mu = nu[u].estimate, &m1 = nu[u + 1].estimate, &m2 = nu[u + 2].estimate;
  c.estimate("nu_composed", mu);
  c.estimate("nu_slit1", m1);
  c.estimate("nu_slit2", m2);
  std::vector<double> diff(nu[u].values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = nu[u].values[i] - nu[u + 1].values[i] - nu[u + 2].values[i];
  c.estimate("additivity_paired_difference", mean_ci(diff));
  const double hw = std::sqrt(mu.half_width_95 * mu.half_width_95 + m1.half_width_95 * m1.half_width_95 +
                              m2.half_width_95 * m2.half_width_95);
  c.check_close("additivity", mu.mean, m1.mean + m2.mean, hw, "sum of single-slit masses, pooled 95% interval");
  c.estimate("logderiv_composed", wos[u]);
  const double cap_sum = slit_capacity(r1) + slit_capacity(r2);
  c.value("capacity_sum", cap_sum);
  c.check_close("logderiv_composed_vs_sum", wos[u].mean, cap_sum, std::max(tol_rel * cap_sum, tol_se * wos[u].se()),
                "sum of slit capacities");
}

void m_vs_n0_ratio(Context& c) {
  const double dlo = c.p.real("diam_lo"), dhi = c.p.real("diam_hi"), K = c.p.real("K");
  const double tol = c.p.real("tol_rel");
  c.need(dlo > 0 && dhi > dlo && K >= dhi, "need 0 < diam_lo < diam_hi <= K");
  const LoopEvent e = LoopEvent(Surrounds{Point::Zero()}) && DiameterIn{dlo, dhi};
  MWindow w;
  w.K = Box{Point(-K, -K), Point(K, K)};
  w.T_lo = c.p.real("T_lo");
  w.T_hi = c.p.real("T_hi");
  const auto draws = c.p.integer("draws");
  c.need(draws >= 1, "draws must be positive");
  w.draws_per_bridge = static_cast<int>(draws);
  const double h = c.p.real("h");
  const auto steps = c.p.integer("steps");
  const auto m = estimate_M_mass(e, EventTarget::OuterBoundary, w, sampler(c, c.p.integer("n"), steps, h, 1));
  const auto nu = estimate_nu_mass(e, ScaleWindow{c.p.real("window_lo"), c.p.real("window_hi")},
                                   sampler(c, c.p.integer("nu_n"), steps, h, 2));
  c.estimate("M_mass", m.estimate);
  c.estimate("nu_mass", nu.estimate);
  c.value("nu_window_violations", static_cast<double>(nu.window_violations));
  const double a = m.estimate.mean, b = nu.estimate.mean;
  const double ratio = a / b;
  const double se = std::abs(ratio) * std::hypot(m.estimate.se() / a, nu.estimate.se() / b);
  c.estimate("ratio", Estimate{ratio, 1.959963984540054 * se, std::min(m.estimate.n_effective, nu.estimate.n_effective)});
  c.check("ratio_rel_error", ratio / (std::numbers::pi / 5) - 1, -tol, tol, "pi / 5");
}

void inner_outer_symmetry(Context& c) {
  const auto rhos = c.p.reals("rhos");
  const double k = c.p.real("k_se");
  c.need(!rhos.empty(), "rhos must be nonempty");
  const auto o = sampler(c, c.p.integer("n"), c.p.integer("steps"), c.p.real("h"), 1);
  const auto outer = estimate_M_annulus_masses(rhos, BoundarySide::Outer, Gauge::Euclidean, o);
  const auto inner = estimate_M_annulus_masses(rhos, BoundarySide::Inner, Gauge::Euclidean, o);
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const std::string tag = "rho=" + fmt_num(rhos[i]);
    c.estimate("outer_" + tag, outer[i].estimate);
    c.estimate("inner_" + tag, inner[i].estimate);
    c.check_close("symmetry_" + tag, outer[i].estimate.mean, inner[i].estimate.mean,
                  k * pooled_se({outer[i].estimate, inner[i].estimate}), "outer equals inner");
  }
}

void two_sided_count(Context& c) {
  const auto n = c.p.integer("n"), steps = c.p.integer("steps"), levels = c.p.integer("levels");
  const double h0 = c.p.real("h0"), min_ratio = c.p.real("min_ratio");
  c.need(n >= 2 && steps >= 2 && levels >= 2 && h0 > 0, "bad two-sided-count parameters");
  const auto L = static_cast<std::size_t>(levels), N = static_cast<std::size_t>(n);
  std::vector<double> ratio(N * L);
  std::vector<std::int64_t> violations(N, 0);
  parallel_for(N, c.jobs, [&](std::size_t i) {
    const auto b = sample_bridge(1.0, static_cast<int>(steps), c.sub_seed(1), i);
    for (std::size_t l = 0; l < L; ++l) {
      RasterGrid g = rasterize(b.points, std::ldexp(h0, -static_cast<int>(l)));
      const std::int64_t filled = filled_cell_count(g);
      const auto d = decompose(std::move(g));
      std::int64_t inner = 0;
      for (std::size_t k = 1; k < d.cell_count.size(); ++k) inner += d.cell_count[k];
      if (filled != d.marked + inner) ++violations[i];
      ratio[i * L + l] = static_cast<double>(inner) / static_cast<double>(filled);
    }
  });
  std::vector<double> means;
  Plot p{"Inner share of the filled hull", "h", "sum of inner areas / filled area", true, false, {}};
  Series s{"batch mean", {}, {}};
  for (std::size_t l = 0; l < L; ++l) {
    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = ratio[i * L + l];
    const auto e = mean_ci(v);
    const double h = std::ldexp(h0, -static_cast<int>(l));
    c.estimate("inner_share_h=" + fmt_num(h), e);
    means.push_back(e.mean);
    s.x.push_back(h);
    s.y.push_back(e.mean);
  }
  p.series.push_back(std::move(s));
  c.plot("share", std::move(p));
  const double total = static_cast<double>(std::accumulate(violations.begin(), violations.end(), std::int64_t{0}));
  c.check("identity_violations", total, 0, 0, "filled = marked + inner, per sample");
  c.check("share_increasing", min_step(means), kTiny, kInf, "strictly increasing under refinement");
  c.check("share_finest", means.back(), min_ratio, 1.0, "exceeds min_ratio at the finest level");
}

void annulus_mass(Context& c) {
  auto rhos = c.p.reals("rhos");
  std::sort(rhos.begin(), rhos.end());
  c.need(rhos.size() >= 3, "need at least 3 moduli");
  for (double r : rhos) c.need(r > 0, "moduli must be positive");
  const double frame_ratio = c.p.real("frame_ratio"), tol = c.p.real("tol_rel"), srho = c.p.real("scale_rho");
  const auto mask_n = c.p.integer("mask_n");
  c.need(frame_ratio > 0 && frame_ratio < 1 && mask_n >= 16 && srho > 0, "bad frame or scale parameters");

  const double rho_sq = modulus_estimate(square_frame_mask(frame_ratio, static_cast<int>(mask_n)));
  c.value("square_frame_modulus", rho_sq);
  std::vector<double> all = rhos;
  all.push_back(rho_sq);
  all.push_back(srho);
  const auto o = sampler(c, c.p.integer("n"), c.p.integer("steps"), c.p.real("h"), 1);
  const auto round = estimate_M_annulus_masses(all, BoundarySide::Outer, Gauge::Euclidean, o);
  const auto square = estimate_M_annulus_masses({std::log(1 / frame_ratio)}, BoundarySide::Outer, Gauge::Chebyshev, o);

  // decay in 1/rho
  std::vector<double> F, x, y;
  bool positive = true;
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    c.estimate("F_rho=" + fmt_num(rhos[k]), round[k].estimate);
    F.push_back(round[k].estimate.mean);
    positive = positive && F.back() > 0;
    x.push_back(1 / rhos[k]);
    y.push_back(std::log(F.back()));
  }
  c.check("F_increasing_in_rho", min_step(F), kTiny, kInf, "log F decreasing in 1/rho");
  double r2 = std::numeric_limits<double>::quiet_NaN();
  if (positive) {
    const auto fit = linear_fit(x, y);
    r2 = fit.r2;
    c.estimate("decay_rate", Estimate{-fit.slope, 1.959963984540054 * fit.slope_se, static_cast<double>(x.size())});
    c.note("decay_rate is reported against the small-rho rate 5 pi^2 / 4 = " + fmt_num(5 * std::numbers::pi * std::numbers::pi / 4) +
           " without a bound");
  } else {
    c.note("some F estimates are zero; no decay fit");
  }
  c.value("decay_fit_r2", r2);
  c.check("decay_fit_r2", r2, c.p.real("min_r2"), 1.0, "linear in 1/rho");
  Plot p{"Annulus mass", "1/rho", "F", false, true, {{"F estimate", x, F}}};
  c.plot("decay", std::move(p));

  // conformal invariance: square frame against the round annulus of equal modulus
  const Estimate& fr = round[rhos.size()].estimate;
  const Estimate& fs = square[0].estimate;
  c.estimate("F_round_at_frame_modulus", fr);
  c.estimate("F_square_frame", fs);
  c.check("square_vs_round_rel", fs.mean / fr.mean - 1, -tol, tol, "equal modulus gives equal mass");

  // scale invariance with the literal estimator on fixed annuli
  const double T_lo = c.p.real("scale_T_lo"), T_hi = c.p.real("scale_T_hi");
  const auto draws = c.p.integer("scale_draws");
  c.need(T_lo > 0 && T_hi > T_lo && draws >= 1, "bad scale window");
  std::vector<Estimate> fixed;
  for (double a : {1.0, 2.0}) {
    const double R = a * std::exp(srho);
    MWindow w;
    w.K = Box{Point(-R, -R), Point(R, R)};
    w.T_lo = T_lo * a * a;
    w.T_hi = T_hi * a * a;
    w.draws_per_bridge = static_cast<int>(draws);
    auto so = sampler(c, c.p.integer("scale_n"), c.p.integer("scale_steps"), c.p.real("h"), a == 1.0 ? 11 : 12);
    const auto m = estimate_M_mass(SurroundsAnnulusHole{AnnulusSpec(Point::Zero(), a, R)}, EventTarget::OuterBoundary, w, so);
    fixed.push_back(m.estimate);
    c.estimate("F_fixed_inner_radius=" + fmt_num(a), m.estimate);
  }
  c.estimate("F_integrated_rho=" + fmt_num(srho), round.back().estimate);
  c.check_close("scale_invariance", fixed[0].mean, fixed[1].mean,
                std::hypot(fixed[0].half_width_95, fixed[1].half_width_95), "(1, e^rho) against (2, 2 e^rho)");
}

void winding_spectrum(Context& c) {
  const double T = c.p.real("T"), h = c.p.real("h"), k = c.p.real("k_se");
  const auto n = c.p.integer("n"), steps = c.p.integer("steps"), n_max = c.p.integer("n_max");
  c.need(T > 0 && h > 0 && n >= 2 && steps >= 2 && n_max >= 1, "bad winding-spectrum parameters");
  const auto ws = winding_area_spectrum(T, static_cast<int>(steps), static_cast<std::size_t>(n), h, c.seed,
                                        static_cast<int>(n_max), c.jobs);
  Plot p{"Winding spectrum", "index", "E[A_n]", false, false, {{"E[A_n]", {}, {}}}};
  for (const auto& [idx, e] : ws.area) {
    c.estimate("A_" + std::to_string(idx), e);
    p.series[0].x.push_back(idx);
    p.series[0].y.push_back(e.mean);
  }
  c.plot("spectrum", std::move(p));
  c.estimate("hull_area", ws.hull_area);
  c.estimate("first_moment", ws.first_moment);
  c.check("first_moment", ws.first_moment.mean, -k * ws.first_moment.se(), k * ws.first_moment.se(), "sum n E[A_n] = 0");
  for (int i = 1; i <= n_max; ++i) {
    const Estimate &a = ws.area.at(i), &b = ws.area.at(-i);
    c.check_close("symmetry_" + std::to_string(i), a.mean, b.mean, k * pooled_se({a, b}), "E[A_n] = E[A_-n]");
  }
}

void components(Context& c) {
  const double T = c.p.real("T"), h = c.p.real("h"), u_lo = c.p.real("u_lo"), u_hi = c.p.real("u_hi");
  const auto n = c.p.integer("n"), steps = c.p.integer("steps"), points = c.p.integer("points");
  c.need(T > 0 && h > 0 && n >= 2 && steps >= 2 && points >= 2 && u_lo > 0 && u_hi > u_lo && u_hi < 1,
         "bad components parameters");
  std::vector<double> us;
  for (int k = 0; k < points; ++k) us.push_back(u_lo * std::pow(u_hi / u_lo, static_cast<double>(k) / (points - 1)));
  const auto N = static_cast<std::size_t>(n), P = us.size();
  std::vector<double> counts(N * P);
  parallel_for(N, c.jobs, [&](std::size_t i) {
    const auto b = sample_bridge(T, static_cast<int>(steps), c.sub_seed(1), i);
    const auto d = decompose(rasterize(b.points, h));
    const auto s = area_spectrum(d, us);
    for (std::size_t k = 0; k < P; ++k) counts[i * P + k] = static_cast<double>(s[k]);
  });
  Plot p{"Normalized component count", "u", "u log(1/u)^2 N(u) / 2 pi", true, false, {{"estimate", {}, {}}}};
  for (std::size_t k = 0; k < P; ++k) {
    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = counts[i * P + k];
    const double u = us[k];
    const double f = u * std::log(1 / u) * std::log(1 / u) / (2 * std::numbers::pi);
    const auto e = scaled(mean_ci(v), f);
    const std::string tag = "u=" + fmt_num(u);
    c.estimate("normalized_count_" + tag, e);
    c.check("band_" + tag, e.mean, c.p.real("band_lo"), c.p.real("band_hi"), "2 pi / (u log(1/u)^2) law");
    p.series[0].x.push_back(u);
    p.series[0].y.push_back(e.mean);
  }
  c.note("the law is quoted for u -> infinity, which cannot fit log(1/u); read here as u -> 0+");
  c.plot("components", std::move(p));
}

void ergodic_shapes(Context& c) {
  const auto n_loops = c.p.integer("n_loops"), steps = c.p.integer("steps"), m = c.p.integer("components");
  const auto en = c.p.integer("ensemble_n"), esteps = c.p.integer("ensemble_steps");
  const double h = c.p.real("h"), eh = c.p.real("ensemble_h"), tol = c.p.real("tol_rel");
  c.need(n_loops >= 2 && steps >= 2 && m >= 1 && en >= 2 && esteps >= 2 && h > 0 && eh > 0, "bad ergodic-shapes parameters");

  std::vector<double> per_loop(static_cast<std::size_t>(n_loops));
  parallel_for(per_loop.size(), c.jobs, [&](std::size_t i) {
    const auto b = sample_bridge(1.0, static_cast<int>(steps), c.sub_seed(1), i);
    const auto d = decompose(rasterize(b.points, h));
    std::vector<int> labels(static_cast<std::size_t>(d.bounded_count()));
    std::iota(labels.begin(), labels.end(), 1);
    std::stable_sort(labels.begin(), labels.end(), [&](int a, int b2) {
      return d.cell_count[static_cast<std::size_t>(a)] > d.cell_count[static_cast<std::size_t>(b2)];
    });
    const std::size_t take = std::min<std::size_t>(labels.size(), static_cast<std::size_t>(m));
    double sum = 0;
    for (std::size_t k = 0; k < take; ++k) sum += shape_functionals(component_boundary(d, labels[k]).vertices()).area_over_diam2;
    per_loop[i] = take ? sum / static_cast<double>(take) : std::numeric_limits<double>::quiet_NaN();
  });
  std::vector<double> ens(static_cast<std::size_t>(en)), wts(ens.size());
  parallel_for(ens.size(), c.jobs, [&](std::size_t i) {
    const auto b = sample_bridge(1.0, static_cast<int>(esteps), c.sub_seed(2), i);
    const Points g = target_geometry(b.points, EventTarget::OuterBoundary, eh);
    const double d = diameter(g);
    ens[i] = shape_functionals(g).area_over_diam2;
    wts[i] = d * d;
  });
  const auto a = mean_ci(per_loop);
  const auto b = weighted_mean_ci(ens, wts);
  c.estimate("component_average", a);
  c.estimate("hull_shape_mean", b);
  c.estimate("hull_shape_mean_unweighted", mean_ci(ens));
  const double rel = a.mean / b.mean - 1;
  c.value("relative_difference", rel);
  c.note(std::string("component average ") + (std::abs(rel) <= tol ? "within " : "outside ") + fmt_num(100 * tol) +
         "% of the hull-shape mean (reported, not asserted)");
}

void two_root(Context& c) {
  const Point zt(c.p.real("zx"), c.p.real("zy"));
  auto edges = c.p.reals("diams");
  const double k = c.p.real("k_se");
  c.need(edges.size() >= 2, "need at least two diameter edges");
  std::sort(edges.begin(), edges.end());
  c.need(edges.front() > 0, "diameters must be positive");
  std::vector<LoopEvent> events;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    events.push_back(LoopEvent(Surrounds{Point::Zero()}) && Surrounds{zt} && DiameterIn{edges[i], edges[i + 1]});
  const auto o = sampler(c, c.p.integer("n"), c.p.integer("steps"), c.p.real("h"), 1);
  const auto r = two_root_agreement(zt, events, ScaleWindow{c.p.real("window_lo"), c.p.real("window_hi")}, o);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string tag = "diam=[" + fmt_num(edges[i]) + "," + fmt_num(edges[i + 1]) + "]";
    c.estimate("rooted_0_" + tag, r.rooted_at_zero[i].estimate);
    c.estimate("rooted_z_" + tag, r.rooted_at_ztilde[i].estimate);
    const auto& d = r.difference[i];
    c.check("difference_" + tag, d.diff, -k * d.pooled_se, k * d.pooled_se, "equal masses");
  }
}

}  // namespace loops::detail
