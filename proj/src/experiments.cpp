#include "loops/experiments.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "experiment_context.hpp"
#include "loops/error.hpp"

namespace loops {

namespace detail {

const std::string& Params::text(const std::string& key) const {
  const auto it = v_.find(key);
  require(it != v_.end(), ErrorCode::InvalidConfig, "missing parameter " + key);
  return it->second;
}

namespace {

double parse_real(const std::string& key, const std::string& s) {
  auto one = [&](std::string_view t) {
    double v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    require(r.ec == std::errc() && r.ptr == t.data() + t.size() && !t.empty(), ErrorCode::InvalidConfig,
            key + ": not a number: " + s);
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return one(s);
  const double den = one(std::string_view(s).substr(slash + 1));
  require(den != 0, ErrorCode::InvalidConfig, key + ": zero denominator");
  return one(std::string_view(s).substr(0, slash)) / den;
}

}  // namespace

double Params::real(const std::string& key) const { return parse_real(key, text(key)); }

std::int64_t Params::integer(const std::string& key) const {
  const std::string& s = text(key);
  std::int64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  require(r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty(), ErrorCode::InvalidConfig,
          key + ": not an integer: " + s);
  return v;
}

bool Params::flag(const std::string& key) const {
  const std::string& s = text(key);
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  fail(ErrorCode::InvalidConfig, key + ": expected 0/1/true/false");
}

std::vector<double> Params::reals(const std::string& key) const {
  std::vector<double> out;
  const std::string& s = text(key);
  std::size_t b = 0;
  while (b <= s.size()) {
    const auto e = s.find(',', b);
    std::string item = s.substr(b, e == std::string::npos ? std::string::npos : e - b);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    out.push_back(parse_real(key, item));
    if (e == std::string::npos) break;
    b = e + 1;
  }
  return out;
}

void Context::need(bool cond, const std::string& what) const { require(cond, ErrorCode::InvalidConfig, what); }

}  // namespace detail

namespace {

using Body = void (*)(detail::Context&);

struct Entry {
  ExperimentInfo info;
  Body body;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e{
      {{"area-pi5",
        "expected hull area of a unit-time Brownian loop, Richardson extrapolated over two resolutions",
        {{"T", "1", "loop time"},
         {"n", "100000", "bridges"},
         {"steps", "65536", "bridge steps"},
         {"h", "1/512", "coarse raster cell; the fine level is h/2"},
         {"exponent", "2/3", "assumed resolution error exponent"},
         {"coupled", "1", "thin the bridge with the resolution"},
         {"tol_rel", "0.03", "relative tolerance against pi T / 5"}}},
       detail::area_pi5},
      {{"n0-normalization",
        "N0 mass of max radius in [1, e^r]",
        {{"radii", "1,2", "values of r"},
         {"window_lo", "0.5", "scale window"},
         {"window_hi", "10", "scale window"},
         {"n", "200", "shapes"},
         {"steps", "4096", "bridge steps"},
         {"tol", "1e-9", "absolute tolerance"}}},
       detail::n0_normalization},
      {{"restriction",
        "nu mass of loops hitting a radial slit versus log Phi'(0), plus additivity over a composed double slit",
        {{"radii", "0.3,0.5,0.7", "slit radii"},
         {"n", "20000", "N0 shapes"},
         {"steps", "65536", "bridge steps"},
         {"h", "1/1024", "raster cell for outer boundaries"},
         {"window_lo", "0.14", "scale window"},
         {"window_hi", "1.05", "scale window"},
         {"wos_n", "200000", "walk-on-spheres samples per domain"},
         {"wos_eps", "1e-5", "absorption shell"},
         {"tol_rel", "0.05", "relative tolerance"},
         {"tol_se", "2", "tolerance in pooled standard errors"},
         {"r1", "0.5", "first slit radius of the composed domain"},
         {"r2", "0.5", "second slit radius (in the mapped disc)"},
         {"theta", "1.5707963267948966", "second slit angle"},
         {"pieces", "400", "polyline pieces of the composed slit"}}},
       detail::restriction},
      {{"m-vs-n0-ratio",
        "M mass over nu mass of loops surrounding 0 with diameter in a window",
        {{"n", "20000", "bridges for M"},
         {"draws", "64", "(z, T) draws per bridge"},
         {"steps", "16384", "bridge steps"},
         {"h", "1/512", "raster cell (unit time)"},
         {"diam_lo", "1", "diameter window"},
         {"diam_hi", "2", "diameter window"},
         {"K", "2", "half side of the root box"},
         {"T_lo", "0.05", "time window"},
         {"T_hi", "20", "time window"},
         {"nu_n", "20000", "N0 shapes"},
         {"window_lo", "0.45", "N0 scale window"},
         {"window_hi", "2.2", "N0 scale window"},
         {"tol_rel", "0.1", "relative tolerance against pi/5"}}},
       detail::m_vs_n0_ratio},
      {{"inner-outer-symmetry",
        "annulus-hole masses of outer boundaries versus inner boundaries under M",
        {{"rhos", "1,2,3", "annulus moduli"},
         {"n", "200000", "bridges"},
         {"steps", "16384", "bridge steps"},
         {"h", "1/256", "raster cell"},
         {"k_se", "2", "tolerance in pooled standard errors"}}},
       detail::inner_outer_symmetry},
      {{"two-sided-count",
        "raster area bookkeeping of filled hulls over refining resolutions",
        {{"n", "100", "loops"},
         {"steps", "8388608", "bridge steps"},
         {"h0", "1/2048", "coarsest cell"},
         {"levels", "3", "resolutions h0, h0/2, ..."},
         {"min_ratio", "0.7", "required inner share at the finest level"}}},
       detail::two_sided_count},
      {{"annulus-mass",
        "F(rho): scale and conformal invariance, decay in 1/rho",
        {{"rhos", "0.8,1,1.2,1.4,1.6,1.8,2", "moduli of the decay fit"},
         {"n", "400000", "bridges"},
         {"steps", "4096", "bridge steps"},
         {"h", "1/128", "raster cell"},
         {"scale_rho", "1.5", "modulus of the fixed-annulus comparison"},
         {"scale_n", "20000", "bridges per fixed annulus"},
         {"scale_draws", "64", "(z, T) draws per bridge"},
         {"scale_steps", "4096", "bridge steps"},
         {"scale_T_lo", "0.02", "time window at inner radius 1"},
         {"scale_T_hi", "50", "time window at inner radius 1"},
         {"frame_ratio", "0.25", "inner over outer side of the square frame"},
         {"mask_n", "512", "modulus mask resolution"},
         {"tol_rel", "0.1", "square frame versus round annulus"},
         {"min_r2", "0.9", "decay fit"}}},
       detail::annulus_mass},
      {{"winding-spectrum",
        "areas of winding-index sets",
        {{"T", "1", "loop time"},
         {"n", "20000", "loops"},
         {"steps", "16384", "bridge steps"},
         {"h", "1/256", "raster cell"},
         {"n_max", "4", "largest |index|"},
         {"k_se", "3", "tolerance in standard errors"}}},
       detail::winding_spectrum},
      {{"components",
        "count of inner components with area at least u",
        {{"T", "1", "loop time"},
         {"n", "100", "loops"},
         {"steps", "4194304", "bridge steps"},
         {"h", "1/4096", "raster cell"},
         {"u_lo", "1e-5", "smallest area"},
         {"u_hi", "1e-4", "largest area"},
         {"points", "5", "areas on the log ladder"},
         {"band_lo", "0.5", "accepted band of u log(1/u)^2 N(u) / 2 pi"},
         {"band_hi", "2", "accepted band"}}},
       detail::components},
      {{"ergodic-shapes",
        "shape average over one loop's largest components against the hull-shape mean (reported)",
        {{"n_loops", "20", "large loops"},
         {"steps", "4194304", "bridge steps"},
         {"h", "1/4096", "raster cell"},
         {"components", "20", "largest components per loop"},
         {"ensemble_n", "2000", "loops for the hull-shape mean"},
         {"ensemble_steps", "16384", "bridge steps"},
         {"ensemble_h", "1/256", "raster cell"},
         {"tol_rel", "0.1", "reported agreement level"}}},
       detail::ergodic_shapes},
      {{"dimensions",
        "box-counting dimensions of Brownian frontiers and percolation interfaces and perimeters",
        {{"n_loops", "200", "Brownian frontiers"},
         {"steps", "65536", "bridge steps"},
         {"h", "1/256", "raster cell"},
         {"min_diam", "128", "minimal diameter in cells or lattice units"},
         {"scales", "6", "box sizes per fit"},
         {"max_tries", "2000", "Brownian loops drawn at most"},
         {"L", "1024", "percolation box"},
         {"max_configs", "200", "percolation configurations at most"},
         {"min_loops", "200", "loops required per family"},
         {"tol", "0.1", "absolute tolerance"}}},
       detail::dimensions},
      {{"perc-vs-brownian-shapes",
        "shape laws of percolation perimeters and Brownian frontiers",
        {{"L", "512", "percolation box"},
         {"d_lo", "64", "perimeter diameter window"},
         {"d_hi", "128", "perimeter diameter window"},
         {"min_shapes", "2000", "perimeters required"},
         {"batch", "50", "configurations per batch"},
         {"max_configs", "8000", "configurations at most"},
         {"brownian_n", "2000", "Brownian frontiers"},
         {"steps", "65536", "bridge steps"},
         {"h", "1/1024", "raster cell"},
         {"alpha", "0.001", "KS level"},
         {"tol_rel", "0.03", "relative tolerance on means"}}},
       detail::perc_vs_brownian_shapes},
      {{"saw",
        "self-avoiding polygon census, face anchors, connective ratios and square-frame decay",
        {{"n_max", "22", "longest polygon"},
         {"lambda", "0", "weight base; 0 uses the extrapolated ratio"},
         {"sides", "3,4,5,6,7", "frame sides"},
         {"width", "1", "frame width"},
         {"min_r2", "0.9", "decay fit"}}},
       detail::saw},
      {{"two-root",
        "outer-boundary masses rooted at 0 and at another point for events surrounding both",
        {{"zx", "0.3", "second root"},
         {"zy", "0", "second root"},
         {"diams", "0.5,1,2,4", "diameter band edges"},
         {"n", "20000", "shapes"},
         {"steps", "16384", "bridge steps"},
         {"h", "1/512", "raster cell"},
         {"window_lo", "0.1", "scale window"},
         {"window_hi", "5", "scale window"},
         {"k_se", "3", "tolerance in pooled standard errors"}}},
       detail::two_root},
  };
  return e;
}

const Entry& entry(const std::string& name) {
  for (const auto& e : entries())
    if (e.info.name == name) return e;
  fail(ErrorCode::UnknownExperiment, "unknown experiment " + name);
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> r = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return r;
}

const ExperimentInfo& experiment_info(const std::string& name) { return entry(name).info; }

std::map<std::string, std::string> resolve_config(const ExperimentConfig& c) {
  const auto& info = experiment_info(c.experiment);
  std::map<std::string, std::string> out{{"seed", "1"}};
  for (const auto& p : info.params) out[p.name] = p.default_value;
  for (const auto& [k, v] : c.values) {
    require(out.count(k) > 0, ErrorCode::InvalidConfig, "unknown key " + k + " for " + c.experiment);
    out[k] = v;
  }
  return out;
}

RunRecord run(const ExperimentConfig& c, const RunOptions& o) {
  const Entry& e = entry(c.experiment);
  RunRecord rec;
  rec.experiment = c.experiment;
  rec.config = resolve_config(c);
  if (o.seed) rec.config["seed"] = std::to_string(*o.seed);
  detail::Context ctx{detail::Params(rec.config), 0, o.jobs, rec, {}};
  const auto seed = ctx.p.integer("seed");
  ctx.need(seed >= 0, "seed must be nonnegative");
  ctx.seed = rec.seed = static_cast<std::uint64_t>(seed);
  rec.started = utc_now();
  try {
    e.body(ctx);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::InvalidConfig || err.code() == ErrorCode::UnknownExperiment) throw;
    rec.error = err.what();
  }
  rec.finished = utc_now();

  if (o.write_artifacts && !c.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(c.out_dir);
    const std::string stem = c.experiment + "-seed" + std::to_string(rec.seed);
    {
      const std::string name = stem + ".csv";
      std::ofstream out(fs::path(c.out_dir) / name);
      write_csv(out, record_table(rec));
      rec.artifacts.push_back(name);
    }
    for (const auto& [tag, plot] : ctx.plots) {
      const std::string name = stem + "-" + tag + ".svg";
      std::ofstream out(fs::path(c.out_dir) / name);
      out << render_svg(plot);
      rec.artifacts.push_back(name);
    }
    append_record((fs::path(c.out_dir) / "records.jsonl").string(), rec);
  }
  return rec;
}

}  // namespace loops
