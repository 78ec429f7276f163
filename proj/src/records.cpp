#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "loops/error.hpp"
#include "loops/experiments.hpp"

namespace loops {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// NaN and infinities have no JSON spelling
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double unnum(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    require(!key.empty(), ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": empty key");
    require(!out.count(key), ErrorCode::InvalidConfig, "duplicate key " + key);
    out[key] = value;
  }
  return out;
}

ExperimentConfig load_config(const std::string& experiment, const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::InvalidConfig, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ExperimentConfig{experiment, parse_key_values(ss.str()), {}};
}

bool check_passes(const Check& c) { return c.lo <= c.value && c.value <= c.hi; }

bool RunRecord::passed() const {
  if (!error.empty()) return false;
  for (const auto& c : checks)
    if (!check_passes(c)) return false;
  return true;
}

const Estimate& RunRecord::estimate(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return e.estimate;
  fail(ErrorCode::InvalidParameter, "no estimate named " + name);
}

const Check& RunRecord::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  fail(ErrorCode::InvalidParameter, "no check named " + name);
}

std::string record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["config"] = r.config;
  j["seed"] = r.seed;
  j["started"] = r.started;
  j["finished"] = r.finished;
  j["estimates"] = nlohmann::json::array();
  for (const auto& e : r.estimates)
    j["estimates"].push_back({{"name", e.name},
                              {"mean", num(e.estimate.mean)},
                              {"half_width_95", num(e.estimate.half_width_95)},
                              {"n_effective", num(e.estimate.n_effective)}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name},
                           {"value", num(c.value)},
                           {"lo", num(c.lo)},
                           {"hi", num(c.hi)},
                           {"pass", c.pass},
                           {"reference", c.reference}});
  j["notes"] = r.notes;
  j["artifacts"] = r.artifacts;
  j["error"] = r.error;
  j["passed"] = r.passed();
  return j.dump();
}

RunRecord record_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidFormat, std::string("bad record: ") + e.what());
  }
  try {
    RunRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.started = j.at("started").get<std::string>();
    r.finished = j.at("finished").get<std::string>();
    for (const auto& e : j.at("estimates"))
      r.estimates.push_back({e.at("name").get<std::string>(),
                             Estimate{unnum(e.at("mean")), unnum(e.at("half_width_95")), unnum(e.at("n_effective"))}});
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), unnum(c.at("value")), unnum(c.at("lo")), unnum(c.at("hi")),
                          c.at("pass").get<bool>(), c.at("reference").get<std::string>()});
    r.notes = j.value("notes", std::vector<std::string>{});
    r.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    r.error = j.at("error").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidFormat, std::string("bad record: ") + e.what());
  }
}

void append_record(const std::string& path, const RunRecord& r) {
  std::ofstream out(path, std::ios::app);
  require(static_cast<bool>(out), ErrorCode::InvalidConfig, "cannot append to " + path);
  out << record_to_json(r) << '\n';
}

std::vector<RunRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::InvalidConfig, "cannot read " + path);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) out.push_back(record_from_json(line));
  return out;
}

Table report(const std::vector<RunRecord>& records) {
  Table t;
  t.header = {"experiment", "seed", "started", "checks", "failed", "error", "status"};
  for (const auto& r : records) {
    std::size_t failed = 0;
    for (const auto& c : r.checks) failed += check_passes(c) ? 0 : 1;
    t.rows.push_back({r.experiment, std::to_string(r.seed), r.started, std::to_string(r.checks.size()),
                      std::to_string(failed), r.error, r.passed() ? "pass" : "fail"});
  }
  return t;
}

Table record_table(const RunRecord& r) {
  Table t;
  t.header = {"kind", "name", "value", "half_width_95", "n_effective", "lo", "hi", "pass", "reference"};
  for (const auto& e : r.estimates)
    t.rows.push_back({"estimate", e.name, fmt(e.estimate.mean), fmt(e.estimate.half_width_95),
                      fmt(e.estimate.n_effective), "", "", "", ""});
  for (const auto& c : r.checks)
    t.rows.push_back({"check", c.name, fmt(c.value), "", "", fmt(c.lo), fmt(c.hi), check_passes(c) ? "1" : "0", c.reference});
  return t;
}

void write_csv(std::ostream& out, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

// ---- SVG --------------------------------------------------------------------

double Axis::map(double v, double px0, double px1) const {
  const double a = log ? std::log10(lo) : lo, b = log ? std::log10(hi) : hi;
  const double x = log ? std::log10(v) : v;
  return px0 + (x - a) / (b - a) * (px1 - px0);
}

Axis make_axis(const std::vector<double>& values, bool log) {
  Axis ax;
  ax.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) {
    lo = log ? 1 : 0;
    hi = log ? 10 : 1;
  }
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10;
    for (double t = lo; t <= hi * (1 + 1e-12); t *= 10) ax.ticks.push_back(t);
  } else {
    if (hi <= lo) {
      const double pad = lo == 0 ? 1 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
    const double raw = (hi - lo) / 5;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    lo = std::floor(lo / step) * step;
    hi = std::ceil(hi / step) * step;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int k = 0; k <= n; ++k) ax.ticks.push_back(lo + k * step);
  }
  ax.lo = lo;
  ax.hi = hi;
  return ax;
}

std::string render_svg(const Plot& p) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 60;
  std::vector<double> xs, ys;
  for (const auto& s : p.series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  const Axis ax = make_axis(xs, p.log_x), ay = make_axis(ys, p.log_y);
  std::ostringstream o;
  o << std::setprecision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(p.title) << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks) {
    const double x = ax.map(t, L, W - R);
    o << "<line x1=\"" << x << "\" y1=\"" << H - B << "\" x2=\"" << x << "\" y2=\"" << H - B + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << x << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << t << "</text>\n";
  }
  for (double t : ay.ticks) {
    const double y = ay.map(t, H - B, T);
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y << "\" stroke=\"black\"/>";
    o << "<text x=\"" << L - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << t << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xml_escape(p.x_label) << "</text>\n";
  o << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << (T + H - B) / 2
    << ")\">" << xml_escape(p.y_label) << "</text>\n";
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* col = colours[k % 5];
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((p.log_x && s.x[i] <= 0) || (p.log_y && s.y[i] <= 0)) continue;
      const double x = ax.map(s.x[i], L, W - R), y = ay.map(s.y[i], H - B, T);
      pts += std::to_string(x) + "," + std::to_string(y) + " ";
      o << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << col << "\"/>";
    }
    o << "\n<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << col << "\"/>\n";
    o << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 14 * static_cast<double>(k) << "\" fill=\"" << col << "\">"
      << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace loops
