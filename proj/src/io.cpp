#include "loops/io.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace loops {

Loop parse_loop(const std::string& line) {
  std::istringstream ss(line);
  std::vector<double> xs;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == tok.size(), ErrorCode::InvalidFormat, "bad number '" + tok + "'");
    xs.push_back(x);
  }
  require(xs.size() % 2 == 0, ErrorCode::InvalidFormat, "odd coordinate count");
  Points v(2, static_cast<Eigen::Index>(xs.size() / 2));
  for (std::size_t i = 0; i < xs.size() / 2; ++i) v.col(static_cast<Eigen::Index>(i)) = Point(xs[2 * i], xs[2 * i + 1]);
  return Loop(std::move(v));
}

std::vector<Loop> read_loops(std::istream& in) {
  std::vector<Loop> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_loop(line));
  }
  return out;
}

void write_loop(std::ostream& out, const Points& v) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    if (i) out << ' ';
    out << v(0, i) << ' ' << v(1, i);
  }
  out << '\n';
  out.precision(old);
}

}  // namespace loops
