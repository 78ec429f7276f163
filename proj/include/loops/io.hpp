#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "loops/loop.hpp"

namespace loops {

/// One loop per line: "x0 y0 x1 y1 ...". Blank lines and lines starting
/// with '#' are skipped.
std::vector<Loop> read_loops(std::istream& in);
Loop parse_loop(const std::string& line);
void write_loop(std::ostream& out, const Points& v);
inline void write_loop(std::ostream& out, const Loop& l) { write_loop(out, l.vertices()); }

}  // namespace loops
