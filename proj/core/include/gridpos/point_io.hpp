#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gridpos/lattice.hpp"

namespace gridpos {

// Point-set text format:
//
//   d n
//   x_1 ... x_d      (one point per line, base-10)
//
// Blank lines and lines starting with '#' are ignored. The canonical form
// has no comments, single spaces, points in lexicographic order and a
// trailing newline; canonical input round-trips byte-for-byte.
struct ParsedPointSet {
  PointSet set;
  bool reordered = false;        // input points were not in canonical order
  bool had_comments = false;     // comment or blank lines were dropped
};

ParsedPointSet parse_point_set(std::string_view text);
std::string format_point_set(const PointSet& set);

// One integer per line (1-dimensional sets). The side defaults to the
// largest value.
ParsedPointSet parse_integer_list(std::string_view text, Coord side = 0);

// Dispatches on the first data line: two tokens means the point-set
// format, a single token means an integer list.
ParsedPointSet parse_dataset(std::string_view text);

ParsedPointSet read_dataset(const std::filesystem::path& path);
void write_point_set(const std::filesystem::path& path, const PointSet& set);

}  // namespace gridpos
