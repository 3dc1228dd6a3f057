#include "gridpos/point_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "gridpos/error.hpp"

namespace gridpos {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Data lines only; sets had_comments when something was skipped.
std::vector<Line> data_lines(std::string_view text, bool& had_comments) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    auto tokens = split_ws(raw);
    const bool trailing_segment = end == text.size() && raw.empty();
    if (tokens.empty() || tokens.front().front() == '#') {
      if (!trailing_segment) had_comments = true;
    } else {
      out.push_back({number, std::move(tokens)});
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::int64_t parse_int(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    fail(Errc::ParseError, "line " + std::to_string(line) + ": '" + std::string(token) + "' is not a base-10 integer");
  }
  return value;
}

ParsedPointSet finish(std::size_t dim, Coord side, std::vector<LatticePoint> pts,
                      const std::vector<std::size_t>& line_of, bool had_comments) {
  ParsedPointSet out;
  out.had_comments = had_comments;
  out.reordered = !std::is_sorted(pts.begin(), pts.end());
  // Report duplicates with the offending line before PointSet would.
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (pts[order[i]] == pts[order[i - 1]]) {
      fail(Errc::DuplicatePoints, "line " + std::to_string(line_of[order[i]]) + ": point " +
                                      to_string(pts[order[i]]) + " repeated");
    }
  }
  out.set = PointSet(dim, side, std::move(pts));
  return out;
}

}  // namespace

ParsedPointSet parse_point_set(std::string_view text) {
  bool had_comments = false;
  auto lines = data_lines(text, had_comments);
  if (lines.empty()) fail(Errc::ParseError, "missing header line 'd n'");
  const Line& header = lines.front();
  if (header.tokens.size() != 2) {
    fail(Errc::ParseError, "line " + std::to_string(header.number) + ": header must be 'd n'");
  }
  const auto dim = parse_int(header.tokens[0], header.number);
  const auto side = parse_int(header.tokens[1], header.number);
  if (dim < 1) fail(Errc::ParseError, "line " + std::to_string(header.number) + ": dimension must be positive");
  if (side < 1) fail(Errc::ParseError, "line " + std::to_string(header.number) + ": side must be positive");

  std::vector<LatticePoint> pts;
  std::vector<std::size_t> line_of;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (line.tokens.size() != static_cast<std::size_t>(dim)) {
      fail(Errc::ParseError, "line " + std::to_string(line.number) + ": expected " + std::to_string(dim) +
                                 " coordinates, found " + std::to_string(line.tokens.size()));
    }
    std::vector<Coord> coords;
    coords.reserve(line.tokens.size());
    for (std::size_t c = 0; c < line.tokens.size(); ++c) {
      const auto v = parse_int(line.tokens[c], line.number);
      if (v < 1 || v > side) {
        fail(Errc::OutOfRange, "line " + std::to_string(line.number) + ", coordinate " + std::to_string(c + 1) +
                                   ": " + std::to_string(v) + " outside [1, " + std::to_string(side) + "]");
      }
      coords.push_back(v);
    }
    pts.emplace_back(std::move(coords));
    line_of.push_back(line.number);
  }
  return finish(static_cast<std::size_t>(dim), side, std::move(pts), line_of, had_comments);
}

std::string format_point_set(const PointSet& set) {
  std::string out = std::to_string(set.dim()) + " " + std::to_string(set.side()) + "\n";
  for (const auto& p : set) {
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (i) out += ' ';
      out += std::to_string(p[i]);
    }
    out += '\n';
  }
  return out;
}

ParsedPointSet parse_integer_list(std::string_view text, Coord side) {
  bool had_comments = false;
  auto lines = data_lines(text, had_comments);
  std::vector<LatticePoint> pts;
  std::vector<std::size_t> line_of;
  Coord max_value = 1;
  for (const auto& line : lines) {
    if (line.tokens.size() != 1) {
      fail(Errc::ParseError, "line " + std::to_string(line.number) + ": expected a single integer");
    }
    const auto v = parse_int(line.tokens[0], line.number);
    if (v < 1 || (side > 0 && v > side)) {
      fail(Errc::OutOfRange, "line " + std::to_string(line.number) + ", coordinate 1: " + std::to_string(v) +
                                 " outside [1, " + (side > 0 ? std::to_string(side) : std::string("inf")) + "]");
    }
    max_value = std::max(max_value, v);
    pts.push_back(LatticePoint{v});
    line_of.push_back(line.number);
  }
  return finish(1, side > 0 ? side : max_value, std::move(pts), line_of, had_comments);
}

ParsedPointSet parse_dataset(std::string_view text) {
  bool had_comments = false;
  auto lines = data_lines(text, had_comments);
  if (!lines.empty() && lines.front().tokens.size() == 1) return parse_integer_list(text);
  return parse_point_set(text);
}

ParsedPointSet read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

void write_point_set(const std::filesystem::path& path, const PointSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::ParseError, "cannot write " + path.string());
  out << format_point_set(set);
}

}  // namespace gridpos
