#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "bsfh/rational.hpp"

namespace bsfh {

// Combinatorial boundary data: a set of oriented lines carrying marked
// points, matched in pairs (the two feet of one arc), with the intervals
// between consecutive marked points optionally labeled. Chords run along a
// line from one marked point to a later one.

struct Chord {
  int line = 0;
  int from = 0;  // marked-point position along the line
  int to = 0;    // strictly greater than from
  auto operator<=>(const Chord&) const = default;
};

struct ArcDiagram {
  // lines[l][j] = matched-pair id of the j-th marked point along line l.
  std::vector<std::vector<int>> lines;
  // interval_labels[l][j] names the interval between points j and j+1;
  // either empty or sized |lines[l]| - 1 per line.
  std::vector<std::vector<std::string>> interval_labels;
  // Optional display names for the matched pairs.
  std::vector<std::string> pair_names;

  int num_points() const {
    int n = 0;
    for (const auto& l : lines) n += static_cast<int>(l.size());
    return n;
  }
  int num_pairs() const { return num_points() / 2; }

  void validate() const {
    if (num_points() % 2 != 0) throw Error("arc diagram: odd number of marked points");
    int n = num_pairs();
    std::vector<int> count(n, 0);
    for (const auto& l : lines)
      for (int p : l) {
        if (p < 0 || p >= n) throw Error("arc diagram: pair id out of range");
        ++count[p];
      }
    for (int c : count)
      if (c != 2) throw Error("arc diagram: each pair must mark exactly two points");
    if (!interval_labels.empty()) {
      if (interval_labels.size() != lines.size())
        throw Error("arc diagram: interval label lines mismatch");
      for (size_t l = 0; l < lines.size(); ++l) {
        size_t want = lines[l].empty() ? 0 : lines[l].size() - 1;
        if (interval_labels[l].size() != want)
          throw Error("arc diagram: interval label count mismatch on line " + std::to_string(l));
      }
    }
    if (!pair_names.empty() && static_cast<int>(pair_names.size()) != n)
      throw Error("arc diagram: pair name count mismatch");
  }

  // The same diagram with every line's orientation reversed.
  ArcDiagram reversed() const {
    ArcDiagram out = *this;
    for (auto& l : out.lines) std::reverse(l.begin(), l.end());
    for (auto& il : out.interval_labels) std::reverse(il.begin(), il.end());
    return out;
  }

  // ---- global point indexing (line-major) ----

  int offset(int line) const {
    int off = 0;
    for (int l = 0; l < line; ++l) off += static_cast<int>(lines[l].size());
    return off;
  }
  int point_id(int line, int pos) const { return offset(line) + pos; }
  int line_of(int point) const {
    for (size_t l = 0; l < lines.size(); ++l) {
      if (point < static_cast<int>(lines[l].size())) return static_cast<int>(l);
      point -= static_cast<int>(lines[l].size());
    }
    throw Error("arc diagram: point id out of range");
  }
  int pos_of(int point) const {
    for (const auto& l : lines) {
      if (point < static_cast<int>(l.size())) return point;
      point -= static_cast<int>(l.size());
    }
    throw Error("arc diagram: point id out of range");
  }
  int pair_at(int point) const { return lines[line_of(point)][pos_of(point)]; }
  std::pair<int, int> points_of_pair(int pair) const {
    int first = -1;
    for (int p = 0; p < num_points(); ++p)
      if (pair_at(p) == pair) {
        if (first < 0)
          first = p;
        else
          return {first, p};
      }
    throw Error("arc diagram: pair without two points");
  }

  std::string pair_name(int pair) const {
    if (!pair_names.empty()) return pair_names[pair];
    return std::to_string(pair);
  }
};

// Display name of a chord: the concatenation of the labels of the intervals
// it spans, falling back to positional notation when labels are absent.
inline std::string chord_name(const ArcDiagram& z, const Chord& c) {
  if (!z.interval_labels.empty()) {
    std::string out;
    for (int j = c.from; j < c.to; ++j) out += z.interval_labels[c.line][j];
    return out;
  }
  return "z" + std::to_string(c.line) + "[" + std::to_string(c.from) + "," +
         std::to_string(c.to) + "]";
}

}  // namespace bsfh
