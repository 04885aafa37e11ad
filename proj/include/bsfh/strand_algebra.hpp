#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bsfh/arc_diagram.hpp"

namespace bsfh {

// The F2 strand algebra of an arc diagram. Basis elements are classes
// (M, H): a set M of moving strands (each runs forward along one line from
// one marked point to a later one) together with a set H of matched pairs
// carried horizontally. Such a class stands for the sum of all "honest"
// strand pictures obtained by placing the horizontal strand of each pair in
// H at either of the pair's two points. Products and differentials are
// computed on honest pictures — composition of partial injections with a
// crossing-count check, and crossing resolution dropping the crossing number
// by exactly one — and the result is regrouped into classes.

struct StrandGen {
  std::vector<std::pair<int, int>> moving;  // (from, to) global points, sorted, from < to
  std::vector<int> horiz;                   // matched-pair ids, sorted
  auto operator<=>(const StrandGen&) const = default;
};

// F2 linear combination of basis classes.
using AlgElt = std::set<StrandGen>;

inline void xor_gen(AlgElt& acc, const StrandGen& g) {
  auto [it, inserted] = acc.insert(g);
  if (!inserted) acc.erase(it);
}

inline AlgElt add(const AlgElt& a, const AlgElt& b) {
  AlgElt out = a;
  for (const auto& g : b) xor_gen(out, g);
  return out;
}

class StrandAlgebra {
 public:
  explicit StrandAlgebra(const ArcDiagram& diagram) : z_(&diagram) { diagram.validate(); }

  const ArcDiagram& diagram() const { return *z_; }

  // Honest picture: sorted (source, target) pairs; horizontal strands appear
  // as (x, x).
  using Picture = std::vector<std::pair<int, int>>;

  // ---- basis bookkeeping ----

  void validate_gen(const StrandGen& g) const {
    std::set<int> start_pairs, end_pairs;
    for (const auto& [s, t] : g.moving) {
      if (s >= t) throw Error("strand gen: strand does not move forward");
      if (z_->line_of(s) != z_->line_of(t)) throw Error("strand gen: strand spans two lines");
      if (!start_pairs.insert(z_->pair_at(s)).second)
        throw Error("strand gen: two strands start on one pair");
      if (!end_pairs.insert(z_->pair_at(t)).second)
        throw Error("strand gen: two strands end on one pair");
    }
    if (!std::is_sorted(g.moving.begin(), g.moving.end()))
      throw Error("strand gen: moving strands not sorted");
    std::set<int> h(g.horiz.begin(), g.horiz.end());
    if (h.size() != g.horiz.size()) throw Error("strand gen: repeated horizontal pair");
    if (!std::is_sorted(g.horiz.begin(), g.horiz.end()))
      throw Error("strand gen: horizontal pairs not sorted");
    for (int p : g.horiz) {
      if (p < 0 || p >= z_->num_pairs()) throw Error("strand gen: horizontal pair out of range");
      if (start_pairs.count(p) || end_pairs.count(p))
        throw Error("strand gen: horizontal pair collides with a strand endpoint");
    }
  }

  std::vector<int> left_idem(const StrandGen& g) const {
    std::vector<int> out = g.horiz;
    for (const auto& [s, t] : g.moving) out.push_back(z_->pair_at(s));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<int> right_idem(const StrandGen& g) const {
    std::vector<int> out = g.horiz;
    for (const auto& [s, t] : g.moving) out.push_back(z_->pair_at(t));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Picture> expand(const StrandGen& g) const {
    validate_gen(g);
    std::vector<Picture> out;
    size_t k = g.horiz.size();
    for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
      Picture p = g.moving;
      for (size_t i = 0; i < k; ++i) {
        auto [p0, p1] = z_->points_of_pair(g.horiz[i]);
        int x = (mask >> i) & 1 ? p1 : p0;
        p.push_back({x, x});
      }
      std::sort(p.begin(), p.end());
      out.push_back(std::move(p));
    }
    return out;
  }

  // ---- honest picture operations ----

  int crossings(const Picture& p) const {
    int c = 0;
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = i + 1; j < p.size(); ++j) {
        if (z_->line_of(p[i].first) != z_->line_of(p[j].first)) continue;
        if (p[i].second > p[j].second) ++c;  // sources ascend, targets inverted
      }
    return c;
  }

  std::optional<Picture> compose(const Picture& a, const Picture& b) const {
    std::set<int> targets, sources;
    for (const auto& [s, t] : a) targets.insert(t);
    for (const auto& [s, t] : b) sources.insert(s);
    if (targets != sources) return std::nullopt;
    std::map<int, int> fb(b.begin(), b.end());
    Picture out;
    for (const auto& [s, t] : a) out.push_back({s, fb.at(t)});
    std::sort(out.begin(), out.end());
    if (crossings(out) != crossings(a) + crossings(b)) return std::nullopt;
    return out;
  }

  std::vector<Picture> resolve_crossings(const Picture& p) const {
    std::vector<Picture> out;
    int base = crossings(p);
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = i + 1; j < p.size(); ++j) {
        if (z_->line_of(p[i].first) != z_->line_of(p[j].first)) continue;
        if (p[i].second <= p[j].second) continue;
        Picture q = p;
        std::swap(q[i].second, q[j].second);
        std::sort(q.begin(), q.end());
        if (crossings(q) == base - 1) out.push_back(std::move(q));
      }
    return out;
  }

  // Regroups an F2 sum of honest pictures into basis classes; a sum that is
  // not a union of full classes indicates data outside the algebra.
  AlgElt group(std::set<Picture> sum) const {
    AlgElt out;
    while (!sum.empty()) {
      Picture d = *sum.begin();
      StrandGen g;
      for (const auto& [s, t] : d) {
        if (s == t)
          g.horiz.push_back(z_->pair_at(s));
        else
          g.moving.push_back({s, t});
      }
      std::sort(g.horiz.begin(), g.horiz.end());
      for (size_t i = 0; i + 1 < g.horiz.size(); ++i)
        if (g.horiz[i] == g.horiz[i + 1])
          throw Error("strand sum not groupable: doubled horizontal pair");
      validate_gen(g);
      for (const Picture& e : expand(g)) {
        auto it = sum.find(e);
        if (it == sum.end()) throw Error("strand sum not groupable: incomplete class");
        sum.erase(it);
      }
      xor_gen(out, g);
    }
    return out;
  }

  // ---- algebra operations ----

  AlgElt mul(const AlgElt& a, const AlgElt& b) const {
    std::set<Picture> acc;
    for (const auto& g1 : a)
      for (const auto& g2 : b)
        for (const Picture& d1 : expand(g1))
          for (const Picture& d2 : expand(g2))
            if (auto c = compose(d1, d2)) {
              auto [it, inserted] = acc.insert(*c);
              if (!inserted) acc.erase(it);
            }
    return group(std::move(acc));
  }

  AlgElt diff(const AlgElt& a) const {
    std::set<Picture> acc;
    for (const auto& g : a)
      for (const Picture& d : expand(g))
        for (const Picture& r : resolve_crossings(d)) {
          auto [it, inserted] = acc.insert(r);
          if (!inserted) acc.erase(it);
        }
    return group(std::move(acc));
  }

  // ---- distinguished elements ----

  AlgElt idempotent(const std::vector<int>& pairs) const {
    StrandGen g;
    g.horiz = pairs;
    std::sort(g.horiz.begin(), g.horiz.end());
    validate_gen(g);
    return {g};
  }

  std::vector<AlgElt> all_idempotents() const {
    std::vector<AlgElt> out;
    int n = z_->num_pairs();
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
      std::vector<int> pairs;
      for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1) pairs.push_back(i);
      out.push_back(idempotent(pairs));
    }
    return out;
  }

  AlgElt unit() const {
    AlgElt out;
    for (const auto& e : all_idempotents()) out = add(out, e);
    return out;
  }

  std::vector<std::pair<int, int>> chord_strands(const std::vector<Chord>& chords) const {
    std::vector<std::pair<int, int>> moving;
    for (const Chord& c : chords) {
      if (c.from >= c.to) throw Error("chord does not move forward");
      moving.push_back({z_->point_id(c.line, c.from), z_->point_id(c.line, c.to)});
    }
    std::sort(moving.begin(), moving.end());
    return moving;
  }

  // The sum over all idempotent completions of the given chord set.
  AlgElt a_chords(const std::vector<Chord>& chords) const {
    StrandGen base;
    base.moving = chord_strands(chords);
    validate_gen(base);
    std::set<int> blocked;
    for (const auto& [s, t] : base.moving) {
      blocked.insert(z_->pair_at(s));
      blocked.insert(z_->pair_at(t));
    }
    std::vector<int> free_pairs;
    for (int p = 0; p < z_->num_pairs(); ++p)
      if (!blocked.count(p)) free_pairs.push_back(p);
    AlgElt out;
    for (size_t mask = 0; mask < (size_t{1} << free_pairs.size()); ++mask) {
      StrandGen g = base;
      for (size_t i = 0; i < free_pairs.size(); ++i)
        if ((mask >> i) & 1) g.horiz.push_back(free_pairs[i]);
      std::sort(g.horiz.begin(), g.horiz.end());
      xor_gen(out, g);
    }
    return out;
  }

  // All basis classes (small diagrams only).
  std::vector<StrandGen> all_generators() const {
    std::vector<std::pair<int, int>> strands;
    for (size_t l = 0; l < z_->lines.size(); ++l) {
      int n = static_cast<int>(z_->lines[l].size());
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          strands.push_back({z_->point_id(static_cast<int>(l), i),
                             z_->point_id(static_cast<int>(l), j)});
    }
    if (strands.size() > 20) throw Error("all_generators: diagram too large to enumerate");
    std::vector<StrandGen> out;
    for (size_t mask = 0; mask < (size_t{1} << strands.size()); ++mask) {
      StrandGen base;
      for (size_t i = 0; i < strands.size(); ++i)
        if ((mask >> i) & 1) base.moving.push_back(strands[i]);
      std::sort(base.moving.begin(), base.moving.end());
      std::set<int> start_pairs, end_pairs;
      bool ok = true;
      for (const auto& [s, t] : base.moving) {
        if (!start_pairs.insert(z_->pair_at(s)).second ||
            !end_pairs.insert(z_->pair_at(t)).second) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::vector<int> free_pairs;
      for (int p = 0; p < z_->num_pairs(); ++p)
        if (!start_pairs.count(p) && !end_pairs.count(p)) free_pairs.push_back(p);
      for (size_t hmask = 0; hmask < (size_t{1} << free_pairs.size()); ++hmask) {
        StrandGen g = base;
        for (size_t i = 0; i < free_pairs.size(); ++i)
          if ((hmask >> i) & 1) g.horiz.push_back(free_pairs[i]);
        std::sort(g.horiz.begin(), g.horiz.end());
        out.push_back(std::move(g));
      }
    }
    return out;
  }

 private:
  const ArcDiagram* z_;
};

}  // namespace bsfh
