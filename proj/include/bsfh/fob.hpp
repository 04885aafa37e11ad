#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bsfh/arc_diagram.hpp"
#include "bsfh/surgery.hpp"

namespace bsfh {

// Abstract foliated open books. A book is a base page plus an ordered list of
// moves; later pages are derived by replaying the moves, so page consistency
// holds by construction. Each cut move carries the arc it cuts along (drawn on
// the page before the move); each add move carries the two band feet. The
// monodromy is a finite table of arc images; operations that would need more
// of the monodromy than the table records fail with a "monodromy table
// insufficient" error.

enum class MoveType { Cut, Add };

struct FobMove {
  MoveType type = MoveType::Cut;
  std::string name;        // stable key, e.g. "m1"
  Course arc;              // cut: arc in the page before the move
  FootSpec foot1, foot2;   // add: band feet on the page before the move
  Rat width = Rat(1, 4);   // add: band thickness
  std::string band_chart;  // add: chart name for the new band
};

struct Monodromy {
  // Images on the base page of the decoration arcs the diagram construction
  // needs, keyed by decoration name ("gamma2-", cutting-arc names, ...).
  std::map<std::string, Course> arc_images;
  // Images of marked point pairs (the junction points of cut moves).
  std::map<std::string, std::vector<SurfPt>> point_images;
  // Inverse images on the final page of a move's locus, keyed by move name;
  // consumed by positive shifts.
  std::map<std::string, Course> inverse_images;
  std::map<std::string, std::pair<FootSpec, FootSpec>> inverse_feet;
  // Composed twists, applied after the arc images, innermost first. Twist
  // curves are closed courses on the base page.
  std::vector<std::string> twist_word;
  std::map<std::string, Course> twist_curves;
};

struct SortingArcKey {
  int move = 0;  // 1-based move index
  bool positive = true;
  int page = 0;
  auto operator<=>(const SortingArcKey&) const = default;
};

struct FoliatedOpenBook {
  std::string name;
  ChartComplex base_page;
  std::vector<FobMove> moves;
  Monodromy monodromy;
  // Authored overrides for sorting arcs on specific pages; when absent, the
  // default representative is transported from the move data.
  std::map<SortingArcKey, Course> sorting_arcs;
  // Display data for the derived arc diagram.
  std::vector<std::string> pair_names;                              // per move
  std::map<std::string, std::vector<std::string>> interval_labels;  // per leaf
  // Reserved-slot spacing used when re-attaching positive endpoints near the
  // positive corner of each leaf during diagram construction.
  Rat slot_depth = Rat(1, 40);
  Rat corner_margin = Rat(1, 20);

  int num_moves() const { return static_cast<int>(moves.size()); }
  const FobMove& move(int i) const {  // 1-based
    if (i < 1 || i > num_moves()) throw Error("move index out of range");
    return moves[static_cast<size_t>(i - 1)];
  }
  std::vector<int> plus_moves() const {
    std::vector<int> v;
    for (int i = 1; i <= num_moves(); ++i)
      if (move(i).type == MoveType::Cut) v.push_back(i);
    return v;
  }
  std::vector<int> minus_moves() const {
    std::vector<int> v;
    for (int i = 1; i <= num_moves(); ++i)
      if (move(i).type == MoveType::Add) v.push_back(i);
    return v;
  }
};

inline std::string minus_key(int i) { return "gamma" + std::to_string(i) + "-"; }

// ---- page replay ----

struct MoveRecord {
  std::map<std::string, std::string> piece_parent;
  std::set<std::string> created;                 // charts that did not exist before
  std::vector<std::pair<int, int>> scar_pairs;   // cut moves
  std::string band_chart;                        // add moves
  Rat band_width;
};

struct FobBuild {
  FoliatedOpenBook fob;
  std::vector<ChartComplex> pages;  // pages[0] = base, size num_moves()+1
  std::vector<MoveRecord> records;  // records[i] produced pages[i+1]
  // Union of all piece_parent maps; piece names are globally unique, so one
  // map serves every page.
  std::map<std::string, std::string> genealogy;

  int num_pages() const { return static_cast<int>(pages.size()); }
};

// Canonical co-core of an add move's band: the straight arc joining the two
// free sides at half height.
inline Course band_cocore(const std::string& band_chart, const Rat& width) {
  Course c;
  c.legs.push_back({band_chart, {Pt{0, width / 2}, Pt{1, width / 2}}});
  return c;
}

inline FobBuild build_pages(const FoliatedOpenBook& f) {
  FobBuild b;
  b.fob = f;
  f.base_page.validate();
  b.pages.push_back(f.base_page);
  for (int i = 1; i <= f.num_moves(); ++i) {
    const FobMove& mv = f.move(i);
    ChartComplex page = b.pages.back();
    MoveRecord rec;
    if (mv.type == MoveType::Cut) {
      CutResult r = cut_along(page, mv.arc);
      rec.piece_parent = r.piece_parent;
      rec.scar_pairs = r.scar_pairs;
      for (const auto& [child, parent] : r.piece_parent) rec.created.insert(child);
    } else {
      if (mv.band_chart.empty()) throw Error("add move " + mv.name + " has no band chart name");
      BandResult r = add_band(page, mv.band_chart, mv.foot1, mv.foot2, mv.width, EdgeKind::Leaf);
      rec.created.insert(r.band_chart);
      rec.band_chart = r.band_chart;
      rec.band_width = mv.width;
    }
    page.validate();
    int prev = static_cast<int>(b.pages.back().charts.size());
    int cur = static_cast<int>(page.charts.size());
    int dchi = page.euler_characteristic() - b.pages.back().euler_characteristic();
    (void)prev;
    (void)cur;
    if (mv.type == MoveType::Cut && dchi != 1)
      throw Error("cut move " + mv.name + " changed the Euler characteristic by " +
                  std::to_string(dchi));
    if (mv.type == MoveType::Add && dchi != -1)
      throw Error("add move " + mv.name + " changed the Euler characteristic by " +
                  std::to_string(dchi));
    if (page.leaves.size() != b.pages.back().leaves.size())
      throw Error("move " + mv.name + " changed the number of leaves");
    for (const auto& [child, parent] : rec.piece_parent) b.genealogy[child] = parent;
    b.pages.push_back(std::move(page));
    b.records.push_back(std::move(rec));
  }
  return b;
}

// ---- transports between pages ----

// Renames a chart of page `from` to its ancestor on the earlier page `to`.
inline std::string ascend_chart_name(const FobBuild& b, std::string name, int from, int to) {
  for (int m = from; m > to; --m) {
    const MoveRecord& rec = b.records[static_cast<size_t>(m - 1)];
    if (rec.created.count(name) && rec.piece_parent.find(name) == rec.piece_parent.end())
      throw Error("chart " + name + " does not exist before move " + std::to_string(m));
    auto it = rec.piece_parent.find(name);
    int guard = 0;
    while (it != rec.piece_parent.end()) {
      name = it->second;
      it = rec.piece_parent.find(name);
      if (++guard > 10000) throw Error("ascend_chart_name: cyclic parent links");
    }
  }
  return name;
}

inline Course ascend_course_to(const FobBuild& b, Course course, int from, int to) {
  for (int m = from; m > to; --m)
    course = ascend_course(course, b.records[static_cast<size_t>(m - 1)].piece_parent,
                           b.records[static_cast<size_t>(m - 1)].created);
  return course;
}

inline Course descend_course_to(const FobBuild& b, Course course, int from, int to) {
  for (int m = from; m < to; ++m)
    course = descend_course(b.pages[static_cast<size_t>(m + 1)],
                            b.records[static_cast<size_t>(m)].piece_parent, course);
  return course;
}

inline SurfPt descend_point_to(const FobBuild& b, SurfPt sp, int from, int to) {
  for (int m = from; m < to; ++m)
    sp = descend_point(b.pages[static_cast<size_t>(m + 1)],
                       b.records[static_cast<size_t>(m)].piece_parent, sp);
  return sp;
}

// ---- decoration arcs on pages ----

// The recorded positive sorting arc of a cut move i on page j <= i-1: an
// authored override when present, otherwise the move's arc transported
// backward.
inline Course sorting_arc_plus(const FobBuild& b, int i, int page) {
  auto it = b.fob.sorting_arcs.find({i, true, page});
  if (it != b.fob.sorting_arcs.end()) return it->second;
  if (b.fob.move(i).type != MoveType::Cut)
    throw Error("sorting_arc_plus: move " + std::to_string(i) + " is not a cut");
  if (page > i - 1) throw Error("sorting_arc_plus: page after the move");
  return ascend_course_to(b, b.fob.move(i).arc, i - 1, page);
}

// The recorded negative sorting arc of an add move i on page j >= i.
inline Course sorting_arc_minus(const FobBuild& b, int i, int page) {
  auto it = b.fob.sorting_arcs.find({i, false, page});
  if (it != b.fob.sorting_arcs.end()) return it->second;
  if (b.fob.move(i).type != MoveType::Add)
    throw Error("sorting_arc_minus: move " + std::to_string(i) + " is not an add");
  if (page < i) throw Error("sorting_arc_minus: page before the move");
  const MoveRecord& rec = b.records[static_cast<size_t>(i - 1)];
  return descend_course_to(b, band_cocore(rec.band_chart, rec.band_width), i, page);
}

// A decoration endpoint located on a leaf of some page: endpoints of a future
// cut arc or co-core endpoints of a past add. Points are given in the
// coordinates of the page where they were defined and located on the
// requested page's leaves by a genealogy-aware scan.
struct LeafMark {
  int move = 0;
  bool positive = true;  // endpoint of a gamma^+ datum vs a gamma^- datum
  std::string leaf;
  Rat depth;  // L1 arclength from the leaf's positive corner
};

// All appearances of a point (defined on an ancestral chart) on the leaves of
// the given page.
inline std::vector<LeafMark> locate_marks(const FobBuild& b, int page, const SurfPt& sp, int move,
                                          bool positive) {
  const ChartComplex& cc = b.pages[static_cast<size_t>(page)];
  std::vector<LeafMark> out;
  for (const Leaf& lf : cc.leaves) {
    Rat acc = 0;
    for (int eid : lf.course) {
      EdgeRef r = cc.edge_ref(eid);
      const std::string& cn = cc.charts[r.chart].name;
      Seg s = cc.edge_seg(eid);
      if ((cn == sp.chart || descends_from(b.genealogy, cn, sp.chart)) && on_segment(sp.p, s)) {
        Rat t = param_on_line(sp.p, s);
        if (t < 1)  // a point at t=1 reappears at t=0 of the next edge
          out.push_back({move, positive, lf.name, acc + t * cc.edge_len1(eid)});
      }
      acc += cc.edge_len1(eid);
    }
  }
  return out;
}

// ---- sortedness ----

struct SortedViolation {
  int page = 0;
  std::string message;
};

struct SortedReport {
  bool sorted = true;
  std::vector<SortedViolation> violations;
};

namespace detail {

struct PresentArc {
  int move = 0;
  bool positive = true;
  Course course;
};

inline std::string arc_label(int move, bool positive) {
  return "gamma" + std::to_string(move) + (positive ? "+" : "-");
}

inline void check_arc_pair_disjoint(const ChartComplex& cc, const PresentArc& a,
                                    const PresentArc& g, int page, SortedReport& rep) {
  for (const Leg& la : a.course.legs)
    for (const Leg& lg : g.course.legs) {
      if (la.chart != lg.chart) continue;
      for (size_t i = 0; i + 1 < la.pts.size(); ++i)
        for (size_t j = 0; j + 1 < lg.pts.size(); ++j) {
          Isect is = intersect_segments({la.pts[i], la.pts[i + 1]}, {lg.pts[j], lg.pts[j + 1]});
          if (is.kind != IsectKind::None) {
            rep.sorted = false;
            rep.violations.push_back({page, arc_label(a.move, a.positive) + " and " +
                                                arc_label(g.move, g.positive) +
                                                " intersect in chart " + la.chart});
            return;
          }
        }
    }
  (void)cc;
}

}  // namespace detail

// Checks the sorting conditions page by page.  Each page carries the cutting
// arcs of the moves still to come and the co-core arcs of the handles already
// attached; their endpoints must sit on the leaves with all positive marks
// strictly closer to the positive corner than all negative marks, indices
// within each family decreasing away from the positive corner, and the arcs
// themselves pairwise disjoint.
inline SortedReport is_sorted(const FobBuild& b) {
  SortedReport rep;
  int n = b.fob.num_moves();
  for (int page = 0; page <= n; ++page) {
    const ChartComplex& cc = b.pages[static_cast<size_t>(page)];
    std::vector<detail::PresentArc> arcs;
    std::vector<LeafMark> marks;
    auto note = [&](const std::string& msg) {
      rep.sorted = false;
      rep.violations.push_back({page, msg});
    };
    auto add_marks = [&](const SurfPt& sp, int move, bool positive) {
      auto found = locate_marks(b, page, sp, move, positive);
      if (found.empty())
        note(detail::arc_label(move, positive) + " endpoint is not on any leaf (" + sp.chart +
             " " + pt_str(sp.p) + ")");
      for (auto& m : found) marks.push_back(m);
    };
    for (int i = 1; i <= n; ++i) {
      const FobMove& mv = b.fob.move(i);
      try {
        if (i > page && mv.type == MoveType::Cut) {
          Course c = sorting_arc_plus(b, i, page);
          validate_course(cc, c);
          add_marks({c.legs.front().chart, c.legs.front().pts.front()}, i, true);
          add_marks({c.legs.back().chart, c.legs.back().pts.back()}, i, true);
          arcs.push_back({i, true, std::move(c)});
        } else if (i <= page && mv.type == MoveType::Add) {
          Course c = sorting_arc_minus(b, i, page);
          validate_course(cc, c);
          add_marks({c.legs.front().chart, c.legs.front().pts.front()}, i, false);
          add_marks({c.legs.back().chart, c.legs.back().pts.back()}, i, false);
          arcs.push_back({i, false, std::move(c)});
        }
      } catch (const Error& e) {
        note(detail::arc_label(i, i > page) + ": " + e.what());
      }
    }
    // Pairwise disjointness of the recorded arcs.
    for (size_t a = 0; a < arcs.size(); ++a)
      for (size_t g = a + 1; g < arcs.size(); ++g)
        detail::check_arc_pair_disjoint(cc, arcs[a], arcs[g], page, rep);
    // Orderings along each leaf.
    for (const Leaf& lf : cc.leaves) {
      std::vector<LeafMark> on_leaf;
      for (const auto& m : marks)
        if (m.leaf == lf.name) on_leaf.push_back(m);
      std::sort(on_leaf.begin(), on_leaf.end(),
                [](const LeafMark& x, const LeafMark& y) { return x.depth < y.depth; });
      for (size_t i = 0; i + 1 < on_leaf.size(); ++i)
        if (on_leaf[i].depth == on_leaf[i + 1].depth)
          note("two marks coincide on leaf " + lf.name);
      Rat max_plus;
      Rat min_minus;
      bool has_plus = false, has_minus = false;
      for (const auto& m : on_leaf) {
        if (m.positive) {
          if (!has_plus || m.depth > max_plus) max_plus = m.depth;
          has_plus = true;
        } else {
          if (!has_minus || m.depth < min_minus) min_minus = m.depth;
          has_minus = true;
        }
      }
      if (has_plus && has_minus && !(max_plus < min_minus))
        note("positive and negative marks are not separated on leaf " + lf.name);
      for (bool family : {true, false}) {
        int prev_move = 0;
        Rat prev_depth;
        bool first = true;
        for (const auto& m : on_leaf) {
          if (m.positive != family) continue;
          if (!first && m.move > prev_move)
            note(detail::arc_label(m.move, family) + " mark (depth " + rat_str(m.depth) +
                 ") lies farther from the positive corner of " + lf.name + " than " +
                 detail::arc_label(prev_move, family) + " (depth " + rat_str(prev_depth) + ")");
          prev_move = m.move;
          prev_depth = m.depth;
          first = false;
        }
      }
    }
  }
  return rep;
}

inline SortedReport is_sorted(const FoliatedOpenBook& f) { return is_sorted(build_pages(f)); }

// ---- validation report ----

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_fob(const FoliatedOpenBook& f) {
  ValidationReport rep;
  std::optional<FobBuild> build;
  try {
    build = build_pages(f);
  } catch (const Error& e) {
    rep.violations.push_back(std::string("page replay failed: ") + e.what());
    return rep;
  }
  const FobBuild& b = *build;
  if (f.num_moves() == 0) {
    int runs = 0;
    try {
      runs = static_cast<int>(b.pages[0].boundary_cycles().size());
    } catch (const Error&) {
      runs = 0;
    }
    if (b.pages[0].leaves.empty() && runs < 2)
      rep.violations.push_back("a book with no moves needs more than one binding component");
  }
  for (int i : f.minus_moves())
    if (!f.monodromy.arc_images.count(minus_key(i)))
      rep.violations.push_back("monodromy table has no image for " + minus_key(i));
  for (const auto& [key, course] : f.monodromy.arc_images) {
    try {
      validate_course(b.pages[0], course);
    } catch (const Error& e) {
      rep.violations.push_back("monodromy image " + key + ": " + e.what());
    }
  }
  for (const auto& name : f.monodromy.twist_word) {
    auto it = f.monodromy.twist_curves.find(name);
    if (it == f.monodromy.twist_curves.end()) {
      rep.violations.push_back("twist word names unknown curve " + name);
      continue;
    }
    try {
      if (!it->second.closed) throw Error("twist curve is not closed");
      validate_course(b.pages[0], it->second);
    } catch (const Error& e) {
      rep.violations.push_back("twist curve " + name + ": " + e.what());
    }
  }
  if (!f.pair_names.empty() && static_cast<int>(f.pair_names.size()) != f.num_moves())
    rep.violations.push_back("pair_names size does not match the number of moves");
  return rep;
}

// ---- boundary foliation data and the arc diagram ----

struct FoliationBoundary {
  std::vector<std::string> leaves;      // t=0 leaf names in line order
  std::vector<int> plus_moves, minus_moves;
  std::vector<LeafMark> marks;          // two per move, on the t=0 leaves
  int closed_binding_components = 0;
  int binding_arc_components = 0;
};

// Marks on the base page's leaves that determine the arc diagram: for each
// positive move a reserved slot near the positive corner of each leaf its arc
// touches; for each negative move the endpoints of the recorded monodromy
// image of its co-core.
inline FoliationBoundary boundary_data(const FobBuild& b) {
  FoliationBoundary fb;
  fb.plus_moves = b.fob.plus_moves();
  fb.minus_moves = b.fob.minus_moves();
  const ChartComplex& base = b.pages[0];
  for (const Leaf& lf : base.leaves) fb.leaves.push_back(lf.name);

  for (int i : fb.plus_moves) {
    Course arc = sorting_arc_plus(b, i, 0);
    for (int e = 0; e < 2; ++e) {
      const Leg& end = (e == 0) ? arc.legs.front() : arc.legs.back();
      const Pt& p = (e == 0) ? end.pts.front() : end.pts.back();
      auto found = locate_marks(b, 0, {end.chart, p}, i, true);
      if (found.size() != 1)
        throw Error("gamma" + std::to_string(i) + "+ endpoint is not on exactly one leaf");
      // Reserve a synthetic slot in place of the authored endpoint depth.
      // Positive endpoints are slid along the boundary across the positive
      // corner, which reverses their order: scanning away from the corner,
      // positive marks appear with increasing move index.
      fb.marks.push_back({i, true, found[0].leaf, Rat(i) * b.fob.slot_depth});
    }
  }
  for (int i : fb.minus_moves) {
    auto it = b.fob.monodromy.arc_images.find(minus_key(i));
    if (it == b.fob.monodromy.arc_images.end())
      throw Error("monodromy table insufficient: no image for " + minus_key(i));
    const Course& img = it->second;
    for (int e = 0; e < 2; ++e) {
      const Leg& end = (e == 0) ? img.legs.front() : img.legs.back();
      const Pt& p = (e == 0) ? end.pts.front() : end.pts.back();
      auto found = locate_marks(b, 0, {end.chart, p}, i, false);
      if (found.size() != 1)
        throw Error("image of " + minus_key(i) + " must end on exactly one leaf");
      fb.marks.push_back({i, false, found[0].leaf, found[0].depth});
    }
  }
  // Slots must stay strictly closer to the positive corner than every
  // negative mark on the same leaf.
  for (const auto& mp : fb.marks)
    if (mp.positive)
      for (const auto& mm : fb.marks)
        if (!mm.positive && mm.leaf == mp.leaf && !(mp.depth < mm.depth))
          throw Error("slot for gamma" + std::to_string(mp.move) +
                      "+ is not above the negative marks on leaf " + mp.leaf);
  for (size_t x = 0; x < fb.marks.size(); ++x)
    for (size_t y = x + 1; y < fb.marks.size(); ++y)
      if (fb.marks[x].leaf == fb.marks[y].leaf && fb.marks[x].depth == fb.marks[y].depth)
        throw Error("two boundary marks coincide on leaf " + fb.marks[x].leaf);

  for (const auto& cycle : base.boundary_cycles()) {
    bool all_binding = true;
    bool any_binding = false;
    for (const auto& de : cycle) {
      if (base.edge(de.edge_id).kind == EdgeKind::Binding)
        any_binding = true;
      else
        all_binding = false;
    }
    if (all_binding) ++fb.closed_binding_components;
    if (!all_binding && any_binding) {
      int runs = 0;
      int sz = static_cast<int>(cycle.size());
      for (int k = 0; k < sz; ++k) {
        bool cur =
            base.edge(cycle[static_cast<size_t>(k)].edge_id).kind == EdgeKind::Binding;
        bool prev = base.edge(cycle[static_cast<size_t>((k + sz - 1) % sz)].edge_id).kind ==
                    EdgeKind::Binding;
        if (cur && !prev) ++runs;
      }
      fb.binding_arc_components += runs;
    }
  }
  return fb;
}

// The arc diagram of the boundary foliation: one line per t=0 leaf, read from
// the negative corner toward the positive corner, with one marked point per
// mark and matched pairs given by the moves.
inline ArcDiagram derive_arc_diagram(const FobBuild& b, const FoliationBoundary& fb) {
  ArcDiagram z;
  int n = b.fob.num_moves();
  std::map<int, int> pair_of_move;
  {
    std::vector<int> all;
    for (int i = 1; i <= n; ++i) all.push_back(i);
    for (size_t k = 0; k < all.size(); ++k) pair_of_move[all[k]] = static_cast<int>(k);
  }
  for (const std::string& leaf : fb.leaves) {
    std::vector<LeafMark> on_leaf;
    for (const auto& m : fb.marks)
      if (m.leaf == leaf) on_leaf.push_back(m);
    std::sort(on_leaf.begin(), on_leaf.end(),
              [](const LeafMark& x, const LeafMark& y) { return x.depth > y.depth; });
    std::vector<int> line;
    for (const auto& m : on_leaf) line.push_back(pair_of_move.at(m.move));
    z.lines.push_back(std::move(line));
    auto it = b.fob.interval_labels.find(leaf);
    if (it != b.fob.interval_labels.end())
      z.interval_labels.push_back(it->second);
    else if (!b.fob.interval_labels.empty())
      throw Error("interval labels missing for leaf " + leaf);
  }
  if (!b.fob.pair_names.empty()) z.pair_names = b.fob.pair_names;
  z.validate();
  return z;
}

inline ArcDiagram derive_arc_diagram(const FobBuild& b) {
  return derive_arc_diagram(b, boundary_data(b));
}

}  // namespace bsfh
