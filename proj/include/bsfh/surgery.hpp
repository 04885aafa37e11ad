#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bsfh/chart_complex.hpp"

namespace bsfh {

// Surface surgeries on chart complexes: cutting along a properly embedded
// arc, attaching a band, and doubling along the binding. Cut pieces keep the
// parent chart's coordinate system, so points and curves transfer between a
// surface and its surgered descendants by chart renaming alone.

// ---- boundary location ----

struct BoundaryLoc {
  int edge_id = -1;
  Rat t;  // parameter along the edge, in [0,1]
};

inline std::optional<BoundaryLoc> locate_on_boundary(const ChartComplex& cc,
                                                     const std::string& chart_name, const Pt& p) {
  const Chart& c = cc.chart(chart_name);
  int n = static_cast<int>(c.poly.size());
  std::optional<BoundaryLoc> at_end;
  for (int i = 0; i < n; ++i) {
    Seg s{c.poly[i], c.poly[(i + 1) % n]};
    if (!on_segment(p, s)) continue;
    Rat t = param_on_line(p, s);
    if (t < 1) return BoundaryLoc{c.edges[i].id, t};
    at_end = BoundaryLoc{c.edges[i].id, t};
  }
  // A vertex normally reports as t=0 on its outgoing edge; t=1 only remains
  // if the outgoing edge was not scanned as a match (never for simple
  // polygons) — keep it as a safe fallback.
  return at_end;
}

// ---- course validation ----

// A course models a curve drawn on the glued surface: each leg is a simple
// polyline inside one chart, meeting the chart boundary exactly at its two
// ends; consecutive legs hand off across a seam at matching points.
inline void validate_course(const ChartComplex& cc, const Course& course) {
  if (course.legs.empty()) throw Error("course has no legs");
  for (const Leg& leg : course.legs) {
    const Chart& c = cc.chart(leg.chart);
    const auto& P = leg.pts;
    if (P.size() < 2) throw Error("course leg needs at least two points");
    for (size_t i = 0; i + 1 < P.size(); ++i)
      if (P[i] == P[i + 1]) throw Error("course leg repeats a point in " + leg.chart);
    for (size_t i = 1; i + 1 < P.size(); ++i)
      if (point_in_polygon(P[i], c.poly) != 2)
        throw Error("course leg interior point not inside chart " + leg.chart);
    for (const Pt& e : {P.front(), P.back()})
      if (point_in_polygon(e, c.poly) != 1)
        throw Error("course leg endpoint not on boundary of " + leg.chart);
    // Simple polyline: adjacent segments share exactly their common point,
    // non-adjacent segments are disjoint.
    for (size_t i = 0; i + 1 < P.size(); ++i)
      for (size_t j = i + 1; j + 1 < P.size(); ++j) {
        Isect is = intersect_segments({P[i], P[i + 1]}, {P[j], P[j + 1]});
        if (j == i + 1) {
          if (is.kind != IsectKind::Point || !(is.p == P[j]))
            throw Error("course leg self-intersects in " + leg.chart);
        } else if (is.kind != IsectKind::None) {
          throw Error("course leg self-intersects in " + leg.chart);
        }
      }
    // The polyline touches the chart boundary only at its two endpoints.
    int n = static_cast<int>(c.poly.size());
    for (size_t i = 0; i + 1 < P.size(); ++i)
      for (int b = 0; b < n; ++b) {
        Isect is = intersect_segments({P[i], P[i + 1]}, {c.poly[b], c.poly[(b + 1) % n]});
        if (is.kind == IsectKind::None) continue;
        bool ok = is.kind == IsectKind::Point &&
                  ((i == 0 && is.p == P.front()) || (i + 2 == P.size() && is.p == P.back()));
        if (!ok) throw Error("course leg grazes the boundary of " + leg.chart);
      }
  }
  size_t junctions = course.closed ? course.legs.size() : course.legs.size() - 1;
  for (size_t li = 0; li < junctions; ++li) {
    const Leg& cur = course.legs[li];
    const Leg& nxt = course.legs[(li + 1) % course.legs.size()];
    auto loc = locate_on_boundary(cc, cur.chart, cur.pts.back());
    if (!loc) throw Error("course junction not on boundary of " + cur.chart);
    if (cc.edge(loc->edge_id).kind != EdgeKind::Seam)
      throw Error("course junction not on a seam in " + cur.chart);
    if (loc->t <= 0 || loc->t >= 1) throw Error("course junction at a chart corner in " + cur.chart);
    int partner = cc.seam_partner(loc->edge_id);
    EdgeRef pr = cc.edge_ref(partner);
    if (cc.charts[pr.chart].name != nxt.chart)
      throw Error("course junction lands in chart " + cc.charts[pr.chart].name + ", leg says " +
                  nxt.chart);
    if (!(cc.seam_image(loc->edge_id, loc->t) == nxt.pts.front()))
      throw Error("course junction points do not match across the seam");
  }
}

// ---- chart genealogy ----

inline bool descends_from(const std::map<std::string, std::string>& parent, std::string name,
                          const std::string& ancestor) {
  for (int guard = 0; guard < 10000; ++guard) {
    if (name == ancestor) return true;
    auto it = parent.find(name);
    if (it == parent.end()) return false;
    name = it->second;
  }
  throw Error("descends_from: cyclic parent links");
}

// Re-express a point of an ancestral chart in the surgered complex: piece
// charts keep parent coordinates, so only the chart name changes.
inline SurfPt descend_point(const ChartComplex& cc,
                            const std::map<std::string, std::string>& piece_parent,
                            const SurfPt& sp) {
  for (const auto& c : cc.charts)
    if (c.name == sp.chart) {
      if (point_in_polygon(sp.p, c.poly) == 0)
        throw Error("descend_point: point not in chart " + sp.chart);
      return sp;
    }
  std::vector<std::string> hits;
  for (const auto& c : cc.charts)
    if (descends_from(piece_parent, c.name, sp.chart) && point_in_polygon(sp.p, c.poly) != 0)
      hits.push_back(c.name);
  if (hits.size() != 1)
    throw Error("descend_point: " + std::to_string(hits.size()) + " pieces of " + sp.chart +
                " contain " + pt_str(sp.p));
  return {hits[0], sp.p};
}

// Re-express a course of a surgered complex on the surface before the
// surgery: rename piece charts back to their ancestors (coordinates are
// shared). Legs through charts created from nothing (band charts) have no
// pre-surgery home and are refused; cut pieces carry parent links and
// ascend by renaming.
inline Course ascend_course(const Course& course,
                            const std::map<std::string, std::string>& piece_parent,
                            const std::set<std::string>& created_charts) {
  Course out = course;
  for (Leg& leg : out.legs) {
    if (created_charts.count(leg.chart) && !piece_parent.count(leg.chart))
      throw Error("ascend_course: course runs through surgery chart " + leg.chart);
    auto it = piece_parent.find(leg.chart);
    int guard = 0;
    while (it != piece_parent.end()) {
      leg.chart = it->second;
      it = piece_parent.find(leg.chart);
      if (++guard > 10000) throw Error("ascend_course: cyclic parent links");
    }
  }
  return out;
}

// ---- leaf bookkeeping ----

// A leaf is anchored by the corner where it leaves the binding (its positive
// end); these corner points survive every surgery and identify leaves across
// surgered surfaces.
inline std::vector<std::pair<std::string, SurfPt>> leaf_corners(const ChartComplex& cc) {
  std::vector<std::pair<std::string, SurfPt>> out;
  for (const auto& lf : cc.leaves) {
    if (lf.course.empty()) throw Error("leaf_corners: empty leaf " + lf.name);
    EdgeRef r = cc.edge_ref(lf.course.front());
    out.push_back({lf.name, {cc.charts[r.chart].name, cc.charts[r.chart].poly[r.pos]}});
  }
  return out;
}

inline void rebuild_leaves(ChartComplex& cc,
                           const std::vector<std::pair<std::string, SurfPt>>& corners) {
  auto runs = cc.boundary_leaf_runs(false);
  if (runs.size() != corners.size())
    throw Error("rebuild_leaves: " + std::to_string(runs.size()) + " boundary runs vs " +
                std::to_string(corners.size()) + " leaf corners");
  cc.leaves.clear();
  std::set<size_t> used;
  for (const auto& run : runs) {
    EdgeRef r = cc.edge_ref(run.front());
    const std::string& chart_name = cc.charts[r.chart].name;
    const Pt& v = cc.charts[r.chart].poly[r.pos];
    std::optional<size_t> match;
    for (size_t i = 0; i < corners.size(); ++i)
      if (!used.count(i) && corners[i].second.chart == chart_name && corners[i].second.p == v) {
        match = i;
        break;
      }
    if (!match)
      throw Error("rebuild_leaves: boundary run starts at unrecognized corner " + chart_name +
                  " " + pt_str(v));
    used.insert(*match);
    const std::string& name = corners[*match].first;
    for (int eid : run) {
      BEdge& e = cc.edge_mut(eid);
      if (e.kind == EdgeKind::Seam) throw Error("rebuild_leaves: seam edge inside boundary run");
      e.kind = EdgeKind::Leaf;
      e.label = name;
    }
    cc.leaves.push_back({name, run});
  }
  std::sort(cc.leaves.begin(), cc.leaves.end(),
            [](const Leaf& a, const Leaf& b) { return a.name < b.name; });
}

// ---- cutting ----

struct CutResult {
  // One pair per polyline segment: the two scar edges that were a single
  // interior segment before the cut, suitable for re-gluing.
  std::vector<std::pair<int, int>> scar_pairs;
  std::map<std::string, std::string> piece_parent;  // new chart -> immediate parent
};

namespace detail {

inline std::string resolve_leg_chart(const ChartComplex& cc,
                                     const std::map<std::string, std::string>& parent,
                                     const Leg& leg) {
  for (const auto& c : cc.charts)
    if (c.name == leg.chart) return leg.chart;
  std::vector<std::string> hits;
  for (const auto& c : cc.charts) {
    if (!descends_from(parent, c.name, leg.chart)) continue;
    bool all = true;
    for (const Pt& p : leg.pts)
      if (point_in_polygon(p, c.poly) == 0) {
        all = false;
        break;
      }
    if (all) hits.push_back(c.name);
  }
  if (hits.size() != 1)
    throw Error("cannot resolve which piece of " + leg.chart + " carries a course leg");
  return hits[0];
}

}  // namespace detail

// Re-express a course of an ancestral complex on the surgered one: each leg's
// chart is renamed to the unique piece containing all its points. A leg whose
// points straddle two pieces (the curve crossed the surgery locus) is an
// error.
inline Course descend_course(const ChartComplex& cc,
                             const std::map<std::string, std::string>& piece_parent,
                             const Course& course) {
  Course out = course;
  for (Leg& leg : out.legs) leg.chart = detail::resolve_leg_chart(cc, piece_parent, leg);
  return out;
}

// Cuts the surface open along a properly embedded arc. Each leg separates
// its (disk) chart into two pieces named <chart>.0 (left of the leg's
// direction) and <chart>.1 (right); the freshly exposed scar edges get the
// given kind and are paired in the result. Leaves are rebuilt afterwards:
// scars on the cut locus splice into the severed leaves, so the two leaves
// holding the arc's endpoints recombine into two new leaves, each keeping the
// name anchored at its positive corner.
inline CutResult cut_along(ChartComplex& cc, const Course& course,
                           EdgeKind scar_kind = EdgeKind::Leaf) {
  if (course.closed) throw Error("cut_along: closed courses not supported");
  validate_course(cc, course);
  CutResult res;

  // Turn the arc's terminal points and seam junctions into polygon vertices.
  auto ensure_vertex = [&](const std::string& chart_name, const Pt& p, bool junction) {
    auto loc = locate_on_boundary(cc, chart_name, p);
    if (!loc) throw Error("cut_along: point not on boundary of " + chart_name);
    bool is_seam = cc.edge(loc->edge_id).kind == EdgeKind::Seam;
    if (junction != is_seam)
      throw Error(junction ? "cut_along: junction not on a seam"
                           : "cut_along: cut endpoint lies on a seam");
    if (loc->t > 0 && loc->t < 1) cc.split_edge(loc->edge_id, loc->t);
  };
  ensure_vertex(course.legs.front().chart, course.legs.front().pts.front(), false);
  ensure_vertex(course.legs.back().chart, course.legs.back().pts.back(), false);
  for (size_t li = 0; li + 1 < course.legs.size(); ++li)
    ensure_vertex(course.legs[li].chart, course.legs[li].pts.back(), true);

  auto corners = leaf_corners(cc);
  cc.leaves.clear();

  for (const Leg& leg : course.legs) {
    std::string cn = detail::resolve_leg_chart(cc, res.piece_parent, leg);
    int ci = cc.chart_index(cn);
    Chart c = cc.charts[ci];  // work on a copy; replaced below
    int n = static_cast<int>(c.poly.size());
    const auto& P = leg.pts;
    int m = static_cast<int>(P.size()) - 1;
    int ia = -1, ib = -1;
    for (int i = 0; i < n; ++i) {
      if (c.poly[i] == P.front()) ia = i;
      if (c.poly[i] == P.back()) ib = i;
    }
    if (ia < 0 || ib < 0) throw Error("cut_along: leg endpoint is not a vertex of " + cn);
    if (ia == ib) throw Error("cut_along: leg endpoints coincide in " + cn);
    for (size_t i = 1; i + 1 < P.size(); ++i)
      if (point_in_polygon(P[i], c.poly) != 2)
        throw Error("cut_along: leg interior leaves its piece in " + cn);

    Chart left;
    left.name = cn + ".0";
    std::vector<int> left_scars;
    for (int j = 0; j < m; ++j) {
      left.poly.push_back(P[j]);
      BEdge e;
      e.id = cc.next_edge_id++;
      e.kind = scar_kind;
      left_scars.push_back(e.id);
      left.edges.push_back(e);
    }
    for (int k = ib; k != ia; k = (k + 1) % n) {
      left.poly.push_back(c.poly[k]);
      left.edges.push_back(c.edges[k]);
    }

    Chart right;
    right.name = cn + ".1";
    std::vector<int> right_scars;
    for (int j = 0; j < m; ++j) {
      right.poly.push_back(P[m - j]);
      BEdge e;
      e.id = cc.next_edge_id++;
      e.kind = scar_kind;
      right_scars.push_back(e.id);
      right.edges.push_back(e);
    }
    for (int k = ia; k != ib; k = (k + 1) % n) {
      right.poly.push_back(c.poly[k]);
      right.edges.push_back(c.edges[k]);
    }

    for (const Chart* pc : {&left, &right})
      if (!polygon_simple(pc->poly) || !polygon_ccw(pc->poly))
        throw Error("cut_along: cut produces a degenerate piece of " + cn);

    for (int j = 0; j < m; ++j) res.scar_pairs.push_back({left_scars[j], right_scars[m - 1 - j]});
    cc.charts[ci] = std::move(left);
    cc.charts.insert(cc.charts.begin() + ci + 1, std::move(right));
    res.piece_parent[cn + ".0"] = cn;
    res.piece_parent[cn + ".1"] = cn;
  }

  for (auto& [name, sp] : corners) {
    bool exists = false;
    for (const auto& c : cc.charts)
      if (c.name == sp.chart) exists = true;
    if (exists) continue;
    std::vector<std::string> hits;
    for (const auto& c : cc.charts) {
      if (!descends_from(res.piece_parent, c.name, sp.chart)) continue;
      for (const Pt& v : c.poly)
        if (v == sp.p) {
          hits.push_back(c.name);
          break;
        }
    }
    if (hits.size() != 1)
      throw Error("cut_along: leaf corner of " + name + " not carried by exactly one piece");
    sp.chart = hits[0];
  }
  rebuild_leaves(cc, corners);
  return res;
}

// ---- band attachment ----

// A foot is a subinterval of a single boundary edge, spanned CCW from a to b.
struct FootSpec {
  std::string chart;
  Pt a;
  Pt b;
};

struct BandResult {
  std::string band_chart;
  int right_side = -1;  // runs from foot1's a-end to foot2's b-end
  int left_side = -1;   // runs from foot2's a-end to foot1's b-end
};

// Attaches a rectangular band [0,1] x [0,width] along two disjoint feet. The
// band's bottom edge is seamed to foot1 and its top edge to foot2; the two
// free sides get the given kind. Sides of kind Leaf splice into the cut-open
// leaves exactly like cut scars do (the leaf holding foot1 donates its
// positive end to the run continuing through the right side into the leaf
// holding foot2, and symmetrically); sides of kind Binding extend the binding
// and leave every leaf untouched. Feet must sit on edges of the same kind as
// the requested sides.
inline BandResult add_band(ChartComplex& cc, const std::string& band_name, const FootSpec& f1,
                           const FootSpec& f2, const Rat& width, EdgeKind side_kind) {
  if (width <= 0) throw Error("add_band: width must be positive");
  if (side_kind == EdgeKind::Seam) throw Error("add_band: side kind cannot be Seam");
  auto corners = leaf_corners(cc);

  auto make_foot_edge = [&](const FootSpec& f) -> int {
    if (f.a == f.b) throw Error("add_band: degenerate foot on " + f.chart);
    for (const Pt* p : {&f.b, &f.a}) {
      auto loc = locate_on_boundary(cc, f.chart, *p);
      if (!loc) throw Error("add_band: foot endpoint not on boundary of " + f.chart);
      if (cc.edge(loc->edge_id).kind == EdgeKind::Seam)
        throw Error("add_band: foot lies on a seam of " + f.chart);
      if (loc->t > 0 && loc->t < 1) cc.split_edge(loc->edge_id, loc->t);
    }
    const Chart& c = cc.chart(f.chart);
    int n = static_cast<int>(c.poly.size());
    for (int i = 0; i < n; ++i)
      if (c.poly[i] == f.a && c.poly[(i + 1) % n] == f.b) return c.edges[i].id;
    throw Error("add_band: foot interval is not a single CCW boundary edge of " + f.chart);
  };
  int e1 = make_foot_edge(f1);
  int e2 = make_foot_edge(f2);
  if (e1 == e2) throw Error("add_band: feet coincide");
  for (int e : {e1, e2})
    if (cc.edge(e).kind != side_kind)
      throw Error("add_band: foot edge kind does not match band side kind");

  Polygon bp = {Pt{0, 0}, Pt{1, 0}, Pt{Rat(1), width}, Pt{Rat(0), width}};
  int bi = cc.add_chart(band_name, bp,
                        {{EdgeKind::Binding, ""},
                         {side_kind, ""},
                         {EdgeKind::Binding, ""},
                         {side_kind, ""}});
  const Chart& bc = cc.charts[bi];
  int bottom = bc.edges[0].id;
  int right = bc.edges[1].id;
  int top = bc.edges[2].id;
  int left = bc.edges[3].id;
  cc.add_seam(bottom, e1);
  cc.add_seam(top, e2);

  cc.leaves.clear();
  rebuild_leaves(cc, corners);
  BandResult r;
  r.band_chart = band_name;
  r.right_side = right;
  r.left_side = left;
  return r;
}

// ---- doubling ----

struct DoubledSurface {
  ChartComplex cc;
  std::map<int, int> mirror_edge;                   // original edge id -> mirrored edge id
  std::map<std::string, std::string> mirror_chart;  // original chart -> mirrored chart
};

inline const std::string kMirrorSuffix = "~m";

inline Pt mirror_pt(const Pt& p) { return {p.x, -p.y}; }

// Doubles a page across its binding: adjoins an orientation-reversed copy of
// every chart (reflection through the x-axis, vertex order reversed to stay
// CCW) and seams each binding edge to its mirror image. Boundary circles of
// the result are the leaves joined end-to-end with their mirrors. Leaf
// declarations for both halves are kept as reference data; the doubled
// surface is not a page, so only geometric validation applies to it.
inline DoubledSurface double_pages(const ChartComplex& page) {
  DoubledSurface out;
  out.cc = page;
  ChartComplex& cc = out.cc;
  std::vector<Chart> mirrored;
  for (const Chart& c : page.charts) {
    Chart mc;
    mc.name = c.name + kMirrorSuffix;
    int n = static_cast<int>(c.poly.size());
    for (int j = 0; j < n; ++j) {
      mc.poly.push_back(mirror_pt(c.poly[n - 1 - j]));
      const BEdge& oe = c.edges[((n - 2 - j) % n + n) % n];
      BEdge e;
      e.id = cc.next_edge_id++;
      e.kind = oe.kind;
      e.label = oe.label.empty() ? oe.label : oe.label + kMirrorSuffix;
      mc.edges.push_back(e);
      out.mirror_edge[oe.id] = e.id;
    }
    out.mirror_chart[c.name] = mc.name;
    mirrored.push_back(std::move(mc));
  }
  for (auto& mc : mirrored) cc.charts.push_back(std::move(mc));
  for (const Seam& s : page.seams)
    cc.seams.push_back({out.mirror_edge.at(s.a), out.mirror_edge.at(s.b)});
  for (const Leaf& lf : page.leaves) {
    Leaf ml;
    ml.name = lf.name + kMirrorSuffix;
    for (auto it = lf.course.rbegin(); it != lf.course.rend(); ++it)
      ml.course.push_back(out.mirror_edge.at(*it));
    cc.leaves.push_back(std::move(ml));
  }
  for (const Chart& c : page.charts)
    for (const BEdge& e : c.edges)
      if (e.kind == EdgeKind::Binding) cc.add_seam(e.id, out.mirror_edge.at(e.id));
  return out;
}

// ---- measurements along leaves ----

// L1 arclength from the leaf's positive end to a point on the leaf.
inline Rat leaf_position(const ChartComplex& cc, const Leaf& lf, const SurfPt& sp) {
  Rat acc = 0;
  for (int eid : lf.course) {
    EdgeRef r = cc.edge_ref(eid);
    const Chart& c = cc.charts[r.chart];
    Seg s = cc.edge_seg(eid);
    if (c.name == sp.chart && on_segment(sp.p, s))
      return acc + param_on_line(sp.p, s) * cc.edge_len1(eid);
    acc += cc.edge_len1(eid);
  }
  throw Error("leaf_position: point not on leaf " + lf.name);
}

inline Rat leaf_length(const ChartComplex& cc, const Leaf& lf) {
  Rat acc = 0;
  for (int eid : lf.course) acc += cc.edge_len1(eid);
  return acc;
}

}  // namespace bsfh
