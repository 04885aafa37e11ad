#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bsfh/fob.hpp"

namespace bsfh {

// Operations on foliated open books: cyclic shifts of the move sequence,
// stabilization along an arc, the sufficient-stabilization test, extraction
// of a partial open book, and gluing two books along their shared boundary.

// ---- course utilities ----

inline Course reverse_course(const Course& c) {
  Course out;
  out.closed = c.closed;
  for (auto it = c.legs.rbegin(); it != c.legs.rend(); ++it) {
    Leg l;
    l.chart = it->chart;
    l.pts.assign(it->pts.rbegin(), it->pts.rend());
    out.legs.push_back(std::move(l));
  }
  return out;
}

struct CourseCrossing {
  size_t a_leg = 0, a_seg = 0;
  size_t c_leg = 0, c_seg = 0;
  Pt x;
  Rat ta, tc;  // parameters on the two crossing segments
};

// Transverse interior intersections of two courses; any non-transverse
// contact (overlap, or a touch at a segment endpoint) is an error.
inline std::vector<CourseCrossing> course_crossings(const Course& a, const Course& c) {
  std::vector<CourseCrossing> out;
  for (size_t la = 0; la < a.legs.size(); ++la)
    for (size_t lc = 0; lc < c.legs.size(); ++lc) {
      if (a.legs[la].chart != c.legs[lc].chart) continue;
      const auto& ap = a.legs[la].pts;
      const auto& cp = c.legs[lc].pts;
      for (size_t i = 0; i + 1 < ap.size(); ++i)
        for (size_t j = 0; j + 1 < cp.size(); ++j) {
          Isect is = intersect_segments({ap[i], ap[i + 1]}, {cp[j], cp[j + 1]});
          if (is.kind == IsectKind::None) continue;
          if (is.kind == IsectKind::Overlap)
            throw Error("courses overlap along a segment in chart " + a.legs[la].chart);
          if (is.ta == 0 || is.ta == 1 || is.tb == 0 || is.tb == 1)
            throw Error("courses touch at a segment endpoint in chart " + a.legs[la].chart);
          out.push_back({la, i, lc, j, is.p, is.ta, is.tb});
        }
    }
  return out;
}

// ---- twisting an arc along a closed curve ----

namespace detail {

// Reroute an arc with exactly one crossing so that it follows the closed
// curve cu once around in cu's own orientation. The detour runs parallel to
// cu at offset eps on the side the arc approaches from, hopping the same
// seams at shifted parameters, and rejoins the arc just past the crossing.
inline Course twist_course_dir(const ChartComplex& cc, const Course& a, const Course& cu,
                               const Rat& eps) {
  auto xs = course_crossings(a, cu);
  if (xs.size() != 1) throw Error("twist rewriting not applicable: crossing count changed");
  const CourseCrossing& cr = xs[0];
  const Leg& aleg = a.legs[cr.a_leg];
  Pt aseg0 = aleg.pts[cr.a_seg];
  Pt avec = aleg.pts[cr.a_seg + 1] - aseg0;
  Pt cvec = cu.legs[cr.c_leg].pts[1] - cu.legs[cr.c_leg].pts[0];
  Rat s = cross(cvec, avec);
  if (s == 0) throw Error("twist rewriting not applicable: tangential crossing");
  int sigma = -sign(s);  // side of the curve the arc approaches from

  size_t L = cu.legs.size();
  struct Hop {
    int edge_id = -1;
    Rat t;
  };
  std::vector<Hop> hops(L);
  for (size_t k = 0; k < L; ++k) {
    const Leg& lg = cu.legs[k];
    auto loc = locate_on_boundary(cc, lg.chart, lg.pts.back());
    if (!loc) throw Error("twist rewriting not applicable: curve junction off the boundary");
    Pt cd = lg.pts.back() - lg.pts.front();
    Seg es = cc.edge_seg(loc->edge_id);
    Rat side = cross(cd, es.b - es.a);
    if (side == 0) throw Error("twist rewriting not applicable: curve grazes a seam");
    Rat mu = (sign(side) == sigma) ? eps : -eps;
    hops[k] = {loc->edge_id, loc->t + mu};
    if (hops[k].t <= 0 || hops[k].t >= 1)
      throw Error("twist rewriting not applicable: no room to shift a seam hop");
  }

  Rat du = (cr.ta < 1 - cr.ta ? cr.ta : 1 - cr.ta) / 2;
  Pt u = aseg0 + (cr.ta - du) * avec;
  Pt v = aseg0 + (cr.ta + du) * avec;

  size_t j = cr.c_leg;
  Course out;
  out.closed = a.closed;
  for (size_t i = 0; i < cr.a_leg; ++i) out.legs.push_back(a.legs[i]);
  Leg head;
  head.chart = aleg.chart;
  for (size_t p = 0; p <= cr.a_seg; ++p) head.pts.push_back(aleg.pts[p]);
  head.pts.push_back(u);
  head.pts.push_back(cc.point_at(hops[j].edge_id, hops[j].t));
  out.legs.push_back(std::move(head));
  for (size_t m = 1; m < L; ++m) {
    size_t k = (j + m) % L;
    size_t prev = (j + m - 1) % L;
    Leg mid;
    mid.chart = cu.legs[k].chart;
    mid.pts.push_back(cc.seam_image(hops[prev].edge_id, hops[prev].t));
    mid.pts.push_back(cc.point_at(hops[k].edge_id, hops[k].t));
    out.legs.push_back(std::move(mid));
  }
  Leg tail;
  tail.chart = aleg.chart;
  tail.pts.push_back(cc.seam_image(hops[(j + L - 1) % L].edge_id, hops[(j + L - 1) % L].t));
  tail.pts.push_back(v);
  for (size_t p = cr.a_seg + 1; p < aleg.pts.size(); ++p) tail.pts.push_back(aleg.pts[p]);
  out.legs.push_back(std::move(tail));
  for (size_t i = cr.a_leg + 1; i < a.legs.size(); ++i) out.legs.push_back(a.legs[i]);

  try {
    validate_course(cc, out);
  } catch (const Error& e) {
    throw Error(std::string("twist rewriting not applicable: rerouted arc invalid: ") + e.what());
  }
  return out;
}

}  // namespace detail

// Replaces an arc that crosses the twist curve once by the arc that follows
// the curve once around before continuing; arcs disjoint from the curve are
// returned unchanged. Arcs meeting the curve more than once, or meeting it
// non-transversally, are not rewritten mechanically.
inline Course twist_course(const ChartComplex& cc, const Course& a, const Course& c, bool positive,
                           const Rat& eps = Rat(1, 1000)) {
  if (!c.closed) throw Error("twist rewriting not applicable: twist curve is not closed");
  for (const Leg& leg : c.legs)
    if (leg.pts.size() != 2)
      throw Error("twist rewriting not applicable: twist curve has polyline legs");
  std::vector<CourseCrossing> xs;
  try {
    xs = course_crossings(a, c);
  } catch (const Error& e) {
    throw Error(std::string("twist rewriting not applicable: ") + e.what());
  }
  if (xs.empty()) return a;
  if (xs.size() > 1)
    throw Error("twist rewriting not applicable: arc meets the twist curve " +
                std::to_string(xs.size()) + " times");

  // Traversal direction: the sign of the twist decides on which side of the
  // crossing the arc is diverted, hence whether it follows the curve's own
  // orientation or the reverse.
  const Leg& al = a.legs[xs[0].a_leg];
  Pt adir = al.pts[xs[0].a_seg + 1] - al.pts[xs[0].a_seg];
  Pt cdir = c.legs[xs[0].c_leg].pts[1] - c.legs[xs[0].c_leg].pts[0];
  Rat s = cross(cdir, adir);
  bool forward = positive ? (s > 0) : (s < 0);
  return detail::twist_course_dir(cc, a, forward ? c : reverse_course(c), eps);
}

// ---- structural comparison ----

// Chart-level isomorphism: a bijection of charts with polygon rotations that
// matches edge kinds, seam pairings, and leaf courses. Coordinates and edge
// lengths are not compared.
inline bool complex_isomorphic(const ChartComplex& A, const ChartComplex& B) {
  size_t n = A.charts.size();
  if (n != B.charts.size() || A.seams.size() != B.seams.size() ||
      A.leaves.size() != B.leaves.size())
    return false;
  std::vector<bool> used(n, false);
  std::map<int, int> emap;  // A edge id -> B edge id

  std::function<bool(size_t)> go = [&](size_t k) -> bool {
    if (k == n) {
      std::vector<std::vector<int>> bcourses;
      for (const Leaf& lf : B.leaves) bcourses.push_back(lf.course);
      for (const Leaf& lf : A.leaves) {
        std::vector<int> mapped;
        for (int e : lf.course) {
          auto it = emap.find(e);
          if (it == emap.end()) return false;
          mapped.push_back(it->second);
        }
        auto pos = std::find(bcourses.begin(), bcourses.end(), mapped);
        if (pos == bcourses.end()) return false;
        bcourses.erase(pos);
      }
      return true;
    }
    const Chart& ca = A.charts[k];
    int m = static_cast<int>(ca.poly.size());
    for (size_t bi = 0; bi < n; ++bi) {
      if (used[bi]) continue;
      const Chart& cb = B.charts[bi];
      if (static_cast<int>(cb.poly.size()) != m) continue;
      for (int r = 0; r < m; ++r) {
        bool ok = true;
        std::vector<std::pair<int, int>> added;
        for (int i = 0; i < m; ++i) {
          const BEdge& ea = ca.edges[static_cast<size_t>(i)];
          const BEdge& eb = cb.edges[static_cast<size_t>((i + r) % m)];
          if (ea.kind != eb.kind) {
            ok = false;
            break;
          }
          added.push_back({ea.id, eb.id});
        }
        if (ok) {
          for (auto [ia, ib] : added) emap[ia] = ib;
          for (auto [ia, ib] : added) {
            int pa = A.seam_partner(ia);
            int pb = B.seam_partner(ib);
            if ((pa < 0) != (pb < 0)) {
              ok = false;
              break;
            }
            if (pa >= 0) {
              auto it = emap.find(pa);
              if (it != emap.end() && it->second != pb) {
                ok = false;
                break;
              }
            }
          }
          if (ok) {
            used[bi] = true;
            if (go(k + 1)) return true;
            used[bi] = false;
          }
          for (auto [ia, ib] : added) emap.erase(ia);
        }
      }
    }
    return false;
  };
  return go(0);
}

// Per-page topological profile used to compare books whose chart structures
// differ (shifting rebuilds pages by surgery, so chart-level equality is not
// preserved even when the books present the same surfaces).
struct PageProfile {
  int euler = 0;
  std::vector<std::string> leaf_names;          // sorted
  std::vector<std::pair<int, int>> cycle_runs;  // sorted (binding runs, leaf runs) per cycle
  bool operator==(const PageProfile&) const = default;
};

inline PageProfile page_profile(const ChartComplex& cc) {
  PageProfile p;
  p.euler = cc.euler_characteristic();
  for (const Leaf& lf : cc.leaves) p.leaf_names.push_back(lf.name);
  std::sort(p.leaf_names.begin(), p.leaf_names.end());
  for (const auto& cyc : cc.boundary_cycles()) {
    int bruns = 0, lruns = 0;
    int sz = static_cast<int>(cyc.size());
    for (int k = 0; k < sz; ++k) {
      bool cur = cc.edge(cyc[static_cast<size_t>(k)].edge_id).kind == EdgeKind::Binding;
      bool prev =
          cc.edge(cyc[static_cast<size_t>((k + sz - 1) % sz)].edge_id).kind == EdgeKind::Binding;
      if (cur && !prev) ++bruns;
      if (!cur && prev) ++lruns;
    }
    if (bruns == 0 && lruns == 0) {
      if (cc.edge(cyc.front().edge_id).kind == EdgeKind::Binding)
        bruns = 1;
      else
        lruns = 1;
    }
    p.cycle_runs.push_back({bruns, lruns});
  }
  std::sort(p.cycle_runs.begin(), p.cycle_runs.end());
  return p;
}

// Equivalence of books up to re-charting: the same move sequence and the same
// per-page topology (Euler characteristic, leaves, boundary pattern).
inline bool books_equivalent(const FoliatedOpenBook& A, const FoliatedOpenBook& B,
                             std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (A.num_moves() != B.num_moves()) return fail("move counts differ");
  for (int i = 1; i <= A.num_moves(); ++i) {
    if (A.move(i).type != B.move(i).type)
      return fail("move " + std::to_string(i) + " types differ");
    if (A.move(i).name != B.move(i).name)
      return fail("move " + std::to_string(i) + " names differ: " + A.move(i).name + " vs " +
                  B.move(i).name);
  }
  FobBuild ba = build_pages(A);
  FobBuild bb = build_pages(B);
  for (int p = 0; p < ba.num_pages(); ++p) {
    PageProfile pa = page_profile(ba.pages[static_cast<size_t>(p)]);
    PageProfile pb = page_profile(bb.pages[static_cast<size_t>(p)]);
    if (!(pa == pb)) return fail("page " + std::to_string(p) + " profiles differ");
  }
  return true;
}

// ---- shifting ----

namespace detail {

inline FootSpec third_of_edge(const ChartComplex& cc, int edge_id) {
  EdgeRef r = cc.edge_ref(edge_id);
  Seg s = cc.edge_seg(edge_id);
  return {cc.charts[static_cast<size_t>(r.chart)].name, lerp(s.a, s.b, Rat(1, 3)),
          lerp(s.a, s.b, Rat(2, 3))};
}

inline FootSpec foot_around(const ChartComplex& cc, const SurfPt& sp) {
  auto loc = locate_on_boundary(cc, sp.chart, sp.p);
  if (!loc) throw Error("recorded point is not on the boundary of " + sp.chart);
  if (cc.edge(loc->edge_id).kind != EdgeKind::Leaf)
    throw Error("recorded point is not on a leaf edge of " + sp.chart);
  if (loc->t <= 0 || loc->t >= 1)
    throw Error("recorded point sits on a chart corner of " + sp.chart);
  Rat d = (loc->t < 1 - loc->t ? loc->t : 1 - loc->t) / 2;
  Seg s = cc.edge_seg(loc->edge_id);
  return {sp.chart, lerp(s.a, s.b, loc->t - d), lerp(s.a, s.b, loc->t + d)};
}

inline std::optional<FootSpec> descend_foot(const ChartComplex& cc,
                                            const std::map<std::string, std::string>& pieces,
                                            const FootSpec& fs) {
  try {
    SurfPt a = descend_point(cc, pieces, {fs.chart, fs.a});
    SurfPt b = descend_point(cc, pieces, {fs.chart, fs.b});
    if (a.chart != b.chart) return std::nullopt;
    return FootSpec{a.chart, a.p, b.p};
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline std::optional<Course> try_descend(const ChartComplex& cc,
                                         const std::map<std::string, std::string>& pieces,
                                         const Course& course) {
  try {
    return descend_course(cc, pieces, course);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Re-express a move's locus on the current page of a rebuilt replay.
inline FobMove transport_move(const ChartComplex& cur,
                              const std::map<std::string, std::string>& gen, FobMove m) {
  if (m.type == MoveType::Cut) {
    m.arc = descend_course(cur, gen, m.arc);
  } else {
    for (FootSpec* f : {&m.foot1, &m.foot2}) {
      SurfPt a = descend_point(cur, gen, {f->chart, f->a});
      SurfPt b = descend_point(cur, gen, {f->chart, f->b});
      if (a.chart != b.chart) throw Error("band foot of " + m.name + " splits across pieces");
      *f = {a.chart, a.p, b.p};
    }
  }
  return m;
}

inline void apply_move(ChartComplex& page, const FobMove& mv,
                       std::map<std::string, std::string>& gen) {
  if (mv.type == MoveType::Cut) {
    CutResult r = cut_along(page, mv.arc);
    for (const auto& [child, parent] : r.piece_parent) gen[child] = parent;
  } else {
    if (mv.band_chart.empty()) throw Error("add move " + mv.name + " has no band chart name");
    add_band(page, mv.band_chart, mv.foot1, mv.foot2, mv.width, EdgeKind::Leaf);
  }
  page.validate();
}

}  // namespace detail

// Rotates the first move to the end: the base page advances to page 1 and the
// former first move is re-performed at its recorded inverse locus on the
// final page. Remaining monodromy entries are transported mechanically where
// possible and dropped otherwise (later consumers then report the table as
// insufficient).
inline FoliatedOpenBook shift_once(const FoliatedOpenBook& f) {
  int n = f.num_moves();
  if (n == 0) return f;
  FobBuild b = build_pages(f);
  const MoveRecord& r1 = b.records[0];

  FoliatedOpenBook out;
  out.name = f.name;
  out.base_page = b.pages[1];
  out.slot_depth = f.slot_depth;
  out.corner_margin = f.corner_margin;
  out.interval_labels = f.interval_labels;
  for (int i = 2; i <= n; ++i) out.moves.push_back(f.move(i));

  FobMove wrap = f.move(1);
  if (wrap.type == MoveType::Cut) {
    auto it = f.monodromy.inverse_images.find(wrap.name);
    if (it == f.monodromy.inverse_images.end())
      throw Error("monodromy table insufficient: no inverse image for move " + wrap.name);
    wrap.arc = it->second;
  } else {
    auto it = f.monodromy.inverse_feet.find(wrap.name);
    if (it == f.monodromy.inverse_feet.end())
      throw Error("monodromy table insufficient: no inverse feet for move " + wrap.name);
    wrap.foot1 = it->second.first;
    wrap.foot2 = it->second.second;
    wrap.band_chart = wrap.band_chart + "w";
  }
  out.moves.push_back(wrap);

  if (!f.pair_names.empty()) {
    for (int i = 2; i <= n; ++i)
      out.pair_names.push_back(f.pair_names[static_cast<size_t>(i - 1)]);
    out.pair_names.push_back(f.pair_names[0]);
  }

  // Arc and point images of the surviving moves: re-key one index down and
  // transport onto the new base page.
  auto rekey_down = [&](const std::string& key) -> std::optional<std::string> {
    if (key == minus_key(1)) return std::nullopt;  // replaced by the wrap entry
    for (int i = 2; i <= n; ++i)
      if (key == minus_key(i)) return minus_key(i - 1);
    return key;
  };
  for (const auto& [key, course] : f.monodromy.arc_images) {
    auto nk = rekey_down(key);
    if (!nk) continue;
    if (auto moved = detail::try_descend(b.pages[1], r1.piece_parent, course))
      out.monodromy.arc_images[*nk] = *moved;
  }
  for (const auto& [key, pts] : f.monodromy.point_images) {
    auto nk = rekey_down(key);
    if (!nk) continue;
    try {
      std::vector<SurfPt> moved;
      for (const SurfPt& sp : pts) moved.push_back(descend_point(b.pages[1], r1.piece_parent, sp));
      out.monodromy.point_images[*nk] = std::move(moved);
    } catch (const Error&) {
    }
  }
  // The wrap move's own negative decoration has a canonical image on the new
  // base: for an add, the old band's co-core; for a cut, the midpoints of the
  // old scars.
  if (wrap.type == MoveType::Add) {
    out.monodromy.arc_images[minus_key(n)] = band_cocore(r1.band_chart, r1.band_width);
  } else {
    auto mid = [&](int eid) -> SurfPt {
      EdgeRef r = b.pages[1].edge_ref(eid);
      Seg s = b.pages[1].edge_seg(eid);
      return {b.pages[1].charts[static_cast<size_t>(r.chart)].name, lerp(s.a, s.b, Rat(1, 2))};
    };
    out.monodromy.point_images[minus_key(n)] = {mid(r1.scar_pairs.front().first),
                                                mid(r1.scar_pairs.back().second)};
  }

  // Twist data rides along when it avoids the first move's locus.
  for (const std::string& tn : f.monodromy.twist_word) {
    auto it = f.monodromy.twist_curves.find(tn);
    if (it == f.monodromy.twist_curves.end()) continue;
    if (out.monodromy.twist_curves.count(tn)) {
      out.monodromy.twist_word.push_back(tn);
      continue;
    }
    if (auto moved = detail::try_descend(b.pages[1], r1.piece_parent, it->second)) {
      out.monodromy.twist_curves[tn] = *moved;
      out.monodromy.twist_word.push_back(tn);
    }
  }

  for (const auto& [key, course] : f.sorting_arcs)
    if (key.move >= 2 && key.page >= 1)
      out.sorting_arcs[{key.move - 1, key.positive, key.page - 1}] = course;

  // Replay the shifted book and transport the surviving inverse entries
  // through the wrap move's surgery on the new final page.
  FobBuild nb = build_pages(out);
  const MoveRecord& wr = nb.records.back();
  const ChartComplex& nfinal = nb.pages.back();
  for (int i = 2; i <= n; ++i) {
    const FobMove& mv = f.move(i);
    if (mv.type == MoveType::Cut) {
      auto it = f.monodromy.inverse_images.find(mv.name);
      if (it == f.monodromy.inverse_images.end()) continue;
      if (auto moved = detail::try_descend(nfinal, wr.piece_parent, it->second))
        out.monodromy.inverse_images[mv.name] = *moved;
    } else {
      auto it = f.monodromy.inverse_feet.find(mv.name);
      if (it == f.monodromy.inverse_feet.end()) continue;
      auto fa = detail::descend_foot(nfinal, wr.piece_parent, it->second.first);
      auto fb = detail::descend_foot(nfinal, wr.piece_parent, it->second.second);
      if (fa && fb) out.monodromy.inverse_feet[mv.name] = {*fa, *fb};
    }
  }
  return out;
}

// Rotates the last move to the front: the base page is rebuilt by undoing the
// last move at its recorded monodromy image, the former final page drops off,
// and the new first move re-performs the old last move on the new base. The
// surviving moves' loci and the tables are transported through the rebuild;
// the new first move's own table entry is not derivable and is omitted.
inline FoliatedOpenBook unshift_once(const FoliatedOpenBook& f) {
  int n = f.num_moves();
  if (n == 0) return f;
  build_pages(f);  // the input must replay before it is rebuilt
  const FobMove& last = f.move(n);

  FoliatedOpenBook out;
  out.name = f.name;
  out.slot_depth = f.slot_depth;
  out.corner_margin = f.corner_margin;
  out.interval_labels = f.interval_labels;

  ChartComplex base = f.base_page;
  FobMove undo;
  undo.name = last.name;
  std::map<std::string, std::string> base_gen;  // renames of the base rebuild
  if (last.type == MoveType::Add) {
    auto it = f.monodromy.arc_images.find(minus_key(n));
    if (it == f.monodromy.arc_images.end())
      throw Error("monodromy table insufficient: no image for " + minus_key(n));
    CutResult cr = cut_along(base, it->second);
    base_gen = cr.piece_parent;
    undo.type = MoveType::Add;
    undo.foot1 = detail::third_of_edge(base, cr.scar_pairs.front().first);
    undo.foot2 = detail::third_of_edge(base, cr.scar_pairs.front().second);
    undo.width = last.width;
    undo.band_chart = last.band_chart + "u";
  } else {
    auto it = f.monodromy.point_images.find(minus_key(n));
    if (it == f.monodromy.point_images.end() || it->second.size() != 2)
      throw Error("monodromy table insufficient: no point images for " + minus_key(n));
    FootSpec f1 = detail::foot_around(base, it->second[0]);
    FootSpec f2 = detail::foot_around(base, it->second[1]);
    Rat w = Rat(1, 8);
    BandResult br = add_band(base, last.name + "u", f1, f2, w, EdgeKind::Leaf);
    undo.type = MoveType::Cut;
    undo.arc = band_cocore(br.band_chart, w);
  }
  out.base_page = base;
  out.moves.push_back(undo);

  // Incremental replay: each surviving move's locus was drawn on an old page,
  // so it is re-expressed on the corresponding new page before being applied.
  std::vector<ChartComplex> npages;
  std::map<std::string, std::string> gen = base_gen;
  ChartComplex cur = out.base_page;
  npages.push_back(cur);
  detail::apply_move(cur, undo, gen);
  npages.push_back(cur);
  for (int i = 1; i <= n - 1; ++i) {
    FobMove m = detail::transport_move(cur, gen, f.move(i));
    out.moves.push_back(m);
    detail::apply_move(cur, m, gen);
    npages.push_back(cur);
  }

  if (!f.pair_names.empty()) {
    out.pair_names.push_back(f.pair_names[static_cast<size_t>(n - 1)]);
    for (int i = 1; i <= n - 1; ++i)
      out.pair_names.push_back(f.pair_names[static_cast<size_t>(i - 1)]);
  }

  // Tables: re-key one index up and transport onto the new base page.
  auto rekey_up = [&](const std::string& key) -> std::optional<std::string> {
    if (key == minus_key(n)) return std::nullopt;  // consumed by the rebuild
    for (int i = 1; i <= n - 1; ++i)
      if (key == minus_key(i)) return minus_key(i + 1);
    return key;
  };
  for (const auto& [key, course] : f.monodromy.arc_images) {
    auto nk = rekey_up(key);
    if (!nk) continue;
    if (auto moved = detail::try_descend(out.base_page, base_gen, course))
      out.monodromy.arc_images[*nk] = *moved;
  }
  for (const auto& [key, pts] : f.monodromy.point_images) {
    auto nk = rekey_up(key);
    if (!nk) continue;
    try {
      std::vector<SurfPt> moved;
      for (const SurfPt& sp : pts) moved.push_back(descend_point(out.base_page, base_gen, sp));
      out.monodromy.point_images[*nk] = std::move(moved);
    } catch (const Error&) {
    }
  }
  for (const std::string& tn : f.monodromy.twist_word) {
    auto it = f.monodromy.twist_curves.find(tn);
    if (it == f.monodromy.twist_curves.end()) continue;
    if (out.monodromy.twist_curves.count(tn)) {
      out.monodromy.twist_word.push_back(tn);
      continue;
    }
    if (auto moved = detail::try_descend(out.base_page, base_gen, it->second)) {
      out.monodromy.twist_curves[tn] = *moved;
      out.monodromy.twist_word.push_back(tn);
    }
  }
  for (const auto& [key, course] : f.sorting_arcs) {
    if (key.move > n - 1 || key.page > n - 1) continue;
    if (auto moved = detail::try_descend(npages[static_cast<size_t>(key.page + 1)], gen, course))
      out.sorting_arcs[{key.move + 1, key.positive, key.page + 1}] = *moved;
  }

  build_pages(out);  // the rebuilt book must replay cleanly
  return out;
}

inline FoliatedOpenBook shift(const FoliatedOpenBook& f, int r) {
  FoliatedOpenBook cur = f;
  for (; r > 0; --r) cur = shift_once(cur);
  for (; r < 0; ++r) cur = unshift_once(cur);
  return cur;
}

// ---- stabilization ----

struct StabilizationData {
  Course gamma;  // arc on the base page with endpoints on binding edges
  Rat width = Rat(1, 8);
  std::string band_chart = "H";
  Rat foot_radius = Rat(1, 50);
  std::string twist_name = "tau";
  bool positive_twist = true;
  Rat reroute_eps = Rat(1, 1000);
  // Authored replacements for move loci and sorting arcs that should be
  // re-chosen through the new handle (mechanical twisting preserves crossing
  // counts, so sortedness can only change through new choices).
  std::map<std::string, Course> move_arcs;                         // by move name
  std::map<std::string, std::pair<FootSpec, FootSpec>> move_feet;  // by move name
  std::map<SortingArcKey, Course> sorting_arcs;
  std::map<std::string, Course> arc_image_overrides;  // by table key
};

// Attaches a handle along the given arc to every page and composes the
// monodromy with a twist along the closed-up curve. Table entries are
// rewritten mechanically by the single-crossing reroute unless overridden.
// Inverse entries are dropped: they do not transport through a stabilization.
inline FoliatedOpenBook stabilize(const FoliatedOpenBook& f, const StabilizationData& sd) {
  if (sd.gamma.legs.empty()) throw Error("stabilize: empty arc");
  FoliatedOpenBook out;
  out.name = f.name + "*";
  out.slot_depth = f.slot_depth;
  out.corner_margin = f.corner_margin;
  out.interval_labels = f.interval_labels;
  out.pair_names = f.pair_names;

  ChartComplex base = f.base_page;
  auto binding_foot = [&](const std::string& chart, const Pt& p) -> FootSpec {
    auto loc = locate_on_boundary(base, chart, p);
    if (!loc) throw Error("stabilize: arc endpoint not on the boundary of " + chart);
    if (base.edge(loc->edge_id).kind != EdgeKind::Binding)
      throw Error("stabilize: arc endpoint not on a binding edge");
    Rat len = base.edge_len1(loc->edge_id);
    if (len == 0) throw Error("stabilize: degenerate binding edge");
    Rat r = sd.foot_radius / len;
    if (loc->t - r <= 0 || loc->t + r >= 1)
      throw Error("stabilize: no room for a foot around the arc endpoint");
    Seg s = base.edge_seg(loc->edge_id);
    return {chart, lerp(s.a, s.b, loc->t - r), lerp(s.a, s.b, loc->t + r)};
  };
  FootSpec f1 = binding_foot(sd.gamma.legs.front().chart, sd.gamma.legs.front().pts.front());
  FootSpec f2 = binding_foot(sd.gamma.legs.back().chart, sd.gamma.legs.back().pts.back());
  add_band(base, sd.band_chart, f1, f2, sd.width, EdgeKind::Binding);

  // The closed twist curve: the arc continued through the new handle.
  Course cyc = sd.gamma;
  cyc.closed = true;
  {
    auto locate_seam = [&](const std::string& chart, const Pt& p) {
      auto loc = locate_on_boundary(base, chart, p);
      if (!loc || base.edge(loc->edge_id).kind != EdgeKind::Seam)
        throw Error("stabilize: arc endpoint did not land on the band seam");
      return *loc;
    };
    BoundaryLoc end2 = locate_seam(cyc.legs.back().chart, cyc.legs.back().pts.back());
    BoundaryLoc end1 = locate_seam(cyc.legs.front().chart, cyc.legs.front().pts.front());
    Leg core;
    core.chart = sd.band_chart;
    core.pts.push_back(base.seam_image(end2.edge_id, end2.t));
    core.pts.push_back(base.seam_image(end1.edge_id, end1.t));
    cyc.legs.push_back(std::move(core));
  }
  try {
    validate_course(base, cyc);
  } catch (const Error& e) {
    throw Error(std::string("stabilize: closed-up curve invalid: ") + e.what());
  }

  out.base_page = base;
  for (const FobMove& mv : f.moves) {
    FobMove m = mv;
    auto ita = sd.move_arcs.find(mv.name);
    if (ita != sd.move_arcs.end()) {
      if (m.type != MoveType::Cut) throw Error("stabilize: move_arcs names an add move");
      m.arc = ita->second;
    }
    auto itf = sd.move_feet.find(mv.name);
    if (itf != sd.move_feet.end()) {
      if (m.type != MoveType::Add) throw Error("stabilize: move_feet names a cut move");
      m.foot1 = itf->second.first;
      m.foot2 = itf->second.second;
    }
    out.moves.push_back(std::move(m));
  }

  for (const auto& [key, course] : f.monodromy.arc_images) {
    auto ov = sd.arc_image_overrides.find(key);
    if (ov != sd.arc_image_overrides.end()) {
      out.monodromy.arc_images[key] = ov->second;
      continue;
    }
    out.monodromy.arc_images[key] =
        twist_course(base, course, cyc, sd.positive_twist, sd.reroute_eps);
  }
  out.monodromy.point_images = f.monodromy.point_images;
  out.monodromy.twist_curves = f.monodromy.twist_curves;
  out.monodromy.twist_word = f.monodromy.twist_word;
  out.monodromy.twist_curves[sd.twist_name] = cyc;
  out.monodromy.twist_word.push_back(sd.twist_name);

  out.sorting_arcs = f.sorting_arcs;
  for (const auto& [key, course] : sd.sorting_arcs) out.sorting_arcs[key] = course;

  build_pages(out);
  return out;
}

// ---- sufficient stabilization ----

struct StabilizationPiece {
  std::vector<std::string> charts;
  int frontier_intervals = 0;  // boundary intervals along the removed neighborhood
  int euler = 0;
};

struct StabilizationReport {
  bool sufficiently_stabilized = true;
  std::vector<StabilizationPiece> pieces;  // components of the complement
};

namespace detail {

struct CutBase {
  ChartComplex cc;
  std::map<std::string, std::string> pieces;
  std::vector<std::pair<int, int>> scar_pairs;
};

// The base page cut along every positive sorting arc.
inline CutBase cut_base_along_plus_arcs(const FobBuild& b) {
  CutBase out;
  out.cc = b.pages[0];
  for (int i : b.fob.plus_moves()) {
    Course arc = sorting_arc_plus(b, i, 0);
    arc = descend_course(out.cc, out.pieces, arc);
    CutResult r = cut_along(out.cc, arc);
    for (const auto& [child, parent] : r.piece_parent) out.pieces[child] = parent;
    for (const auto& pr : r.scar_pairs) out.scar_pairs.push_back(pr);
  }
  return out;
}

}  // namespace detail

// Cuts the base page along all positive sorting arcs.  Removing a thin
// neighborhood of the leaves together with those arcs leaves the resulting
// components, trimmed along their leaf-material boundary; the book is
// sufficiently stabilized when every component meets the removed neighborhood
// in at least two boundary intervals.
inline StabilizationReport is_sufficiently_stabilized(const FobBuild& b) {
  SortedReport sr = is_sorted(b);
  if (!sr.sorted)
    throw Error("is_sufficiently_stabilized: the book is not sorted (" +
                (sr.violations.empty() ? std::string("?") : sr.violations[0].message) + ")");
  detail::CutBase cb = detail::cut_base_along_plus_arcs(b);
  const ChartComplex& cc = cb.cc;

  // Components of the cut surface: union-find over charts joined by seams.
  size_t nc = cc.charts.size();
  std::vector<size_t> parent(nc);
  for (size_t i = 0; i < nc; ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t x) -> size_t {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Seam& s : cc.seams) {
    size_t a = static_cast<size_t>(cc.edge_ref(s.a).chart);
    size_t g = static_cast<size_t>(cc.edge_ref(s.b).chart);
    parent[find(a)] = find(g);
  }
  std::map<size_t, std::vector<size_t>> comps;
  for (size_t i = 0; i < nc; ++i) comps[find(i)].push_back(i);

  StabilizationReport rep;
  for (const auto& [root, members] : comps) {
    StabilizationPiece piece;
    std::set<std::string> names;
    for (size_t ci : members) names.insert(cc.charts[ci].name);
    piece.charts.assign(names.begin(), names.end());
    {
      ChartComplex sub;
      for (size_t ci : members) sub.charts.push_back(cc.charts[ci]);
      std::set<int> ids;
      for (size_t ci : members)
        for (const BEdge& e : cc.charts[ci].edges) ids.insert(e.id);
      for (const Seam& s : cc.seams)
        if (ids.count(s.a) && ids.count(s.b)) sub.seams.push_back(s);
      piece.euler = sub.euler_characteristic();
    }
    // Leaf-kind boundary edges are original leaf material or cut scars; both
    // lie along the removed neighborhood, so the frontier intervals are the
    // maximal Leaf-kind runs of the piece's boundary cycles.  An all-leaf
    // cycle is a frontier circle, not an interval pair, and counts once.
    for (const auto& cyc : cc.boundary_cycles()) {
      EdgeRef r0 = cc.edge_ref(cyc.front().edge_id);
      if (find(static_cast<size_t>(r0.chart)) != root) continue;
      int sz = static_cast<int>(cyc.size());
      int runs = 0;
      bool any = false, all = true;
      for (int k = 0; k < sz; ++k) {
        bool curs = cc.edge(cyc[static_cast<size_t>(k)].edge_id).kind == EdgeKind::Leaf;
        bool prev =
            cc.edge(cyc[static_cast<size_t>((k + sz - 1) % sz)].edge_id).kind == EdgeKind::Leaf;
        any = any || curs;
        all = all && curs;
        if (curs && !prev) ++runs;
      }
      if (all && any) runs = 1;
      piece.frontier_intervals += runs;
    }
    if (piece.frontier_intervals < 2) rep.sufficiently_stabilized = false;
    rep.pieces.push_back(std::move(piece));
  }
  return rep;
}

inline StabilizationReport is_sufficiently_stabilized(const FoliatedOpenBook& f) {
  return is_sufficiently_stabilized(build_pages(f));
}

// ---- partial open book ----

struct CuttingArc {
  std::string name;
  Course arc;  // on the base page, inside the region away from the leaves
};

struct PartialOpenBook {
  ChartComplex base_page;
  ChartComplex cut_page;           // base page cut along the positive sorting arcs
  std::set<std::string> p_charts;  // charts of the complement region
  std::map<std::string, std::string> pieces;   // cut genealogy
  std::vector<CuttingArc> basis;               // cutting arcs of the region
  std::map<std::string, Course> basis_images;  // their monodromy images, by name
};

// Restricts a sufficiently stabilized book to the complement of the leaves
// and the positive arcs, together with a recorded cutting-arc basis and the
// basis arcs' monodromy images.  Cutting arcs must stay inside the region
// (their descent fails on any arc crossing a cut scar) and must run from
// binding to binding.
inline PartialOpenBook derive_partial_open_book(const FobBuild& b,
                                                const std::vector<CuttingArc>& basis) {
  StabilizationReport rep = is_sufficiently_stabilized(b);
  if (!rep.sufficiently_stabilized)
    throw Error("derive_partial_open_book: the book is not sufficiently stabilized");
  detail::CutBase cb = detail::cut_base_along_plus_arcs(b);
  PartialOpenBook out;
  out.base_page = b.pages[0];
  out.cut_page = cb.cc;
  out.pieces = cb.pieces;
  for (const StabilizationPiece& p : rep.pieces)
    for (const std::string& c : p.charts) out.p_charts.insert(c);
  auto on_binding = [&](const std::string& chart, const Pt& p) {
    for (const Chart& ch : out.cut_page.charts) {
      if (ch.name != chart) continue;
      for (const BEdge& e : ch.edges)
        if (e.kind == EdgeKind::Binding && on_segment(p, out.cut_page.edge_seg(e.id)))
          return true;
    }
    return false;
  };
  for (const CuttingArc& ca : basis) {
    Course on_cut = descend_course(out.cut_page, cb.pieces, ca.arc);
    for (const Leg& leg : on_cut.legs)
      if (!out.p_charts.count(leg.chart))
        throw Error("derive_partial_open_book: cutting arc " + ca.name +
                    " leaves the complement region");
    if (!on_binding(on_cut.legs.front().chart, on_cut.legs.front().pts.front()) ||
        !on_binding(on_cut.legs.back().chart, on_cut.legs.back().pts.back()))
      throw Error("derive_partial_open_book: cutting arc " + ca.name +
                  " must start and end on the binding");
    auto it = b.fob.monodromy.arc_images.find(ca.name);
    if (it == b.fob.monodromy.arc_images.end())
      throw Error("monodromy table insufficient: no image for cutting arc " + ca.name);
    out.basis.push_back(ca);
    out.basis_images[ca.name] = it->second;
  }
  return out;
}

// ---- gluing two books ----

struct FobMatching {
  std::vector<std::pair<std::string, std::string>> leaf_pairs;  // left leaf -> right leaf
};

struct GluedPages {
  std::vector<ChartComplex> pages;  // closed-up pages; charts prefixed "L:"/"R:"
  int binding_components = 0;
  std::map<std::string, Course> arc_images;  // prefixed table entries
};

namespace detail {

inline ChartComplex prefix_complex(const ChartComplex& src, const std::string& prefix,
                                   int id_offset) {
  ChartComplex out = src;
  for (auto& c : out.charts) {
    c.name = prefix + c.name;
    for (auto& e : c.edges) e.id += id_offset;
  }
  for (auto& s : out.seams) {
    s.a += id_offset;
    s.b += id_offset;
  }
  for (auto& lf : out.leaves) {
    lf.name = prefix + lf.name;
    for (auto& e : lf.course) e += id_offset;
  }
  out.next_edge_id += id_offset;
  return out;
}

inline ChartComplex merge_complexes(const ChartComplex& a, const ChartComplex& b) {
  ChartComplex out = a;
  for (const auto& c : b.charts) out.charts.push_back(c);
  for (const auto& s : b.seams) out.seams.push_back(s);
  for (const auto& l : b.leaves) out.leaves.push_back(l);
  if (b.next_edge_id > out.next_edge_id) out.next_edge_id = b.next_edge_id;
  return out;
}

inline Course prefix_course(const Course& c, const std::string& prefix) {
  Course out = c;
  for (auto& leg : out.legs) leg.chart = prefix + leg.chart;
  return out;
}

// Seams two leaves of one complex together with reversed proportional
// identification, refining both courses to a common breakpoint pattern.
inline void seam_leaves(ChartComplex& cc, const std::string& lname, const std::string& rname) {
  auto leaf_index = [&](const std::string& nm) -> size_t {
    for (size_t i = 0; i < cc.leaves.size(); ++i)
      if (cc.leaves[i].name == nm) return i;
    throw Error("seam_leaves: unknown leaf " + nm);
  };
  size_t li = leaf_index(lname);
  size_t ri = leaf_index(rname);

  auto fractions = [&](const Leaf& lf) {
    std::vector<Rat> fr;
    Rat len = leaf_length(cc, lf);
    if (len == 0) throw Error("seam_leaves: zero-length leaf " + lf.name);
    Rat acc = 0;
    for (size_t i = 0; i + 1 < lf.course.size(); ++i) {
      acc += cc.edge_len1(lf.course[i]);
      fr.push_back(acc / len);
    }
    return fr;
  };
  std::vector<Rat> targets;
  for (const Rat& x : fractions(cc.leaves[li])) targets.push_back(x);
  for (const Rat& x : fractions(cc.leaves[ri])) targets.push_back(1 - x);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  auto refine = [&](size_t leaf_i, bool reversed) {
    for (const Rat& f : targets) {
      Rat want = reversed ? 1 - f : f;
      const Leaf& lf = cc.leaves[leaf_i];
      Rat len = leaf_length(cc, lf);
      Rat pos = want * len;
      Rat acc = 0;
      for (size_t i = 0; i < lf.course.size(); ++i) {
        Rat el = cc.edge_len1(lf.course[i]);
        if (pos > acc && pos < acc + el) {
          cc.split_edge(lf.course[i], (pos - acc) / el);
          break;
        }
        acc += el;
      }
    }
  };
  refine(li, false);
  refine(ri, true);

  const std::vector<int> lcourse = cc.leaves[li].course;
  const std::vector<int> rcourse = cc.leaves[ri].course;
  if (lcourse.size() != rcourse.size())
    throw Error("seam_leaves: refinement mismatch between " + lname + " and " + rname);
  size_t k = lcourse.size();
  for (size_t i = 0; i < k; ++i) cc.add_seam(lcourse[i], rcourse[k - 1 - i]);

  std::vector<Leaf> kept;
  for (const Leaf& lf : cc.leaves)
    if (lf.name != lname && lf.name != rname) kept.push_back(lf);
  cc.leaves = std::move(kept);
}

}  // namespace detail

// Glues two books with mirror-image boundary data along every leaf. The pages
// close up into surfaces bounded by binding circles alone; the books must
// agree in move structure (a cut on one side matches an add on the other,
// index by index) and in the decoration pattern along every matched leaf.
inline GluedPages glue_fobs(const FoliatedOpenBook& L, const FoliatedOpenBook& R,
                            const FobMatching& m) {
  if (L.num_moves() != R.num_moves())
    throw Error("gluing mismatch: the books have different move counts");
  for (int i = 1; i <= L.num_moves(); ++i)
    if ((L.move(i).type == MoveType::Cut) == (R.move(i).type == MoveType::Cut))
      throw Error("gluing mismatch: move " + std::to_string(i) +
                  " has the same type on both sides");
  FobBuild bL = build_pages(L);
  FobBuild bR = build_pages(R);
  if (!is_sorted(bL).sorted) throw Error("gluing requires sorted books: " + L.name + " is not");
  if (!is_sorted(bR).sorted) throw Error("gluing requires sorted books: " + R.name + " is not");

  std::set<std::string> lls, rls, lseen, rseen;
  for (const auto& lf : bL.pages[0].leaves) lls.insert(lf.name);
  for (const auto& lf : bR.pages[0].leaves) rls.insert(lf.name);
  for (const auto& [a, g] : m.leaf_pairs) {
    if (!lls.count(a)) throw Error("gluing matching names unknown left leaf " + a);
    if (!rls.count(g)) throw Error("gluing matching names unknown right leaf " + g);
    if (!lseen.insert(a).second) throw Error("left leaf matched twice: " + a);
    if (!rseen.insert(g).second) throw Error("right leaf matched twice: " + g);
  }
  if (lseen != lls || rseen != rls)
    throw Error("gluing matching must cover every leaf of both books");

  // Boundary compatibility: along each matched leaf the decorations must
  // appear in the same move order with opposite signs when one side is read
  // from its negative end.
  {
    FoliationBoundary fl = boundary_data(bL);
    FoliationBoundary fr = boundary_data(bR);
    for (const auto& [a, g] : m.leaf_pairs) {
      std::vector<LeafMark> ml, mr;
      for (const auto& mk : fl.marks)
        if (mk.leaf == a) ml.push_back(mk);
      for (const auto& mk : fr.marks)
        if (mk.leaf == g) mr.push_back(mk);
      std::sort(ml.begin(), ml.end(),
                [](const LeafMark& x, const LeafMark& y) { return x.depth < y.depth; });
      std::sort(mr.begin(), mr.end(),
                [](const LeafMark& x, const LeafMark& y) { return x.depth > y.depth; });
      if (ml.size() != mr.size())
        throw Error("gluing mismatch: different mark counts on " + a + " and " + g);
      for (size_t i = 0; i < ml.size(); ++i)
        if (ml[i].move != mr[i].move || ml[i].positive == mr[i].positive)
          throw Error("gluing mismatch: decorations disagree on " + a + " and " + g);
    }
  }

  int off = 0;
  for (const auto& page : bL.pages)
    if (page.next_edge_id > off) off = page.next_edge_id;

  GluedPages out;
  std::optional<int> chi;
  for (size_t i = 0; i < bL.pages.size(); ++i) {
    ChartComplex g = detail::merge_complexes(detail::prefix_complex(bL.pages[i], "L:", 0),
                                             detail::prefix_complex(bR.pages[i], "R:", off));
    for (const auto& [a, r] : m.leaf_pairs) detail::seam_leaves(g, "L:" + a, "R:" + r);
    g.validate_geometry();
    for (const auto& cyc : g.boundary_cycles())
      for (const auto& de : cyc)
        if (g.edge(de.edge_id).kind != EdgeKind::Binding)
          throw Error("gluing left non-binding boundary on page " + std::to_string(i));
    int c = g.euler_characteristic();
    if (chi && *chi != c) throw Error("glued pages disagree in Euler characteristic");
    chi = c;
    out.pages.push_back(std::move(g));
  }
  out.binding_components = static_cast<int>(out.pages[0].boundary_cycles().size());
  for (const auto& [k, v] : L.monodromy.arc_images)
    out.arc_images["L:" + k] = detail::prefix_course(v, "L:");
  for (const auto& [k, v] : R.monodromy.arc_images)
    out.arc_images["R:" + k] = detail::prefix_course(v, "R:");
  return out;
}

}  // namespace bsfh
