#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bsfh/geometry.hpp"
#include "bsfh/rational.hpp"

namespace bsfh {

// A page (or Heegaard surface) is a "chart complex": disjoint simple CCW
// polygons with exact rational coordinates, glued along boundary edges by
// affine identifications (seams). Non-seam boundary edges are binding edges
// (B) or leaf edges (A). Leaves are oriented runs of non-binding boundary
// edges; traversed along the surface's boundary orientation a leaf runs from
// its e_+ end to its e_- end.

enum class EdgeKind { Binding, Leaf, Seam };

struct BEdge {
  int id = -1;
  EdgeKind kind = EdgeKind::Binding;
  std::string label;  // leaf name for Leaf edges; free-form tag otherwise
};

struct Chart {
  std::string name;
  Polygon poly;              // CCW
  std::vector<BEdge> edges;  // edges[i] runs poly[i] -> poly[(i+1) % n]
};

// Identification of edge a with edge b: CCW parameter s on a matches CCW
// parameter 1-s on b (orientation-compatible gluing of two CCW polygons).
struct Seam {
  int a = -1;
  int b = -1;
};

struct Leaf {
  std::string name;
  std::vector<int> course;  // edge ids, ordered e_+ -> e_- (boundary CCW)
};

struct EdgeRef {
  int chart = -1;
  int pos = -1;
};

struct SurfPt {
  std::string chart;
  Pt p;
};

struct Leg {
  std::string chart;
  std::vector<Pt> pts;
};

struct Course {
  std::vector<Leg> legs;
  bool closed = false;
};

struct DirectedEdge {
  int edge_id = -1;
  bool forward = true;  // true: traversed in polygon CCW direction
};

class ChartComplex {
 public:
  std::vector<Chart> charts;
  std::vector<Seam> seams;
  std::vector<Leaf> leaves;
  int next_edge_id = 0;

  // ---- construction ----

  int add_chart(const std::string& name, Polygon poly, std::vector<std::pair<EdgeKind, std::string>> edge_specs) {
    if (poly.size() != edge_specs.size())
      throw Error("add_chart: edge spec count mismatch for chart " + name);
    if (!polygon_simple(poly)) throw Error("add_chart: polygon not simple in chart " + name);
    if (!polygon_ccw(poly)) throw Error("add_chart: polygon not CCW in chart " + name);
    Chart c;
    c.name = name;
    c.poly = std::move(poly);
    for (auto& [kind, label] : edge_specs) {
      BEdge e;
      e.id = next_edge_id++;
      e.kind = kind;
      e.label = label;
      c.edges.push_back(e);
    }
    charts.push_back(std::move(c));
    return static_cast<int>(charts.size()) - 1;
  }

  void add_seam(int a, int b) {
    edge_mut(a).kind = EdgeKind::Seam;
    edge_mut(b).kind = EdgeKind::Seam;
    seams.push_back({a, b});
  }

  // ---- indexing ----

  int chart_index(const std::string& name) const {
    for (size_t i = 0; i < charts.size(); ++i)
      if (charts[i].name == name) return static_cast<int>(i);
    throw Error("chart not found: " + name);
  }

  const Chart& chart(const std::string& name) const { return charts[chart_index(name)]; }

  EdgeRef edge_ref(int edge_id) const {
    for (size_t ci = 0; ci < charts.size(); ++ci) {
      const auto& es = charts[ci].edges;
      for (size_t ei = 0; ei < es.size(); ++ei)
        if (es[ei].id == edge_id) return {static_cast<int>(ci), static_cast<int>(ei)};
    }
    throw Error("edge not found: id " + std::to_string(edge_id));
  }

  const BEdge& edge(int edge_id) const {
    EdgeRef r = edge_ref(edge_id);
    return charts[r.chart].edges[r.pos];
  }

  BEdge& edge_mut(int edge_id) {
    EdgeRef r = edge_ref(edge_id);
    return charts[r.chart].edges[r.pos];
  }

  Seg edge_seg(int edge_id) const {
    EdgeRef r = edge_ref(edge_id);
    const Polygon& poly = charts[r.chart].poly;
    return {poly[r.pos], poly[(r.pos + 1) % poly.size()]};
  }

  int seam_partner(int edge_id) const {
    for (const auto& s : seams) {
      if (s.a == edge_id) return s.b;
      if (s.b == edge_id) return s.a;
    }
    return -1;
  }

  Pt point_at(int edge_id, const Rat& t) const {
    Seg s = edge_seg(edge_id);
    return lerp(s.a, s.b, t);
  }

  // Point on the seam partner matching parameter t on this edge.
  Pt seam_image(int edge_id, const Rat& t) const {
    int p = seam_partner(edge_id);
    if (p < 0) throw Error("seam_image: edge has no partner");
    return point_at(p, 1 - t);
  }

  // L1 length of a straight edge; the canonical boundary measure (edges are
  // axis-aligned or monotone segments, so this is additive under splitting).
  Rat edge_len1(int edge_id) const {
    Seg s = edge_seg(edge_id);
    Rat dx = s.b.x - s.a.x;
    Rat dy = s.b.y - s.a.y;
    if (dx < 0) dx = -dx;
    if (dy < 0) dy = -dy;
    return dx + dy;
  }

  // ---- boundary traversal ----

  // Given a directed boundary (non-seam) edge, return the next directed
  // boundary edge along the surface boundary (hopping through seams).
  DirectedEdge boundary_next(const DirectedEdge& de) const {
    if (edge(de.edge_id).kind == EdgeKind::Seam) throw Error("boundary_next: seam edge");
    // End vertex of the directed edge, then rotate through seam hops.
    int cur = de.edge_id;
    bool fwd = de.forward;
    int guard = 0;
    for (;;) {
      if (++guard > 10000) throw Error("boundary_next: seam cycle detected");
      EdgeRef r = edge_ref(cur);
      const Chart& c = charts[r.chart];
      int n = static_cast<int>(c.poly.size());
      // The next polygon edge around the end vertex of (cur, fwd).
      int next_pos = fwd ? (r.pos + 1) % n : (r.pos + n - 1) % n;
      const BEdge& ne = c.edges[next_pos];
      bool next_fwd = fwd;  // CCW continuation keeps direction; reversed walks stay reversed
      if (ne.kind != EdgeKind::Seam) return {ne.id, next_fwd};
      int partner = seam_partner(ne.id);
      if (partner < 0) throw Error("boundary_next: unpaired seam edge " + std::to_string(ne.id));
      // Hop: parameter s on ne matches 1-s on partner, so a forward walk
      // entering the seam continues as a forward walk leaving the partner.
      cur = partner;
      fwd = next_fwd;
    }
  }

  std::vector<DirectedEdge> boundary_cycle_from(int edge_id) const {
    std::vector<DirectedEdge> cycle;
    DirectedEdge de{edge_id, true};
    do {
      cycle.push_back(de);
      de = boundary_next(de);
      if (cycle.size() > 100000) throw Error("boundary_cycle_from: runaway walk");
    } while (de.edge_id != edge_id);
    return cycle;
  }

  std::vector<std::vector<DirectedEdge>> boundary_cycles() const {
    std::vector<std::vector<DirectedEdge>> cycles;
    std::set<int> seen;
    for (const auto& c : charts)
      for (const auto& e : c.edges) {
        if (e.kind == EdgeKind::Seam || seen.count(e.id)) continue;
        auto cyc = boundary_cycle_from(e.id);
        for (auto& de : cyc) seen.insert(de.edge_id);
        cycles.push_back(std::move(cyc));
      }
    return cycles;
  }

  // ---- global topology ----

  int euler_characteristic() const {
    // Vertices merged across seam endpoint identifications.
    std::map<std::pair<int, int>, int> vid;  // (chart, vertex pos) -> index
    int nv = 0;
    for (size_t ci = 0; ci < charts.size(); ++ci)
      for (size_t vi = 0; vi < charts[ci].poly.size(); ++vi)
        vid[{static_cast<int>(ci), static_cast<int>(vi)}] = nv++;
    std::vector<int> uf(nv);
    for (int i = 0; i < nv; ++i) uf[i] = i;
    std::function<int(int)> find = [&](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    auto unite = [&](int a, int b) { uf[find(a)] = find(b); };
    auto vertex_of = [&](int edge_id, bool start) {
      EdgeRef r = edge_ref(edge_id);
      int n = static_cast<int>(charts[r.chart].poly.size());
      int pos = start ? r.pos : (r.pos + 1) % n;
      return vid.at({r.chart, pos});
    };
    for (const auto& s : seams) {
      unite(vertex_of(s.a, true), vertex_of(s.b, false));
      unite(vertex_of(s.a, false), vertex_of(s.b, true));
    }
    std::set<int> vroots;
    for (int i = 0; i < nv; ++i) vroots.insert(find(i));
    int V = static_cast<int>(vroots.size());
    int total_edges = 0;
    for (const auto& c : charts) total_edges += static_cast<int>(c.edges.size());
    int E = total_edges - static_cast<int>(seams.size());
    int F = static_cast<int>(charts.size());
    return V - E + F;
  }

  // Maximal runs of consecutive non-binding edges along each boundary cycle,
  // each run in CCW order. A boundary cycle without any binding edge is a
  // closed leaf: skipped when allowed, an error otherwise.
  std::vector<std::vector<int>> boundary_leaf_runs(bool allow_bindingless) const {
    std::vector<std::vector<int>> out;
    for (const auto& cyc : boundary_cycles()) {
      size_t start = 0;
      bool has_binding = false;
      for (size_t i = 0; i < cyc.size(); ++i)
        if (edge(cyc[i].edge_id).kind == EdgeKind::Binding) {
          start = i;
          has_binding = true;
          break;
        }
      if (!has_binding) {
        if (!allow_bindingless)
          throw Error("closed leaf: boundary cycle without binding edges");
        continue;
      }
      std::vector<int> run;
      for (size_t k = 1; k <= cyc.size(); ++k) {
        const auto& de = cyc[(start + k) % cyc.size()];
        if (edge(de.edge_id).kind == EdgeKind::Binding) {
          if (!run.empty()) {
            out.push_back(run);
            run.clear();
          }
        } else {
          run.push_back(de.edge_id);
        }
      }
    }
    return out;
  }

  // ---- validation ----

  // Chart and seam consistency only (no leaf checks); this is the part that
  // still applies to closed-up surfaces such as doubled pages.
  void validate_geometry() const {
    std::set<int> ids;
    std::set<std::string> names;
    for (const auto& c : charts) {
      if (!names.insert(c.name).second) throw Error("duplicate chart name: " + c.name);
      if (c.poly.size() != c.edges.size()) throw Error("edge/vertex mismatch in " + c.name);
      if (!polygon_simple(c.poly)) throw Error("chart polygon not simple: " + c.name);
      if (!polygon_ccw(c.poly)) throw Error("chart polygon not CCW: " + c.name);
      for (const auto& e : c.edges)
        if (!ids.insert(e.id).second) throw Error("duplicate edge id " + std::to_string(e.id));
    }
    std::set<int> seamed;
    for (const auto& s : seams) {
      for (int e : {s.a, s.b}) {
        if (!ids.count(e)) throw Error("seam references missing edge " + std::to_string(e));
        if (edge(e).kind != EdgeKind::Seam)
          throw Error("seam edge not marked Seam: " + std::to_string(e));
        if (!seamed.insert(e).second)
          throw Error("edge in two seams: " + std::to_string(e));
      }
    }
    for (const auto& c : charts)
      for (const auto& e : c.edges)
        if (e.kind == EdgeKind::Seam && !seamed.count(e.id))
          throw Error("Seam-kind edge not in any seam: " + std::to_string(e.id));
  }

  void validate() const {
    validate_geometry();
    // Leaves: every maximal non-binding run of every boundary cycle must be
    // exactly one declared leaf course, and every leaf must occur once.
    auto run_list = boundary_leaf_runs(leaves.empty());
    std::set<std::vector<int>> runs(run_list.begin(), run_list.end());
    if (runs.size() != leaves.size())
      throw Error("leaf count mismatch: " + std::to_string(runs.size()) + " boundary runs vs " +
                  std::to_string(leaves.size()) + " declared leaves");
    for (const auto& lf : leaves) {
      if (lf.course.empty()) throw Error("empty leaf " + lf.name);
      if (!runs.count(lf.course))
        throw Error("leaf course does not match any boundary run: " + lf.name);
      for (int eid : lf.course) {
        const BEdge& e = edge(eid);
        if (e.kind != EdgeKind::Leaf)
          throw Error("leaf course contains non-leaf edge in " + lf.name);
        if (e.label != lf.name) throw Error("leaf edge label mismatch in " + lf.name);
      }
    }
  }

  // ---- edge splitting ----

  // Splits an edge (and its seam partner, if any) at parameter t in (0,1).
  // Returns the ids of the two pieces of the requested edge, in CCW order.
  std::pair<int, int> split_edge(int edge_id, const Rat& t) {
    if (t <= 0 || t >= 1) throw Error("split_edge: parameter not interior");
    int partner = seam_partner(edge_id);
    auto [a1, a2] = split_edge_raw(edge_id, t);
    if (partner >= 0) {
      auto [b1, b2] = split_edge_raw(partner, 1 - t);
      seams.erase(std::remove_if(seams.begin(), seams.end(),
                                 [&](const Seam& s) {
                                   return s.a == edge_id || s.b == edge_id;
                                 }),
                  seams.end());
      // a1 covers params [0,t] of the original; it matches b2 ([1-t,1]).
      seams.push_back({a1, b2});
      seams.push_back({a2, b1});
    }
    // Update leaf courses.
    for (auto& lf : leaves)
      for (size_t i = 0; i < lf.course.size(); ++i)
        if (lf.course[i] == edge_id) {
          lf.course[i] = a1;
          lf.course.insert(lf.course.begin() + i + 1, a2);
          break;
        }
    return {a1, a2};
  }

 private:
  std::pair<int, int> split_edge_raw(int edge_id, const Rat& t) {
    EdgeRef r = edge_ref(edge_id);
    Chart& c = charts[r.chart];
    int n = static_cast<int>(c.poly.size());
    Pt mid = lerp(c.poly[r.pos], c.poly[(r.pos + 1) % n], t);
    BEdge e1 = c.edges[r.pos];
    BEdge e2 = c.edges[r.pos];
    e1.id = next_edge_id++;
    e2.id = next_edge_id++;
    c.poly.insert(c.poly.begin() + r.pos + 1, mid);
    c.edges[r.pos] = e1;
    c.edges.insert(c.edges.begin() + r.pos + 1, e2);
    return {e1.id, e2.id};
  }
};

}  // namespace bsfh
