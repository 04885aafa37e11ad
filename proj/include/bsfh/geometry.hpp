#pragma once

#include <array>
#include <vector>

#include "bsfh/rational.hpp"

namespace bsfh {

using Polygon = std::vector<Pt>;  // simple, counterclockwise

inline Rat polygon_area2(const Polygon& poly) {
  Rat a = 0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Pt& p = poly[i];
    const Pt& q = poly[(i + 1) % poly.size()];
    a += cross(p, q);
  }
  return a;
}

inline bool polygon_ccw(const Polygon& poly) { return polygon_area2(poly) > 0; }

inline bool polygon_simple(const Polygon& poly) {
  size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i)
    if (poly[i] == poly[(i + 1) % n]) return false;  // zero-length edge
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      Seg si{poly[i], poly[(i + 1) % n]};
      Seg sj{poly[j], poly[(j + 1) % n]};
      Isect is = intersect_segments(si, sj);
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        if (is.kind == IsectKind::Overlap) return false;
        // Adjacent edges must meet exactly at the shared vertex.
        if (is.kind == IsectKind::Point) {
          const Pt& shared = (j == i + 1) ? poly[j] : poly[0];
          if (is.p != shared) return false;
        }
      } else if (is.kind != IsectKind::None) {
        return false;
      }
    }
  return true;
}

// 0 = outside, 1 = on boundary, 2 = strictly inside.
inline int point_in_polygon(const Pt& p, const Polygon& poly) {
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i)
    if (on_segment(p, Seg{poly[i], poly[(i + 1) % n]})) return 1;
  bool inside = false;
  for (size_t i = 0; i < n; ++i) {
    const Pt& a = poly[i];
    const Pt& b = poly[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      // x-coordinate of the edge at height p.y
      Rat xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (xint > p.x) inside = !inside;
    }
  }
  return inside ? 2 : 0;
}

// Inside-or-boundary test for a CCW triangle.
inline bool point_in_ccw_triangle(const Pt& p, const Pt& a, const Pt& b, const Pt& c) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

// Ear-clipping triangulation of a simple CCW polygon (straight/collinear vertices
// allowed). Returns index triples into the input vertex list.
inline std::vector<std::array<int, 3>> triangulate(const Polygon& poly) {
  int n = static_cast<int>(poly.size());
  if (n < 3) throw Error("triangulate: fewer than 3 vertices");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::array<int, 3>> tris;
  while (idx.size() > 3) {
    bool clipped = false;
    for (size_t k = 0; k < idx.size(); ++k) {
      int ip = idx[(k + idx.size() - 1) % idx.size()];
      int iv = idx[k];
      int in_ = idx[(k + 1) % idx.size()];
      if (orient(poly[ip], poly[iv], poly[in_]) <= 0) continue;
      bool blocked = false;
      for (int iw : idx) {
        if (iw == ip || iw == iv || iw == in_) continue;
        if (point_in_ccw_triangle(poly[iw], poly[ip], poly[iv], poly[in_])) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      tris.push_back({ip, iv, in_});
      idx.erase(idx.begin() + k);
      clipped = true;
      break;
    }
    if (!clipped) throw Error("triangulate: no ear found (degenerate polygon?)");
  }
  if (orient(poly[idx[0]], poly[idx[1]], poly[idx[2]]) <= 0)
    throw Error("triangulate: final triangle degenerate");
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

inline Pt triangle_centroid(const Pt& a, const Pt& b, const Pt& c) {
  return {(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3};
}

inline Pt midpoint(const Pt& a, const Pt& b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

}  // namespace bsfh
