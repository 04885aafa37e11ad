#include <string>
#include <utility>
#include <vector>

#include "bsfh/chart_complex.hpp"
#include "bsfh/surgery.hpp"
#include "doctest.h"

using bsfh::ChartComplex;
using bsfh::Course;
using bsfh::EdgeKind;
using bsfh::FootSpec;
using bsfh::Leg;
using bsfh::Polygon;
using bsfh::Pt;
using bsfh::Rat;

namespace {

// One rectangular chart: binding along the bottom and top, a leaf on each
// vertical side (A1 on the right, A2 on the left).
ChartComplex one_rect_page() {
  ChartComplex cc;
  Polygon poly = {{0, 0}, {4, 0}, {4, 2}, {0, 2}};
  int ci = cc.add_chart("S", poly,
                        {{EdgeKind::Binding, "B"},
                         {EdgeKind::Leaf, "A1"},
                         {EdgeKind::Binding, "B"},
                         {EdgeKind::Leaf, "A2"}});
  cc.leaves.push_back({"A1", {cc.charts[ci].edges[1].id}});
  cc.leaves.push_back({"A2", {cc.charts[ci].edges[3].id}});
  return cc;
}

// The same disk presented as two rectangles glued along a vertical seam.
ChartComplex two_rect_page() {
  ChartComplex cc;
  Polygon p1 = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  Polygon p2 = {{2, 0}, {4, 0}, {4, 2}, {2, 2}};
  int c1 = cc.add_chart("L", p1,
                        {{EdgeKind::Binding, "B"},
                         {EdgeKind::Binding, ""},
                         {EdgeKind::Binding, "B"},
                         {EdgeKind::Leaf, "A2"}});
  int c2 = cc.add_chart("R", p2,
                        {{EdgeKind::Binding, "B"},
                         {EdgeKind::Leaf, "A1"},
                         {EdgeKind::Binding, "B"},
                         {EdgeKind::Binding, ""}});
  cc.add_seam(cc.charts[c1].edges[1].id, cc.charts[c2].edges[3].id);
  cc.leaves.push_back({"A1", {cc.charts[c2].edges[1].id}});
  cc.leaves.push_back({"A2", {cc.charts[c1].edges[3].id}});
  return cc;
}

std::vector<std::pair<Pt, Pt>> leaf_segs(const ChartComplex& cc, const std::string& name) {
  for (const auto& lf : cc.leaves)
    if (lf.name == name) {
      std::vector<std::pair<Pt, Pt>> out;
      for (int eid : lf.course) {
        auto s = cc.edge_seg(eid);
        out.push_back({s.a, s.b});
      }
      return out;
    }
  throw bsfh::Error("leaf not found: " + name);
}

}  // namespace

TEST_SUITE("chart_surgery") {
  TEST_CASE("single chart page validates and measures") {
    ChartComplex cc = one_rect_page();
    cc.validate();
    CHECK(cc.euler_characteristic() == 1);
    auto cycles = cc.boundary_cycles();
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0].size() == 4);
    const bsfh::Leaf& a1 = cc.leaves[0];
    CHECK(bsfh::leaf_length(cc, a1) == 2);
    CHECK(bsfh::leaf_position(cc, a1, {"S", {4, Rat(1) / 2}}) == Rat(1) / 2);
    auto loc = bsfh::locate_on_boundary(cc, "S", {4, Rat(1) / 2});
    REQUIRE(loc.has_value());
    CHECK(loc->edge_id == a1.course[0]);
    CHECK(loc->t == Rat(1) / 4);
  }

  TEST_CASE("two charts glued along a seam behave as one disk") {
    ChartComplex cc = two_rect_page();
    cc.validate();
    CHECK(cc.euler_characteristic() == 1);
    auto cycles = cc.boundary_cycles();
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0].size() == 6);  // seam edges do not appear on the boundary

    SUBCASE("seam points identify matching coordinates") {
      for (const auto& s : cc.seams)
        CHECK(cc.point_at(s.a, Rat(1) / 3) == cc.point_at(s.b, Rat(2) / 3));
    }

    SUBCASE("splitting a seam edge keeps the gluing coherent") {
      int seam_edge = cc.seams[0].a;
      cc.split_edge(seam_edge, Rat(1) / 4);
      cc.validate();
      CHECK(cc.seams.size() == 2);
      CHECK(cc.euler_characteristic() == 1);
      CHECK(cc.boundary_cycles().size() == 1);
      for (const auto& s : cc.seams)
        CHECK(cc.point_at(s.a, Rat(1) / 3) == cc.point_at(s.b, Rat(2) / 3));
    }
  }

  TEST_CASE("splitting a leaf edge extends its course") {
    ChartComplex cc = one_rect_page();
    int a1_edge = cc.leaves[0].course[0];
    auto [e1, e2] = cc.split_edge(a1_edge, Rat(1) / 4);
    cc.validate();
    REQUIRE(cc.leaves[0].course == std::vector<int>{e1, e2});
    CHECK(cc.edge_seg(e1).b == Pt{4, Rat(1) / 2});
    CHECK(bsfh::leaf_length(cc, cc.leaves[0]) == 2);
  }

  TEST_CASE("cutting a disk along an interior arc resects the leaves") {
    ChartComplex cc = one_rect_page();
    Course arc;
    arc.legs.push_back({"S", {{4, 1}, {0, 1}}});
    auto res = bsfh::cut_along(cc, arc);
    cc.validate();

    REQUIRE(cc.charts.size() == 2);
    CHECK(cc.charts[0].name == "S.0");
    CHECK(cc.charts[1].name == "S.1");
    CHECK(cc.euler_characteristic() == 2);  // cutting along an arc raises chi by one
    CHECK(res.scar_pairs.size() == 1);
    CHECK(res.piece_parent.at("S.0") == "S");
    CHECK(res.piece_parent.at("S.1") == "S");

    // A1 keeps its positive corner (4,0) and continues through the scar into
    // the far part of A2; symmetrically for A2.
    auto a1 = leaf_segs(cc, "A1");
    REQUIRE(a1.size() == 3);
    CHECK(a1[0] == std::pair<Pt, Pt>{{4, 0}, {4, 1}});
    CHECK(a1[1] == std::pair<Pt, Pt>{{4, 1}, {0, 1}});
    CHECK(a1[2] == std::pair<Pt, Pt>{{0, 1}, {0, 0}});
    auto a2 = leaf_segs(cc, "A2");
    REQUIRE(a2.size() == 3);
    CHECK(a2[0] == std::pair<Pt, Pt>{{0, 2}, {0, 1}});
    CHECK(a2[1] == std::pair<Pt, Pt>{{0, 1}, {4, 1}});
    CHECK(a2[2] == std::pair<Pt, Pt>{{4, 1}, {4, 2}});

    SUBCASE("points and courses transfer through the cut by renaming") {
      auto below = bsfh::descend_point(cc, res.piece_parent, {"S", {1, Rat(1) / 2}});
      CHECK(below.chart == "S.0");
      auto above = bsfh::descend_point(cc, res.piece_parent, {"S", {1, Rat(3) / 2}});
      CHECK(above.chart == "S.1");
      Course c;
      c.legs.push_back({"S.0", {{1, 0}, {2, Rat(1) / 2}}});
      Course up = bsfh::ascend_course(c, res.piece_parent, {});
      CHECK(up.legs[0].chart == "S");
      CHECK(up.legs[0].pts == c.legs[0].pts);
    }
  }

  TEST_CASE("cutting across a seam visits both charts") {
    ChartComplex cc = two_rect_page();
    Course arc;
    arc.legs.push_back({"R", {{4, 1}, {2, 1}}});
    arc.legs.push_back({"L", {{2, 1}, {0, 1}}});
    auto res = bsfh::cut_along(cc, arc);
    cc.validate();

    CHECK(cc.charts.size() == 4);
    CHECK(cc.euler_characteristic() == 2);
    CHECK(cc.seams.size() == 2);  // the seam was split at the junction
    CHECK(cc.boundary_cycles().size() == 2);
    CHECK(res.scar_pairs.size() == 2);

    auto a1 = leaf_segs(cc, "A1");
    REQUIRE(a1.size() == 4);
    CHECK(a1[0] == std::pair<Pt, Pt>{{4, 0}, {4, 1}});
    CHECK(a1[1] == std::pair<Pt, Pt>{{4, 1}, {2, 1}});
    CHECK(a1[2] == std::pair<Pt, Pt>{{2, 1}, {0, 1}});
    CHECK(a1[3] == std::pair<Pt, Pt>{{0, 1}, {0, 0}});
    auto a2 = leaf_segs(cc, "A2");
    REQUIRE(a2.size() == 4);
    CHECK(a2[0] == std::pair<Pt, Pt>{{0, 2}, {0, 1}});
    CHECK(a2[3] == std::pair<Pt, Pt>{{4, 1}, {4, 2}});
  }

  TEST_CASE("an arc with both ends on one leaf would close that leaf") {
    ChartComplex cc = one_rect_page();
    Course arc;
    arc.legs.push_back({"S", {{4, Rat(1) / 2}, {2, 1}, {4, Rat(3) / 2}}});
    CHECK_THROWS_WITH_AS(bsfh::cut_along(cc, arc),
                         "closed leaf: boundary cycle without binding edges", bsfh::Error);
  }

  TEST_CASE("a leaf-sided band joins two pages and their leaves") {
    ChartComplex cc;
    Polygon p1 = {{0, 0}, {4, 0}, {4, 2}, {0, 2}};
    Polygon p2 = {{10, 0}, {14, 0}, {14, 2}, {10, 2}};
    int c1 = cc.add_chart("S", p1,
                          {{EdgeKind::Binding, "B"},
                           {EdgeKind::Leaf, "A1"},
                           {EdgeKind::Binding, "B"},
                           {EdgeKind::Binding, "B"}});
    int c2 = cc.add_chart("T", p2,
                          {{EdgeKind::Binding, "B"},
                           {EdgeKind::Leaf, "A2"},
                           {EdgeKind::Binding, "B"},
                           {EdgeKind::Binding, "B"}});
    cc.leaves.push_back({"A1", {cc.charts[c1].edges[1].id}});
    cc.leaves.push_back({"A2", {cc.charts[c2].edges[1].id}});
    cc.validate();
    CHECK(cc.euler_characteristic() == 2);

    FootSpec f1{"S", {4, Rat(9) / 10}, {4, Rat(11) / 10}};
    FootSpec f2{"T", {14, Rat(9) / 10}, {14, Rat(11) / 10}};
    auto band = bsfh::add_band(cc, "band", f1, f2, Rat(1) / 2, EdgeKind::Leaf);
    cc.validate();

    CHECK(cc.euler_characteristic() == 1);  // attaching a band lowers chi by one
    CHECK(cc.boundary_cycles().size() == 1);

    auto a1 = leaf_segs(cc, "A1");
    REQUIRE(a1.size() == 3);
    CHECK(a1[0] == std::pair<Pt, Pt>{{4, 0}, {4, Rat(9) / 10}});
    CHECK(a1[1] == std::pair<Pt, Pt>{{1, 0}, {1, Rat(1) / 2}});  // band right side
    CHECK(a1[2] == std::pair<Pt, Pt>{{14, Rat(11) / 10}, {14, 2}});
    auto a2 = leaf_segs(cc, "A2");
    REQUIRE(a2.size() == 3);
    CHECK(a2[0] == std::pair<Pt, Pt>{{14, 0}, {14, Rat(9) / 10}});
    CHECK(a2[1] == std::pair<Pt, Pt>{{0, Rat(1) / 2}, {0, 0}});  // band left side
    CHECK(a2[2] == std::pair<Pt, Pt>{{4, Rat(11) / 10}, {4, 2}});

    SUBCASE("courses cannot ascend through the band") {
      Course c;
      c.legs.push_back({"band", {{Rat(1) / 2, 0}, {Rat(1) / 2, Rat(1) / 2}}});
      CHECK_THROWS_AS(bsfh::ascend_course(c, {}, {band.band_chart}), bsfh::Error);
    }
  }

  TEST_CASE("a binding-sided band leaves every leaf untouched") {
    ChartComplex cc = one_rect_page();
    auto before = cc.leaves;
    FootSpec f1{"S", {1, 0}, {Rat(3) / 2, 0}};
    FootSpec f2{"S", {Rat(5) / 2, 0}, {3, 0}};
    bsfh::add_band(cc, "H", f1, f2, 1, EdgeKind::Binding);
    cc.validate();
    CHECK(cc.euler_characteristic() == 0);  // disk plus a handle-shaped band: annulus
    CHECK(cc.boundary_cycles().size() == 2);
    REQUIRE(cc.leaves.size() == before.size());
    for (size_t i = 0; i < before.size(); ++i) {
      CHECK(cc.leaves[i].name == before[i].name);
      CHECK(cc.leaves[i].course == before[i].course);
    }
  }

  TEST_CASE("band feet must match the side kind") {
    ChartComplex cc = one_rect_page();
    // Feet on leaf edges with binding sides: rejected.
    FootSpec f1{"S", {4, Rat(1) / 2}, {4, 1}};
    FootSpec f2{"S", {4, Rat(3) / 2}, {4, Rat(7) / 4}};
    CHECK_THROWS_AS(bsfh::add_band(cc, "H", f1, f2, 1, EdgeKind::Binding), bsfh::Error);
  }

  TEST_CASE("doubling a page along its binding closes it up") {
    ChartComplex cc = one_rect_page();
    auto dbl = bsfh::double_pages(cc);
    dbl.cc.validate_geometry();

    CHECK(dbl.cc.charts.size() == 2);
    CHECK(dbl.mirror_chart.at("S") == "S~m");
    // Disk doubled along two boundary arcs: an annulus.
    CHECK(dbl.cc.euler_characteristic() == 0);
    auto cycles = dbl.cc.boundary_cycles();
    REQUIRE(cycles.size() == 2);

    // Each boundary circle is a leaf together with its mirror.
    int a1_edge = cc.leaves[0].course[0];
    int a1_mirror = dbl.mirror_edge.at(a1_edge);
    bool found = false;
    for (const auto& cyc : cycles) {
      std::vector<int> ids;
      for (const auto& de : cyc) ids.push_back(de.edge_id);
      std::sort(ids.begin(), ids.end());
      std::vector<int> want{a1_edge, a1_mirror};
      std::sort(want.begin(), want.end());
      if (ids == want) found = true;
    }
    CHECK(found);

    // Mirror charts reflect across the x-axis with reversed vertex order.
    const bsfh::Chart& mc = dbl.cc.chart("S~m");
    CHECK(bsfh::polygon_ccw(mc.poly));
    CHECK(mc.poly[0] == Pt{0, -2});
    // Reference leaves for both halves survive doubling.
    CHECK(dbl.cc.leaves.size() == 4);
  }

  TEST_CASE("course validation rejects malformed input") {
    ChartComplex cc = one_rect_page();
    Course bad;

    SUBCASE("endpoint in the interior") {
      bad.legs.push_back({"S", {{1, 1}, {2, 1}}});
      CHECK_THROWS_AS(bsfh::validate_course(cc, bad), bsfh::Error);
    }
    SUBCASE("runs along the boundary") {
      bad.legs.push_back({"S", {{4, Rat(1) / 2}, {4, Rat(3) / 2}}});
      CHECK_THROWS_AS(bsfh::validate_course(cc, bad), bsfh::Error);
    }
    SUBCASE("self-intersecting polyline") {
      bad.legs.push_back({"S", {{4, 1}, {1, 1}, {2, Rat(1) / 2}, {2, 2}}});
      CHECK_THROWS_AS(bsfh::validate_course(cc, bad), bsfh::Error);
    }
    SUBCASE("junction points that do not match") {
      ChartComplex two = two_rect_page();
      bad.legs.push_back({"R", {{4, 1}, {2, 1}}});
      bad.legs.push_back({"L", {{2, Rat(1) / 2}, {0, 1}}});
      CHECK_THROWS_AS(bsfh::validate_course(two, bad), bsfh::Error);
    }
  }

  TEST_CASE("page validation catches inconsistent leaf declarations") {
    ChartComplex cc = one_rect_page();
    SUBCASE("missing leaf") {
      cc.leaves.pop_back();
      CHECK_THROWS_AS(cc.validate(), bsfh::Error);
    }
    SUBCASE("course not a boundary run") {
      cc.leaves[0].course.push_back(cc.leaves[1].course[0]);
      CHECK_THROWS_AS(cc.validate(), bsfh::Error);
    }
    SUBCASE("label mismatch") {
      cc.edge_mut(cc.leaves[0].course[0]).label = "wrong";
      CHECK_THROWS_AS(cc.validate(), bsfh::Error);
    }
  }

  TEST_CASE("degenerate charts are rejected on construction") {
    ChartComplex cc;
    Polygon bowtie = {{0, 0}, {2, 2}, {2, 0}, {0, 2}};
    CHECK_THROWS_AS(cc.add_chart("X", bowtie,
                                 {{EdgeKind::Binding, ""},
                                  {EdgeKind::Binding, ""},
                                  {EdgeKind::Binding, ""},
                                  {EdgeKind::Binding, ""}}),
                    bsfh::Error);
    Polygon cw = {{0, 0}, {0, 2}, {2, 2}, {2, 0}};
    CHECK_THROWS_AS(cc.add_chart("Y", cw,
                                 {{EdgeKind::Binding, ""},
                                  {EdgeKind::Binding, ""},
                                  {EdgeKind::Binding, ""},
                                  {EdgeKind::Binding, ""}}),
                    bsfh::Error);
  }
}
