#include "doctest.h"

#include "bsfh/fob_ops.hpp"
#include "bsfh/io.hpp"

using namespace bsfh;

namespace {

std::string data_path(const std::string& name) { return std::string(BSFH_DATA_DIR "/") + name; }

}  // namespace

TEST_CASE("disk book with one cut and one add replays and is sorted") {
  FoliatedOpenBook f = load_fob(data_path("fob_ball1.json"));
  CHECK(f.num_moves() == 2);
  CHECK(f.move(1).type == MoveType::Cut);
  CHECK(f.move(2).type == MoveType::Add);

  ValidationReport vr = validate_fob(f);
  for (const auto& v : vr.violations) INFO(v);
  REQUIRE(vr.ok());

  FobBuild b = build_pages(f);
  REQUIRE(b.num_pages() == 3);
  CHECK(b.pages[0].euler_characteristic() == 1);
  CHECK(b.pages[1].euler_characteristic() == 2);
  CHECK(b.pages[2].euler_characteristic() == 1);
  for (const auto& page : b.pages) CHECK(page.leaves.size() == 2);

  SortedReport sr = is_sorted(b);
  for (const auto& v : sr.violations) INFO("page ", v.page, ": ", v.message);
  CHECK(sr.sorted);
}

TEST_CASE("disk book boundary data and arc diagram") {
  FoliatedOpenBook f = load_fob(data_path("fob_ball1.json"));
  FobBuild b = build_pages(f);
  FoliationBoundary fb = boundary_data(b);
  CHECK(fb.leaves == std::vector<std::string>{"A", "B"});
  CHECK(fb.plus_moves == std::vector<int>{1});
  CHECK(fb.minus_moves == std::vector<int>{2});
  REQUIRE(fb.marks.size() == 4);
  CHECK(fb.closed_binding_components == 0);
  CHECK(fb.binding_arc_components == 2);

  ArcDiagram z = derive_arc_diagram(b, fb);
  REQUIRE(z.lines.size() == 2);
  CHECK(z.lines[0] == std::vector<int>{1, 0});
  CHECK(z.lines[1] == std::vector<int>{1, 0});
  REQUIRE(z.interval_labels.size() == 2);
  CHECK(z.interval_labels[0] == std::vector<std::string>{"rho1"});
  CHECK(z.interval_labels[1] == std::vector<std::string>{"rho2"});
}

TEST_CASE("disconnected-base book with a connecting handle is sorted") {
  FoliatedOpenBook f = load_fob(data_path("fob_ball2.json"));
  CHECK(f.move(1).type == MoveType::Add);
  CHECK(f.move(2).type == MoveType::Cut);

  ValidationReport vr = validate_fob(f);
  for (const auto& v : vr.violations) INFO(v);
  REQUIRE(vr.ok());

  FobBuild b = build_pages(f);
  REQUIRE(b.num_pages() == 3);
  CHECK(b.pages[0].euler_characteristic() == 1);
  CHECK(b.pages[1].euler_characteristic() == 0);
  CHECK(b.pages[2].euler_characteristic() == 1);

  SortedReport sr = is_sorted(b);
  for (const auto& v : sr.violations) INFO("page ", v.page, ": ", v.message);
  CHECK(sr.sorted);

  FoliationBoundary fb = boundary_data(b);
  ArcDiagram z = derive_arc_diagram(b, fb);
  REQUIRE(z.lines.size() == 2);
  CHECK(z.lines[0] == std::vector<int>{0, 1});
  CHECK(z.lines[1] == std::vector<int>{0, 1});
}

TEST_CASE("the two disk books mirror each other along the boundary") {
  FoliatedOpenBook l = load_fob(data_path("fob_ball1.json"));
  FoliatedOpenBook r = load_fob(data_path("fob_ball2.json"));
  ArcDiagram zl = derive_arc_diagram(build_pages(l));
  ArcDiagram zr = derive_arc_diagram(build_pages(r));
  CHECK(zl.reversed().lines == zr.lines);
}

TEST_CASE("gluing the two disk books closes every page") {
  FoliatedOpenBook l = load_fob(data_path("fob_ball1.json"));
  FoliatedOpenBook r = load_fob(data_path("fob_ball2.json"));
  FobMatching m = load_matching(data_path("matching_balls.json"));
  GluedPages g = glue_fobs(l, r, m);
  REQUIRE(g.pages.size() == 3);
  for (const auto& page : g.pages) {
    CHECK(page.euler_characteristic() == 0);
    CHECK(page.leaves.empty());
  }
  CHECK(g.binding_components == 2);

  FobMatching bad = m;
  bad.leaf_pairs[1].second = bad.leaf_pairs[0].second;
  CHECK_THROWS_WITH_AS(glue_fobs(l, r, bad), doctest::Contains("matched twice"), Error);
}

TEST_CASE("fob json round-trip is the identity") {
  json j1 = read_json_file(data_path("fob_ball1.json"));
  FoliatedOpenBook f1 = fob_from_json(j1);
  json j2 = fob_to_json(f1);
  FoliatedOpenBook f2 = fob_from_json(j2);
  CHECK(fob_to_json(f2) == j2);
  CHECK(complex_isomorphic(f1.base_page, f2.base_page));
  CHECK(f1.num_moves() == f2.num_moves());
  CHECK(f1.monodromy.arc_images.size() == f2.monodromy.arc_images.size());
}

TEST_CASE("torus book replays but the band blocks sorting") {
  FoliatedOpenBook f = load_fob(data_path("fob_torus1_unsorted.json"));
  REQUIRE(f.num_moves() == 4);
  ValidationReport vr = validate_fob(f);
  for (const auto& v : vr.violations) INFO(v);
  REQUIRE(vr.ok());

  FobBuild b = build_pages(f);
  REQUIRE(b.num_pages() == 5);
  const int chi[] = {1, 2, 1, 2, 1};
  for (int p = 0; p < 5; ++p) CHECK(b.pages[static_cast<size_t>(p)].euler_characteristic() == chi[p]);

  SortedReport sr = is_sorted(b);
  CHECK_FALSE(sr.sorted);
  bool crossing_witness = false;
  for (const auto& v : sr.violations)
    if (v.page == 2 && v.message.find("gamma2-") != std::string::npos &&
        v.message.find("gamma3+") != std::string::npos &&
        v.message.find("intersect") != std::string::npos)
      crossing_witness = true;
  CHECK(crossing_witness);
}

TEST_CASE("torus book with a handle is sorted with the expected boundary") {
  FoliatedOpenBook f = load_fob(data_path("fob_torus1.json"));
  ValidationReport vr = validate_fob(f);
  for (const auto& v : vr.violations) INFO(v);
  REQUIRE(vr.ok());

  FobBuild b = build_pages(f);
  REQUIRE(b.num_pages() == 5);
  const int chi[] = {0, 1, 0, 1, 0};
  for (int p = 0; p < 5; ++p) CHECK(b.pages[static_cast<size_t>(p)].euler_characteristic() == chi[p]);

  SortedReport sr = is_sorted(b);
  for (const auto& v : sr.violations) INFO("page ", v.page, ": ", v.message);
  REQUIRE(sr.sorted);

  FoliationBoundary fb = boundary_data(b);
  CHECK(fb.marks.size() == 8);
  ArcDiagram z = derive_arc_diagram(b, fb);
  REQUIRE(z.lines.size() == 2);
  CHECK(z.lines[0] == std::vector<int>{1, 3, 2, 0});
  CHECK(z.lines[1] == std::vector<int>{1, 3, 2, 0});
  REQUIRE(z.interval_labels.size() == 2);
  CHECK(z.interval_labels[0] == std::vector<std::string>{"1", "2", "3"});
  CHECK(z.interval_labels[1] == std::vector<std::string>{"4", "5", "6"});
}

TEST_CASE("shifting the torus book rotates moves and relocates the obstruction") {
  FoliatedOpenBook f = load_fob(data_path("fob_torus1_unsorted.json"));
  FoliatedOpenBook g = shift(f, 2);
  REQUIRE(g.num_moves() == 4);
  CHECK(g.move(1).name == "gamma3");
  CHECK(g.move(2).name == "gamma4");
  CHECK(g.move(3).name == "gamma1");
  CHECK(g.move(4).name == "gamma2");
  CHECK(g.move(1).type == MoveType::Cut);
  CHECK(g.move(2).type == MoveType::Add);
  CHECK(g.move(3).type == MoveType::Cut);
  CHECK(g.move(4).type == MoveType::Add);

  // The obstruction follows the renumbering: the blocked pair is now the
  // third move's arc against the second band's co-core.
  SortedReport sr = is_sorted(g);
  CHECK_FALSE(sr.sorted);
  bool witness = false;
  for (const auto& v : sr.violations)
    if (v.page == 2 && v.message.find("B4") != std::string::npos) witness = true;
  CHECK(witness);
}

TEST_CASE("stabilizing the shifted torus book sorts it") {
  FoliatedOpenBook f = load_fob(data_path("fob_torus1_unsorted.json"));
  FoliatedOpenBook g = shift(f, 2);
  StabilizationData sd = load_stabilization(data_path("arc_stab_torus1.json"));
  FoliatedOpenBook sg = stabilize(g, sd);

  FobBuild b = build_pages(sg);
  const int chi[] = {0, 1, 0, 1, 0};
  for (int p = 0; p < 5; ++p) CHECK(b.pages[static_cast<size_t>(p)].euler_characteristic() == chi[p]);

  SortedReport sr = is_sorted(b);
  for (const auto& v : sr.violations) INFO("page ", v.page, ": ", v.message);
  REQUIRE(sr.sorted);

  // Same book, up to page-profile equivalence, as the handle-carrying torus
  // book shifted by the same amount.
  FoliatedOpenBook f5 = load_fob(data_path("fob_torus1.json"));
  CHECK(books_equivalent(sg, shift(f5, 2)));
}

TEST_CASE("shift roundtrip restores the torus book") {
  FoliatedOpenBook f5 = load_fob(data_path("fob_torus1.json"));
  CHECK(books_equivalent(shift(f5, 0), f5));

  FoliatedOpenBook u = shift(shift(f5, 2), -2);
  REQUIRE(u.num_moves() == 4);
  CHECK(u.move(1).name == "gamma1");
  CHECK(u.move(4).name == "gamma4");
  SortedReport sr = is_sorted(u);
  for (const auto& v : sr.violations) INFO("page ", v.page, ": ", v.message);
  CHECK(sr.sorted);
  CHECK(books_equivalent(u, f5));
}

TEST_CASE("minimal sorted books are not sufficiently stabilized") {
  for (const char* file : {"fob_ball1.json", "fob_torus1.json"}) {
    FoliatedOpenBook f = load_fob(data_path(file));
    StabilizationReport rep = is_sufficiently_stabilized(build_pages(f));
    INFO(file);
    CHECK_FALSE(rep.sufficiently_stabilized);
    REQUIRE(rep.pieces.size() == 2);
    for (const auto& p : rep.pieces) {
      CHECK(p.euler == 1);
      CHECK(p.frontier_intervals == 1);
    }
  }
}

TEST_CASE("a band between the two bigons makes the torus book sufficiently stabilized") {
  FoliatedOpenBook f5 = load_fob(data_path("fob_torus1.json"));
  StabilizationData sd = load_stabilization(data_path("arc_stab_suffstab.json"));
  FoliatedOpenBook s = stabilize(f5, sd);
  FobBuild b = build_pages(s);

  SortedReport sr = is_sorted(b);
  for (const auto& v : sr.violations) INFO("page ", v.page, ": ", v.message);
  REQUIRE(sr.sorted);

  StabilizationReport rep = is_sufficiently_stabilized(b);
  CHECK(rep.sufficiently_stabilized);
  REQUIRE(rep.pieces.size() == 1);
  CHECK(rep.pieces[0].euler == 1);
  CHECK(rep.pieces[0].frontier_intervals == 2);

  // the boundary foliation is untouched
  ArcDiagram z5 = derive_arc_diagram(build_pages(f5));
  ArcDiagram z7 = derive_arc_diagram(b);
  CHECK(z5.lines == z7.lines);

  // and the result agrees with the shipped stabilized book
  FoliatedOpenBook f7 = load_fob(data_path("fob_suffstab.json"));
  std::string why;
  CHECK(books_equivalent(s, f7, &why));
  INFO(why);
}

TEST_CASE("the shipped stabilized torus book validates and reports one disk piece") {
  FoliatedOpenBook f7 = load_fob(data_path("fob_suffstab.json"));
  ValidationReport vr = validate_fob(f7);
  for (const auto& v : vr.violations) INFO(v);
  REQUIRE(vr.ok());

  FobBuild b = build_pages(f7);
  std::vector<int> chis;
  for (const auto& page : b.pages) chis.push_back(page.euler_characteristic());
  CHECK(chis == std::vector<int>{-1, 0, -1, 0, -1});
  REQUIRE(is_sorted(b).sorted);

  StabilizationReport rep = is_sufficiently_stabilized(b);
  CHECK(rep.sufficiently_stabilized);
  REQUIRE(rep.pieces.size() == 1);
  CHECK(rep.pieces[0].charts.size() == 7);
}

TEST_CASE("partial open book extraction and its failure modes") {
  FoliatedOpenBook f7 = load_fob(data_path("fob_suffstab.json"));
  FobBuild b7 = build_pages(f7);

  PartialOpenBook pob = derive_partial_open_book(b7, {});
  CHECK(pob.basis.empty());
  CHECK(pob.p_charts.size() == 7);
  CHECK(pob.cut_page.charts.size() == 7);

  std::vector<CuttingArc> arcs = load_cutting_arcs(data_path("cutarcs_suffstab.json"));
  REQUIRE(arcs.size() == 1);
  PartialOpenBook pob2 = derive_partial_open_book(b7, arcs);
  REQUIRE(pob2.basis.size() == 1);
  CHECK(pob2.basis_images.count("c1") == 1);
  CHECK(pob2.basis_images.at("c1").legs.size() == 2);

  FoliatedOpenBook f5 = load_fob(data_path("fob_torus1.json"));
  CHECK_THROWS_WITH_AS(derive_partial_open_book(build_pages(f5), {}),
                       doctest::Contains("not sufficiently stabilized"), Error);

  CuttingArc crossing{"bad", Course{{Leg{"P", {{Rat(1), Rat(0)}, {Rat(1), Rat(1)}}}}}};
  CHECK_THROWS_AS(derive_partial_open_book(b7, {crossing}), Error);

  CuttingArc unnamed{"c9", arcs[0].arc};
  CHECK_THROWS_WITH_AS(derive_partial_open_book(b7, {unnamed}),
                       doctest::Contains("monodromy table insufficient"), Error);
}
