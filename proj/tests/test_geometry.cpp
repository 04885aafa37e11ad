#include "doctest.h"

#include "bsfh/geometry.hpp"
#include "bsfh/rational.hpp"

using namespace bsfh;

namespace {
Pt P(const std::string& x, const std::string& y) { return Pt(parse_rat(x), parse_rat(y)); }
}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("rational parsing round-trips integers, fractions and decimals") {
    CHECK(parse_rat("7") == Rat(7));
    CHECK(parse_rat("-3") == Rat(-3));
    CHECK(parse_rat("7/10") == Rat(7, 10));
    CHECK(parse_rat("0.7") == Rat(7, 10));
    CHECK(parse_rat("-12.5") == Rat(-25, 2));
    CHECK(parse_rat("4.95") == Rat(99, 20));
    CHECK(rat_str(Rat(7, 10)) == "7/10");
    CHECK(rat_str(Rat(-4)) == "-4");
    CHECK(parse_rat(rat_str(Rat(123, 456))) == Rat(123, 456));
    CHECK_THROWS_AS(parse_rat("1/0"), Error);
    CHECK_THROWS_AS(parse_rat(""), Error);
  }

  TEST_CASE("orientation predicate") {
    CHECK(orient(P("0", "0"), P("1", "0"), P("0", "1")) == 1);
    CHECK(orient(P("0", "0"), P("0", "1"), P("1", "0")) == -1);
    CHECK(orient(P("0", "0"), P("1", "1"), P("2", "2")) == 0);
  }

  TEST_CASE("segment intersection: proper crossing") {
    Isect is = intersect_segments({P("0", "0"), P("2", "2")}, {P("0", "2"), P("2", "0")});
    REQUIRE(is.kind == IsectKind::Point);
    CHECK(is.p == P("1", "1"));
    CHECK(is.ta == Rat(1, 2));
    CHECK(is.tb == Rat(1, 2));
  }

  TEST_CASE("segment intersection: T-junction and endpoint touch") {
    Isect t = intersect_segments({P("0", "0"), P("2", "0")}, {P("1", "0"), P("1", "5")});
    REQUIRE(t.kind == IsectKind::Point);
    CHECK(t.p == P("1", "0"));
    CHECK(t.tb == Rat(0));

    Isect e = intersect_segments({P("0", "0"), P("1", "1")}, {P("1", "1"), P("2", "0")});
    REQUIRE(e.kind == IsectKind::Point);
    CHECK(e.p == P("1", "1"));
  }

  TEST_CASE("segment intersection: parallel and collinear cases") {
    CHECK(intersect_segments({P("0", "0"), P("1", "0")}, {P("0", "1"), P("1", "1")}).kind ==
          IsectKind::None);
    CHECK(intersect_segments({P("0", "0"), P("1", "0")}, {P("2", "0"), P("3", "0")}).kind ==
          IsectKind::None);
    CHECK(intersect_segments({P("0", "0"), P("2", "0")}, {P("1", "0"), P("3", "0")}).kind ==
          IsectKind::Overlap);
    Isect touch = intersect_segments({P("0", "0"), P("1", "0")}, {P("1", "0"), P("3", "0")});
    REQUIRE(touch.kind == IsectKind::Point);
    CHECK(touch.p == P("1", "0"));
    CHECK(touch.ta == Rat(1));
    CHECK(touch.tb == Rat(0));
  }

  TEST_CASE("polygon area, orientation, simplicity") {
    Polygon square{P("0", "0"), P("2", "0"), P("2", "2"), P("0", "2")};
    CHECK(polygon_area2(square) == Rat(8));
    CHECK(polygon_ccw(square));
    CHECK(polygon_simple(square));

    Polygon bowtie{P("0", "0"), P("2", "2"), P("2", "0"), P("0", "2")};
    CHECK_FALSE(polygon_simple(bowtie));

    Polygon straight{P("0", "0"), P("1", "0"), P("2", "0"), P("2", "2"), P("0", "2")};
    CHECK(polygon_simple(straight));
  }

  TEST_CASE("point in polygon incl. boundary and horizontal edges") {
    Polygon square{P("0", "0"), P("2", "0"), P("2", "2"), P("0", "2")};
    CHECK(point_in_polygon(P("1", "1"), square) == 2);
    CHECK(point_in_polygon(P("1", "0"), square) == 1);
    CHECK(point_in_polygon(P("0", "0"), square) == 1);
    CHECK(point_in_polygon(P("3", "1"), square) == 0);
    CHECK(point_in_polygon(P("-1", "0"), square) == 0);

    Polygon lshape{P("0", "0"), P("3", "0"), P("3", "1"), P("1", "1"), P("1", "3"), P("0", "3")};
    CHECK(point_in_polygon(P("1/2", "2"), lshape) == 2);
    CHECK(point_in_polygon(P("2", "2"), lshape) == 0);
    CHECK(point_in_polygon(P("2", "1"), lshape) == 1);
  }

  TEST_CASE("triangulation covers the polygon with positive triangles") {
    auto check_tris = [](const Polygon& poly) {
      auto tris = triangulate(poly);
      CHECK(tris.size() == poly.size() - 2);
      Rat total = 0;
      for (auto& t : tris) {
        const Pt& a = poly[t[0]];
        const Pt& b = poly[t[1]];
        const Pt& c = poly[t[2]];
        CHECK(orient(a, b, c) == 1);
        total += cross(b - a, c - a);
      }
      CHECK(total == polygon_area2(poly));
    };
    check_tris({P("0", "0"), P("2", "0"), P("2", "2"), P("0", "2")});
    check_tris({P("0", "0"), P("3", "0"), P("3", "1"), P("1", "1"), P("1", "3"), P("0", "3")});
    // Collinear chain along the bottom edge.
    check_tris({P("0", "0"), P("1", "0"), P("2", "0"), P("3", "0"), P("3", "2"), P("0", "2")});
    // Spiral-ish nonconvex polygon.
    check_tris({P("0", "0"), P("4", "0"), P("4", "4"), P("1", "4"), P("1", "2"), P("2", "2"),
                P("2", "3"), P("3", "3"), P("3", "1"), P("0", "1")});
  }
}
