#include <doctest.h>

#include <cmath>
#include <sstream>

#include "msdg/pattern.hpp"
#include "oracles.hpp"

using namespace msdg;

TEST_SUITE_BEGIN("pattern");

TEST_CASE("load: basic parsing and registry order") {
  std::istringstream in("x,y,type,mark\n0.1,0.2,oak,3.5\n0.3,0.4,pine,1.0\n0.5,0.6,oak,4.5\n");
  const MarkedPointPattern p = load_pattern(in);
  CHECK(p.dim() == 2);
  CHECK(p.points.size() == 3);
  CHECK(p.types[0].name == "oak");
  CHECK(p.types[1].name == "pine");
  CHECK(p.types[0].count == 2);
  CHECK(p.types[1].count == 1);
  CHECK(p.types[0].mark_mean == doctest::Approx(4.0));
  validate_pattern(p);
}

TEST_CASE("load: rejects bad rows by number") {
  SUBCASE("non-numeric mark") {
    std::istringstream in("x,y,type,mark\n0,0,a,1\n1,1,b,NA\n");
    CHECK_THROWS_WITH_AS(load_pattern(in), doctest::Contains("row 2"), std::runtime_error);
  }
  SUBCASE("non-numeric coordinate") {
    std::istringstream in("x,y,type,mark\noops,0,a,1\n");
    CHECK_THROWS_WITH_AS(load_pattern(in), doctest::Contains("row 1"), std::runtime_error);
  }
  SUBCASE("missing field") {
    std::istringstream in("x,y,type,mark\n0,0,a\n");
    CHECK_THROWS_AS(load_pattern(in), std::runtime_error);
  }
  SUBCASE("empty stream") {
    std::istringstream in("");
    CHECK_THROWS_AS(load_pattern(in), std::runtime_error);
  }
  SUBCASE("header only") {
    std::istringstream in("x,y,type,mark\n");
    CHECK_THROWS_AS(load_pattern(in), std::runtime_error);
  }
  SUBCASE("unknown column") {
    std::istringstream in("x,y,species,mark\n0,0,a,1\n");
    CHECK_THROWS_WITH_AS(load_pattern(in), doctest::Contains("type"), std::runtime_error);
  }
}

TEST_CASE("load: zero-area bounding box") {
  std::istringstream in("x,y,type,mark\n1,0,a,1\n1,1,a,2\n");
  CHECK_THROWS_WITH_AS(load_pattern(in), doctest::Contains("zero area"), std::runtime_error);
}

TEST_CASE("load: configured window") {
  LoadOptions opts;
  opts.window = Window{0.0, 2.0, 0.0, 2.0};
  SUBCASE("accepted") {
    std::istringstream in("x,y,type,mark\n1,1,a,1\n0.5,1.5,b,2\n");
    const MarkedPointPattern p = load_pattern(in, opts);
    CHECK(p.window.x_max == 2.0);
  }
  SUBCASE("point outside") {
    std::istringstream in("x,y,type,mark\n1,1,a,1\n3,1,b,2\n");
    CHECK_THROWS_WITH_AS(load_pattern(in, opts), doctest::Contains("row 2"), std::runtime_error);
  }
}

TEST_CASE("load: custom columns and tab delimiter") {
  LoadOptions opts;
  opts.columns = {"easting", "northing", "species", "dbh"};
  opts.delimiter = '\t';
  std::istringstream in("species\teasting\tnorthing\tdbh\nbeech\t0.5\t0.25\t12.5\nelm\t1\t1\t3\n");
  const MarkedPointPattern p = load_pattern(in, opts);
  CHECK(p.points[0].x == 0.5);
  CHECK(p.points[0].y == 0.25);
  CHECK(p.points[0].mark == 12.5);
  CHECK(p.types[0].name == "beech");
}

TEST_CASE("load: duplicate coordinates warn") {
  std::istringstream in("x,y,type,mark\n0,0,a,1\n0,0,b,2\n1,1,a,3\n");
  LoadDiagnostics diag;
  load_pattern(in, {}, &diag);
  CHECK(diag.duplicate_coordinates == 1);
  CHECK(diag.warnings.size() == 1);
}

TEST_CASE("load: paper-scale input") {
  std::ostringstream big;
  big << "x,y,type,mark\n";
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  for (int k = 0; k < 10053; ++k)
    big << coord(rng) << "," << coord(rng) << ",species_" << (k % 37) << "," << coord(rng)
        << "\n";
  std::istringstream in(big.str());
  const MarkedPointPattern p = load_pattern(in);
  CHECK(p.dim() == 37);
  CHECK(p.points.size() == 10053);
  std::size_t total = 0;
  for (const auto& t : p.types) total += t.count;
  CHECK(total == 10053);
}

TEST_CASE("rescale: affine map on the shared window") {
  SUBCASE("midpoint maps to midpoint") {
    auto p = oracles::build_pattern({{5.0, 10.0, 0, 1.0}}, Window{0, 10, 0, 20}, 1);
    const auto r = rescale_to_unit_square(p);
    CHECK(r.points[0].x == doctest::Approx(0.5));
    CHECK(r.points[0].y == doctest::Approx(0.5));
    CHECK(r.on_unit_square);
    CHECK(r.window.x_max == 1.0);
  }
  SUBCASE("hand-evaluated offset window") {
    auto p = oracles::build_pattern({{3.0, 0.0, 0, 1.0}}, Window{2, 4, -1, 1}, 1);
    const auto r = rescale_to_unit_square(p);
    CHECK(r.points[0].x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.points[0].y == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("already unit square: identity, and idempotent") {
    std::mt19937_64 rng(3);
    const auto p = oracles::random_pattern(rng, 2, 40);
    const auto r1 = rescale_to_unit_square(p);
    const auto r2 = rescale_to_unit_square(r1);
    for (std::size_t k = 0; k < p.points.size(); ++k) {
      CHECK(r1.points[k].x == p.points[k].x);
      CHECK(r1.points[k].y == p.points[k].y);
      CHECK(r2.points[k].x == r1.points[k].x);
      CHECK(r2.points[k].y == r1.points[k].y);
    }
  }
  SUBCASE("marks untouched") {
    auto p = oracles::build_pattern({{3.0, 0.5, 0, 7.25}}, Window{2, 4, -1, 1}, 1);
    CHECK(rescale_to_unit_square(p).points[0].mark == 7.25);
  }
}

TEST_CASE("demean: per-type centring") {
  SUBCASE("single type") {
    auto p = oracles::build_pattern(
        {{0.1, 0.1, 0, 1.0}, {0.2, 0.2, 0, 2.0}, {0.3, 0.3, 0, 3.0}}, Window::unit_square(), 1);
    const auto d = demean_marks(p);
    CHECK(d.points[0].mark == doctest::Approx(-1.0));
    CHECK(d.points[1].mark == doctest::Approx(0.0));
    CHECK(d.points[2].mark == doctest::Approx(1.0));
    CHECK(d.marks_demeaned);
    CHECK(d.types[0].mark_mean == doctest::Approx(2.0));  // original mean kept
  }
  SUBCASE("singleton type centres to zero") {
    auto p = oracles::build_pattern({{0.5, 0.5, 0, 7.0}}, Window::unit_square(), 1);
    CHECK(demean_marks(p).points[0].mark == 0.0);
  }
  SUBCASE("two types centred independently") {
    auto p = oracles::build_pattern(
        {{0.1, 0.1, 0, 10.0}, {0.2, 0.2, 0, 20.0}, {0.3, 0.3, 1, 5.0}}, Window::unit_square(), 2);
    const auto d = demean_marks(p);
    CHECK(d.points[0].mark == doctest::Approx(-5.0));
    CHECK(d.points[1].mark == doctest::Approx(5.0));
    CHECK(d.points[2].mark == doctest::Approx(0.0));
  }
  SUBCASE("idempotent and coordinates untouched") {
    std::mt19937_64 rng(11);
    const auto p = oracles::random_pattern(rng, 3, 60);
    const auto d1 = demean_marks(p);
    const auto d2 = demean_marks(d1);
    for (std::size_t k = 0; k < p.points.size(); ++k) {
      CHECK(d1.points[k].x == p.points[k].x);
      CHECK(d1.points[k].y == p.points[k].y);
      CHECK(std::abs(d2.points[k].mark - d1.points[k].mark) <=
            1e-12 * (1.0 + std::abs(d1.points[k].mark)));
    }
    validate_pattern(d1);
  }
}

TEST_CASE("filter_min_count") {
  std::vector<MarkedPoint> pts;
  for (int k = 0; k < 2; ++k) pts.push_back({0.1 * (k + 1), 0.1, 0, 1.0});
  for (int k = 0; k < 9; ++k) pts.push_back({0.05 * (k + 1), 0.3, 1, 2.0});
  for (int k = 0; k < 30; ++k) pts.push_back({0.03 * (k + 1), 0.7, 2, 3.0});
  const auto p = oracles::build_pattern(pts, Window::unit_square(), 3);

  SUBCASE("drops small types and reindexes") {
    const FilterResult r = filter_min_count(p, 10);
    CHECK(r.pattern.dim() == 1);
    CHECK(r.dropped == std::vector<std::string>{"t0", "t1"});
    CHECK(r.pattern.types[0].count == 30);
    for (const auto& pt : r.pattern.points) CHECK(pt.type_id == 0);
    validate_pattern(r.pattern);
  }
  SUBCASE("min_n = 1 is the identity") {
    const FilterResult r = filter_min_count(p, 1);
    CHECK(r.pattern.dim() == 3);
    CHECK(r.dropped.empty());
    CHECK(r.pattern.points.size() == p.points.size());
  }
  SUBCASE("nothing survives") {
    auto small = oracles::build_pattern({{0.1, 0.1, 0, 1.0}, {0.2, 0.2, 1, 1.0}},
                                        Window::unit_square(), 2);
    CHECK_THROWS_AS(filter_min_count(small, 3), std::runtime_error);
  }
}

TEST_CASE("load -> rescale -> demean preserves counts") {
  std::istringstream in(
      "x,y,type,mark\n1,2,a,4\n3,4,b,5\n5,6,a,6\n7,8,c,7\n9,9.5,b,8\n2,3,a,9\n");
  const auto loaded = load_pattern(in);
  const auto prepared = demean_marks(rescale_to_unit_square(loaded));
  CHECK(prepared.points.size() == loaded.points.size());
  REQUIRE(prepared.dim() == loaded.dim());
  for (std::size_t t = 0; t < loaded.dim(); ++t)
    CHECK(prepared.types[t].count == loaded.types[t].count);
  validate_pattern(prepared);
}

TEST_CASE("csv round trip") {
  std::mt19937_64 rng(5);
  const auto p = oracles::random_pattern(rng, 2, 20);
  std::ostringstream out;
  write_pattern_csv(p, out);
  std::istringstream in(out.str());
  const auto q = load_pattern(in);
  REQUIRE(q.points.size() == p.points.size());
  for (std::size_t k = 0; k < p.points.size(); ++k) {
    CHECK(q.points[k].x == p.points[k].x);
    CHECK(q.points[k].y == p.points[k].y);
    CHECK(q.points[k].mark == p.points[k].mark);
  }
}

TEST_SUITE_END();
