#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "deadcore/analysis.hpp"
#include "deadcore/radial.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace deadcore;

TEST_CASE("refined support census removes the threshold bias in 1d") {
  Grid g = make_grid(1, 513, 4.0);
  ExplicitW w = explicit_w(1);
  Field u = sample_radial(g, Point{0, 0}, [&](double r) { return w.value(r); });
  SupportInfo info = extract_support(u);
  CHECK(std::fabs(info.measure_refined - 4.0) <= 0.005 * 4.0);
  CHECK(std::fabs(info.radius_refined - 2.0) <= g.h());
  // raw threshold count undershoots; refinement must improve on it
  CHECK(std::fabs(info.measure_refined - 4.0) <= std::fabs(info.scan.measure - 4.0) + 1e-12);
}

TEST_CASE("refined support census in 2d") {
  Grid g = make_grid(2, 257, 3.0);
  ExplicitW w = explicit_w(2);
  Field u = sample_radial(g, Point{0, 0}, [&](double r) { return w.value(r); });
  SupportInfo info = extract_support(u);
  const double area = 2.0 * std::numbers::pi;  // pi R^2 with R = sqrt 2
  CHECK(std::fabs(info.measure_refined - area) <= 0.02 * area);
  CHECK(std::fabs(info.radius_refined - std::sqrt(2.0)) <= g.h());
}

TEST_CASE("compatibility check accepts the explicit profile and rejects its dilation") {
  Grid g = make_grid(1, 513, 4.0);
  ExplicitW w = explicit_w(1);
  Field u = sample_radial(g, Point{0, 0}, [&](double r) { return w.value(r); });
  CompatibilityReport ok = compatibility_check(u, oracles::unit_interval(), 0.005);
  CHECK(ok.pass);
  CHECK(ok.ratio_error <= 0.005);

  // same field against a domain of the wrong size: |K| = 2 |Omega| fails
  CompatibilityReport bad =
      compatibility_check(u, make_ball(1, Point{0.0, 0.0}, 1.3), 0.005);
  CHECK(!bad.pass);
}

TEST_CASE("star-shaped support detector") {
  Grid g = make_grid(2, 129, 3.0);
  ExplicitW w = explicit_w(2);
  Field disc = sample_radial(g, Point{0, 0}, [&](double r) { return w.value(r); });
  StarshapedReport rep = starshaped_check(disc, Point{0.0, 0.0});
  CHECK(rep.pass);
  CHECK(rep.rays == 720);
  CHECK(rep.violations == 0);

  // a field supported on an annulus misses the center on every ray
  Field ring = sample_radial(g, Point{0, 0}, [&](double r) {
    double d = std::fabs(r - 1.5);
    return d < 0.5 ? (0.5 - d) : 0.0;
  });
  StarshapedReport hole = starshaped_check(ring, Point{0.0, 0.0});
  CHECK(!hole.pass);
  CHECK(hole.violations > 600);
  CHECK(hole.worst_gap > 0.5);
}

TEST_CASE("containment growth summarizes a sweep") {
  std::vector<SweepRow> rows(3);
  rows[0].p = 1.0;
  rows[1].p = 1.2;
  rows[2].p = 1.4;
  rows[0].inradius = 1.40;
  rows[1].inradius = 1.52;
  rows[2].inradius = 1.61;
  GrowthReport rep = containment_growth(rows, 0.01);
  CHECK(rep.monotone_within_h);
  CHECK(rep.total_growth == doctest::Approx(0.21));
  REQUIRE(rep.inradius.size() == 3);

  rows[2].inradius = 1.49;  // shrinks by 3 h: no longer monotone within h
  GrowthReport bad = containment_growth(rows, 0.01);
  CHECK(!bad.monotone_within_h);
  rows[2].inradius = 1.515;  // half-cell dip stays within tolerance
  CHECK(containment_growth(rows, 0.01).monotone_within_h);
}

TEST_CASE("census enumerates all seven states of a two-component domain") {
  Grid g = make_grid(1, 1025, 8.0);
  Shape two = make_union({make_ball(1, Point{-5.0, 0.0}, 1.0), make_ball(1, Point{5.0, 0.0}, 1.0)});
  CensusReport rep = multiplicity_census(g, two, make_nonlinearity(1.0));
  CHECK(rep.components == 2);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.validated_count == 3);
  CHECK(rep.disjoint_supports);
  CHECK(rep.all_distinct);
  for (const auto& e : rep.entries) {
    CHECK(e.validated);
    CHECK(e.additivity_defect <= 1e-8);
    CHECK(e.energy < 0.0);
  }
  // the combined state carries the sum of the single-component energies
  double e0 = rep.entries[0].energy, e1 = rep.entries[1].energy;
  double e01 = rep.entries[2].energy;
  CHECK(std::fabs(e01 - e0 - e1) <= 1e-6);
}

TEST_CASE("separation search brackets the touching gap") {
  Grid g = make_grid(1, 1537, 6.0);
  SeparationResult res = separation_threshold_search(g, 1.5, 2.5);
  CHECK(res.d_lo < res.d_hi);
  CHECK(res.d_lo <= 2.0 + 1e-12);
  CHECK(res.d_hi >= 2.0 - 1e-12);
  CHECK(res.d_hi - res.d_lo <= 4.0 * g.h() + 1e-12);
  CHECK(res.evaluations >= 3);
}

TEST_CASE("separation search rejects a bracket that does not straddle") {
  Grid g = make_grid(1, 769, 6.0);
  CHECK_THROWS(separation_threshold_search(g, 2.5, 3.0));  // both sides validate
}

TEST_CASE("multistart uniqueness persists toward the linear end") {
  Grid g = make_grid(1, 257, 3.0);
  NearTwoReport rep = uniqueness_near_two(g, oracles::unit_interval(), {1.8, 1.9}, 3);
  CHECK(rep.uniqueness_held);
  CHECK(rep.p_threshold == doctest::Approx(2.0));
  CHECK(rep.tested.size() == 2);
  CHECK_THROWS(uniqueness_near_two(g, oracles::unit_interval(), {1.96}, 3));
}
