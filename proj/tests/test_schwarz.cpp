#include <cmath>

#include "doctest.h"
#include "folia/errors.hpp"
#include "folia/schwarz.hpp"
#include "support.hpp"

using namespace folia;
using namespace folia::test;

TEST_CASE("curvature bounds of discs") {
  for (auto [K1, K2] : {std::pair{2.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {4.0, 1.0}}) {
    const BoundEstimate s = estimate_bounds(*disc(K1), *disc(K2), 30, 42, CurvatureMode::Sectional);
    CHECK(s.K1 == doctest::Approx(K1).epsilon(1e-9));
    CHECK(s.K2 == doctest::Approx(K2).epsilon(1e-9));
    CHECK(s.assumption_ok);
    const BoundEstimate b = estimate_bounds(*disc(K1), *disc(K2), 30, 42, CurvatureMode::Bisectional);
    CHECK(b.K2 == doctest::Approx(K2).epsilon(1e-9));
  }
}

TEST_CASE("flat target violates the assumption") {
  const BoundEstimate b = estimate_bounds(*disc(), *shared_chart(euclidean_spec()), 10, 1, CurvatureMode::Sectional);
  CHECK(b.K2 == 0.0);
  CHECK_THROWS_AS(require_assumptions(b), AssumptionViolated);
}

TEST_CASE("Schwarz sharpness for identities between discs") {
  for (auto [K1, K2] : {std::pair{2.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {4.0, 1.0}}) {
    const FoliatedMap id = load_map(disc(K1), disc(K2), {"x", "y"});
    const auto points = sample_box(id.source().domain(), 50, 42);
    const BoundEstimate s = estimate_bounds(id.source(), id.target(), 50, 42, CurvatureMode::Sectional);
    const SchwarzReport r = schwarz_check(id, points, SchwarzVariant::Riemannian, 1.0, s);
    CHECK(r.max_ratio == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.passed(1e-6));
    const BoundEstimate b = estimate_bounds(id.source(), id.target(), 50, 42, CurvatureMode::Bisectional);
    const SchwarzReport k = schwarz_check(id, points, SchwarzVariant::Kahler, std::nullopt, b);
    CHECK(k.max_ratio == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("z^2 satisfies the Kahler bound strictly") {
  const FoliatedMap sq = load_map(disc(1.0, 0.5), disc(1.0, 0.6), {"x^2 - y^2", "2*x*y"});
  const BoundEstimate b = estimate_bounds(sq.source(), sq.target(), 50, 42, CurvatureMode::Bisectional);
  const SchwarzReport r = schwarz_check(sq, sample_box(sq.source().domain(), 50, 42), SchwarzVariant::Kahler,
                                        std::nullopt, b);
  CHECK(r.max_ratio < 1.0);
  CHECK(r.passed(1e-6));
}

TEST_CASE("source rescaling leaves the ratio unchanged") {
  // source metric times c^2: K1 -> K1 / c^2 and lambda_1 -> lambda_1 / c^2
  ChartSpec scaled = disc_spec(1.0, 0.5);
  for (auto& row : scaled.metric)
    for (auto& e : row) e = "4*(" + e + ")";
  const std::vector<std::string> comps = {"x^2 - y^2", "2*x*y"};
  const FoliatedMap a = load_map(disc(1.0, 0.5), disc(1.0, 0.6), comps);
  const FoliatedMap b = load_map(shared_chart(scaled), disc(1.0, 0.6), comps);
  const auto points = sample_box(a.source().domain(), 30, 42);
  const BoundEstimate ea = estimate_bounds(a.source(), a.target(), 30, 42, CurvatureMode::Sectional);
  const BoundEstimate eb = estimate_bounds(b.source(), b.target(), 30, 42, CurvatureMode::Sectional);
  CHECK(eb.K1 == doctest::Approx(ea.K1 / 4).epsilon(1e-10));
  const SchwarzReport ra = schwarz_check(a, points, SchwarzVariant::Riemannian, 1.0, ea);
  const SchwarzReport rb = schwarz_check(b, points, SchwarzVariant::Riemannian, 1.0, eb);
  CHECK(std::fabs(ra.max_ratio - rb.max_ratio) < 1e-8);
}

TEST_CASE("K1 = 0 on the Heisenberg group") {
  const auto heis = shared_chart(heisenberg_spec());
  const FoliatedMap geodesic = load_map(heis, disc(), {"tanh(x/2)", "0"});
  const auto points = sample_box(heis->domain(), 20, 42);
  const BoundEstimate b = estimate_bounds(*heis, *disc(), 20, 42, CurvatureMode::Sectional);
  CHECK(b.K1 == 0.0);
  CHECK_THROWS_AS(schwarz_check(geodesic, points, SchwarzVariant::Riemannian, std::nullopt, b), UnboundedDilatation);
  const FoliatedMap constant = load_map(heis, disc(), {"0.1", "0.2"});
  const SchwarzReport r = schwarz_check(constant, points, SchwarzVariant::Riemannian, std::nullopt, b);
  CHECK(r.horizontally_constant);
  CHECK(r.passed(1e-6));
  // a nonconstant map with finite dilatation still fails when K1 = 0
  const FoliatedMap spread = load_map(heis, disc(), {"x/4", "y/4"});
  const SchwarzReport s = schwarz_check(spread, points, SchwarzVariant::Riemannian, std::nullopt, b);
  CHECK_FALSE(s.horizontally_constant);
  CHECK_FALSE(s.passed(1e-6));
}

TEST_CASE("Laplacian comparison") {
  SUBCASE("hyperbolic plane") {
    const auto h = load_chart(gallery_spec("hyperbolic-distance", "hyperbolic"));
    const ComparisonReport r = comparison_check(h, sample_box(h.domain(), 50, 42), 1.0);
    CHECK(r.K1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.k1 == 0.0);
    CHECK(r.k2 == 0.0);
    CHECK(r.passed());
    REQUIRE(r.C_min);
    CHECK(*r.C_min <= 1.0);
    for (const auto& s : r.samples) {
      CHECK(s.gradient_residual < 1e-7);
      CHECK(s.laplacian == doctest::Approx(1 / std::tanh(s.r)).epsilon(1e-10));
      CHECK(s.bound == doctest::Approx(2 * (1 / s.r + 1)).epsilon(1e-8));
    }
  }
  SUBCASE("Euclidean plane with any C") {
    ChartSpec spec = euclidean_spec();
    spec.distance = "sqrt(x^2 + y^2)";
    const auto e = load_chart(spec);
    for (double C : {0.0, 1.0, 10.0}) {
      const ComparisonReport r = comparison_check(e, sample_box(e.domain(), 50, 42), C);
      CHECK(r.passed());
      for (const auto& s : r.samples) CHECK(s.laplacian == doctest::Approx(1 / s.r).epsilon(1e-12));
    }
  }
  SUBCASE("errors") {
    const auto e = load_chart(euclidean_spec());
    CHECK_THROWS_AS(comparison_check(e, {{1.0, 0.0}}, 1.0), MissingDistance);
    ChartSpec squared = euclidean_spec();
    squared.distance = "x^2 + y^2";
    CHECK_THROWS_AS(comparison_check(load_chart(squared), {{1.0, 0.5}}, 1.0), EikonalViolation);
  }
}
