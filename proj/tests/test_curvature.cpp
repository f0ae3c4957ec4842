#include <cmath>

#include "doctest.h"
#include "folia/curvature.hpp"
#include "folia/errors.hpp"
#include "support.hpp"

using namespace folia;
using namespace folia::test;

namespace {

std::vector<double> unit(int n, int k) {
  std::vector<double> v(n, 0.0);
  v[k] = 1.0;
  return v;
}

// Gauss curvature of lambda (dx^2 + dy^2) as -Delta_0(log lambda) / (2 lambda), by finite differences.
double conformal_gauss_curvature(const std::string& lambda, const std::vector<double>& x) {
  const std::vector<std::string> xy = {"x", "y"};
  const Expr l = bind_variables(parse(lambda), xy);
  const Expr log_l = bind_variables(parse("log(" + lambda + ")"), xy);
  const double lap = fd_derivative(log_l, x, std::vector{2, 0}, 1e-4) + fd_derivative(log_l, x, std::vector{0, 2}, 1e-4);
  return -lap / (2 * eval_real(l, x));
}

std::vector<ChartSpec> all_gallery_charts() {
  std::vector<ChartSpec> out;
  for (const auto& s : full_gallery())
    for (const auto& [name, spec] : s.charts) out.push_back(spec);
  return out;
}

}  // namespace

TEST_CASE("flat plane has no curvature") {
  const CurvatureTable c = riemann(load_chart(euclidean_spec()), {0.5, 1.0}, 2);
  for (const auto& j : c.riemann) CHECK(j.value() == 0.0);
  CHECK(sectional(c.riemann, unit(2, 0), unit(2, 1)) == 0.0);
}

TEST_CASE("disc curvature matches the conformal formula") {
  for (double K : {1.0, 2.0, 0.5}) {
    const ChartSpec spec = disc_spec(K);
    const auto chart = load_chart(spec);
    for (const auto& x : sample_box(chart.domain(), 20, 42)) {
      const CurvatureTable c = curvature(Geometry(chart, x, 2));
      const double k = sectional(c.riemann, unit(2, 0), unit(2, 1));
      CHECK(k == doctest::Approx(conformal_gauss_curvature(spec.metric[0][0], x)).epsilon(1e-5));
      CHECK(std::fabs(k + K) < 1e-8);
      CHECK(std::fabs(transverse_sectional(c, unit(2, 0), unit(2, 1)) + K) < 1e-8);
      // independent pair
      CHECK(std::fabs(sectional(c.riemann, std::vector{1.0, 2.0}, std::vector{-0.5, 0.3}) + K) < 1e-8);
      CHECK(c.ricci(0, 0).value() == doctest::Approx(-K).epsilon(1e-10));
      CHECK(std::fabs(c.ricci(0, 1).value()) < 1e-10);
    }
  }
}

TEST_CASE("hyperbolic polar chart has curvature -1") {
  const auto chart = load_chart(gallery_spec("hyperbolic-distance", "hyperbolic"));
  for (const auto& x : sample_box(chart.domain(), 20, 1)) {
    const CurvatureTable c = curvature(Geometry(chart, x, 2));
    CHECK(std::fabs(sectional(c.riemann, unit(2, 0), unit(2, 1)) + 1) < 1e-8);
  }
}

TEST_CASE("scaling the metric by c^2 divides curvature by c^2") {
  const double c2 = 9.0;
  ChartSpec scaled = disc_spec(1.0);
  for (auto& row : scaled.metric)
    for (auto& e : row) e = "9*(" + e + ")";
  const auto a = load_chart(disc_spec(1.0)), b = load_chart(scaled);
  for (const auto& x : sample_box(a.domain(), 10, 3)) {
    const double ka = sectional(curvature(Geometry(a, x, 2)).riemann, unit(2, 0), unit(2, 1));
    const double kb = sectional(curvature(Geometry(b, x, 2)).riemann, unit(2, 0), unit(2, 1));
    CHECK(std::fabs(kb - ka / c2) < 1e-8);
  }
}

TEST_CASE("Heisenberg curvatures") {
  const auto chart = load_chart(heisenberg_spec());
  for (const auto& x : sample_box(chart.domain(), 20, 42)) {
    const Geometry g(chart, x, 2);
    const CurvatureTable c = curvature(g);
    CHECK(sectional(c.riemann, unit(3, 1), unit(3, 2)) == doctest::Approx(-0.75).epsilon(1e-10));
    // vertical-horizontal planes: K(X, T) = 1/4
    CHECK(sectional(c.riemann, unit(3, 0), unit(3, 1)) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(std::fabs(transverse_sectional(c, unit(2, 0), unit(2, 1))) < 1e-12);
    const ONeillCheck o = oneill_check(g, c, oneill_tensors(g));
    CHECK(o.identity < 1e-8);
    CHECK(o.corollary < 1e-8);
  }
}

TEST_CASE("degenerate planes are rejected") {
  const CurvatureTable c = riemann(load_chart(disc_spec()), {0.1, 0.1}, 2);
  CHECK_THROWS_AS(sectional(c.riemann, std::vector{1.0, 2.0}, std::vector{2.0, 4.0}), DegeneratePlane);
  CHECK_THROWS_AS(transverse_sectional(c, std::vector{0.0, 0.0}, std::vector{1.0, 0.0}), DegeneratePlane);
}

TEST_CASE("curvature symmetries and block vanishing on every gallery chart") {
  for (const auto& spec : all_gallery_charts()) {
    const auto chart = load_chart(spec);
    const int m = chart.dim(), p = chart.vertical_rank();
    std::vector<int> all(m), horizontal;
    for (int a = 0; a < m; ++a) all[a] = a;
    for (int a = p; a < m; ++a) horizontal.push_back(a);
    for (const auto& x : sample_box(chart.domain(), 50, 42)) {
      const CurvatureTable c = curvature(Geometry(chart, x, 2));
      CHECK(curvature_symmetries(c.riemann, all).max() < 1e-8);
      CHECK(curvature_symmetries(c.bott, horizontal).max() < 1e-8);
      CHECK(block_vanishing_residual(c, p) < 1e-8);
      for (std::size_t k = 0; k < c.riemann.size(); ++k)
        CHECK(std::fabs(c.riemann.flat(k).value() - c.riemann_frame.flat(k).value()) < 1e-8);
    }
  }
}

TEST_CASE("Nakagawa-Takagi relations and the Ricci identity") {
  for (const auto& spec : {warped_spec(), heisenberg_spec()}) {
    const auto chart = load_chart(spec);
    for (const auto& x : sample_box(chart.domain(), 20, 42)) {
      const Geometry g(chart, x, 4);
      const CurvatureTable c = curvature(g);
      const ONeillTensors o = oneill_tensors(g);
      const auto rs = nakagawa_takagi(g, c, o);
      CHECK(rs.size() == 6);
      for (const auto& r : rs) {
        INFO(r.name);
        CHECK(r.residual < 1e-6);
      }
      CHECK(ricci_identity_residual(c, o) < 1e-5);
    }
  }
}

TEST_CASE("a perturbed curvature breaks the O'Neill identity") {
  // Guard against vacuous passes: a wrong sign on the A-terms must be detected.
  const auto chart = load_chart(heisenberg_spec());
  const Geometry g(chart, {0.1, 0.2, 0.3}, 2);
  CurvatureTable c = curvature(g);
  c.bott(0 + 1, 2, 1, 2) += 0.5;
  CHECK(oneill_check(g, c, oneill_tensors(g)).identity > 0.1);
}
