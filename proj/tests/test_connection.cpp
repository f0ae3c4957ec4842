#include <cmath>

#include "doctest.h"
#include "folia/connection.hpp"
#include "support.hpp"

using namespace folia;
using namespace folia::test;

TEST_CASE("Christoffel symbols of model metrics") {
  SUBCASE("Euclidean") {
    const ConnectionTable t = levi_civita(load_chart(euclidean_spec()), {0.4, 0.1}, 1);
    for (const auto& j : t.christoffel) CHECK(j.value() == 0.0);
  }
  SUBCASE("warped product") {
    const auto c = load_chart(warped_spec());
    for (const auto& x : sample_box(c.domain(), 5, 2)) {
      const ConnectionTable t = levi_civita(c, x, 2);
      CHECK(t.christoffel(0, 1, 1).value() == doctest::Approx(-std::exp(2 * x[0])).epsilon(1e-14));
      CHECK(t.christoffel(1, 0, 1).value() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(t.christoffel(1, 1, 0).value() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(t.christoffel(0, 0, 0).value() == 0.0);
      // first derivative along x of Gamma^x_yy
      CHECK(t.christoffel(0, 1, 1).partial(std::vector{1, 0}) ==
            doctest::Approx(-2 * std::exp(2 * x[0])).epsilon(1e-13));
    }
  }
  SUBCASE("disc, conformal formula") {
    const auto c = load_chart(disc_spec());
    for (const auto& x : sample_box(c.domain(), 10, 4)) {
      const ConnectionTable t = levi_civita(c, x, 1);
      const double s = 1 - x[0] * x[0] - x[1] * x[1];
      const double dlog[2] = {4 * x[0] / s, 4 * x[1] / s};
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const double expected = 0.5 * ((k == i) * dlog[j] + (k == j) * dlog[i] - (i == j) * dlog[k]);
            CHECK(t.christoffel(k, i, j).value() == doctest::Approx(expected).epsilon(1e-13));
            CHECK(t.christoffel(k, i, j).value() == t.christoffel(k, j, i).value());
          }
    }
  }
}

TEST_CASE("connection identities on every gallery chart") {
  for (const auto& s : full_gallery())
    for (const auto& [name, spec] : s.charts) {
      const auto c = load_chart(spec);
      double worst = 0.0;
      for (const auto& x : sample_box(c.domain(), 50, 42)) worst = std::max(worst, connection_check(Geometry(c, x, 2)).max());
      INFO(s.name << " / " << name);
      CHECK(worst < 1e-8);
    }
}

TEST_CASE("Bott torsion") {
  SUBCASE("Heisenberg: two routes agree, magnitude one") {
    const auto c = load_chart(heisenberg_spec());
    for (const auto& x : sample_box(c.domain(), 50, 42)) {
      const TorsionCheck t = torsion_check(Geometry(c, x, 2));
      CHECK(t.route_residual < 1e-8);
      CHECK(t.antisymmetry_residual < 1e-12);
      CHECK(t.max_magnitude == doctest::Approx(1.0).epsilon(1e-8));
    }
    // T(X, Y) = -pi_V [X, Y] = -T for X = e_1, Y = e_2 (vertical index 0)
    const JetTensor T = torsion(c, {0.2, 0.3, 0.1}, 1);
    CHECK(T(0, 1, 2).value() == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("vanishes for p = 0 and for integrable H") {
    for (const auto& spec : {disc_spec(), warped_spec()}) {
      const JetTensor T = torsion(load_chart(spec), {0.2, 0.3}, 1);
      for (const auto& j : T) CHECK(std::fabs(j.value()) < 1e-15);
    }
  }
}

TEST_CASE("O'Neill tensors of model foliations") {
  SUBCASE("Heisenberg: |A| = 1/sqrt(2), h = 0") {
    const ONeillTensors o = oneill_tensors(load_chart(heisenberg_spec()), {0.3, -0.6, 0.2}, 2);
    CHECK(tensor_norm(o.A) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(tensor_norm(o.h) < 1e-12);
    CHECK(tensor_norm(o.kappa) < 1e-12);
  }
  SUBCASE("warped: leaves have mean curvature -e_x, |h| = 1, A = 0") {
    const ONeillTensors o = oneill_tensors(load_chart(warped_spec()), {0.4, 0.1}, 2);
    CHECK(tensor_norm(o.A) < 1e-12);
    CHECK(tensor_norm(o.h) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(o.kappa(1).value() == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("C1 norms are sampled maxima") {
  const auto heis = load_chart(heisenberg_spec());
  const C1Norms n = c1_norms(heis, sample_box(heis.domain(), 10, 1));
  CHECK(n.A == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(n.h < 1e-12);
  CHECK(n.A_c1() >= n.A);
  const auto flat = load_chart(euclidean_spec());
  const C1Norms z = c1_norms(flat, sample_box(flat.domain(), 5, 1));
  CHECK(z.A_c1() == 0.0);
  CHECK(z.h_c1() == 0.0);
}

TEST_CASE("sub-Laplacian of a radial function on the disc") {
  // On the unit disc, Delta log(1 - r^2) = ((1 - r^2)^2 / 4) * (-4 / (1 - r^2)^2) = -1.
  const auto c = load_chart(disc_spec());
  const Expr f = bind_variables(parse("log(1 - x^2 - y^2)"), c.coords());
  for (const auto& x : sample_box(c.domain(), 10, 8)) {
    const Geometry g(c, x, 3);
    CHECK(g.sub_laplacian(eval_jet(f, c.coordinate_jets(x, 3))).value() == doctest::Approx(-1.0).epsilon(1e-12));
  }
}
