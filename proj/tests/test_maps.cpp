#include <cmath>

#include "doctest.h"
#include "folia/errors.hpp"
#include "support.hpp"

using namespace folia;
using namespace folia::test;

namespace {

std::shared_ptr<const FoliatedChart> heisenberg() { return shared_chart(heisenberg_spec()); }

FoliatedMap square_map() { return load_map(disc(1.0, 0.5), disc(1.0, 0.6), {"x^2 - y^2", "2*x*y"}); }

}  // namespace

TEST_CASE("map loading") {
  CHECK_THROWS_AS(load_map(disc(), disc(), {"x"}), SchemaError);
  CHECK_THROWS_AS(load_map(disc(), disc(), {"x", "w"}), UnknownIdentifier);
  CHECK_THROWS_AS(load_map(disc(1.0, 0.6), disc(1.0, 0.6), {"2*x", "y"}), ImageOutOfDomain);
  const FoliatedMap m = square_map();
  const Point img = m.image({0.3, 0.2});
  CHECK(img[0] == doctest::Approx(0.05));
  CHECK(img[1] == doctest::Approx(0.12));
}

TEST_CASE("identity map differential") {
  const auto c = heisenberg();
  const FoliatedMap id = load_map(c, c, {"x", "y", "t"});
  for (const auto& x : sample_box(c->domain(), 10, 42)) {
    const MapJet mj = map_jet(id, x, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(mj.df(a, b).value() == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    for (const auto& j : mj.ddf) CHECK(std::fabs(j.value()) < 1e-12);
    CHECK(commutation_residual(mj) < 1e-10);
  }
  CHECK(check_foliated(id, sample_box(c->domain(), 20, 1)) < 1e-10);
  CHECK(check_holomorphic(id, sample_box(c->domain(), 20, 1)) < 1e-12);
}

TEST_CASE("identity between discs of different curvature") {
  const FoliatedMap id = load_map(disc(2.0), disc(1.0), {"x", "y"});
  for (const auto& x : sample_box(id.source().domain(), 10, 42)) {
    const MapJet mj = map_jet(id, x, 3);
    CHECK(mj.df(0, 0).value() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::fabs(mj.df(0, 1).value()) < 1e-12);
    CHECK(energy_density(mj).value() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::fabs(energy_laplacian(mj)) < 1e-10);
    const DilatationSpectrum s = dilatation(mj);
    CHECK(s.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(s.beta_min);
    CHECK(*s.beta_min == doctest::Approx(1.0).epsilon(1e-12));
    for (auto v : {BochnerVariant::Riemannian, BochnerVariant::Kahler}) {
      const BochnerResult b = bochner_residual(mj, v);
      CHECK(std::fabs(b.lhs) < 1e-10);
      CHECK(std::fabs(b.rhs) < 1e-10);
    }
  }
}

TEST_CASE("foliated maps") {
  const auto d = disc();
  const FoliatedMap geodesic = load_map(heisenberg(), d, {"tanh(x/2)", "0"});
  CHECK(check_foliated(geodesic, sample_box(geodesic.source().domain(), 20, 3)) == 0.0);
  // (x, y, t) -> (t, 0): df(T) = 2 d_x-coframe at the origin of the disc, where omega = 2 dx
  const FoliatedMap vertical_to_horizontal = load_map(heisenberg(), d, {"t/2", "0"});
  CHECK(check_foliated(vertical_to_horizontal, {{0.0, 0.0, 0.0}}) == doctest::Approx(1.0).epsilon(1e-12));
  const FoliatedMap t_map = load_map(shared_chart([] {
                                       ChartSpec s = heisenberg_spec();
                                       s.domain.bounds[2] = {-0.5, 0.5};
                                       return s;
                                     }()),
                                     d, {"t", "0"});
  CHECK(check_foliated(t_map, {{0.0, 0.0, 0.0}}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("holomorphic z^2") {
  const FoliatedMap sq = square_map();
  const auto points = sample_box(sq.source().domain(), 20, 42);
  CHECK(check_holomorphic(sq, points) < 1e-9);
  const SymmetryResidual sym = second_fundamental_symmetry(sq, points);
  CHECK(sym.max() < 1e-7);
  for (const auto& x : points) {
    CHECK(tension(sq, x, TensionConvention::Bott).norm() < 1e-6);
    const MapJet mj = map_jet(sq, x, 3);
    CHECK(commutation_residual(mj) < 1e-5);
    const BochnerResult r = bochner_residual(mj, BochnerVariant::Riemannian);
    const BochnerResult k = bochner_residual(mj, BochnerVariant::Kahler);
    CHECK(r.residual() < 1e-5);
    CHECK(k.residual() < 1e-5);
    CHECK(r.harmonic);
    CHECK(r.laplacian == k.laplacian);
    CHECK(k.lhs == 0.5 * r.lhs);
    CHECK(std::fabs(r.index_form_gap) < 1e-10);
    double trace = 0;
    for (double l : dilatation(mj).eigenvalues) trace += l;
    CHECK(std::fabs(trace - 2 * energy_density(mj).value()) < 1e-9);
  }
}

TEST_CASE("energy density of z^2 in closed form") {
  // e_H = |f'(z)|^2 (1 - |z|^2)^2 / (1 - |z|^4)^2 with f' = 2z, for the unit-curvature discs.
  const FoliatedMap sq = square_map();
  for (const auto& x : sample_box(sq.source().domain(), 10, 7)) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double expected = 4 * r2 * std::pow(1 - r2, 2) / std::pow(1 - r2 * r2, 2);
    CHECK(energy_density(map_jet(sq, x, 1)).value() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("antiholomorphic conjugation") {
  const FoliatedMap bar = load_map(disc(), disc(), {"x", "-y"});
  // df anticommutes with J; at the origin df = identity scale 1, so the residual is 2
  CHECK(check_holomorphic(bar, {{0.0, 0.0}}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tension conventions differ by df(kappa)") {
  const auto w = shared_chart(warped_spec());
  const FoliatedMap id = load_map(w, w, {"x", "y"});
  for (const auto& x : sample_box(w->domain(), 5, 1)) {
    CHECK(tension(id, x, TensionConvention::Bott).norm() < 1e-12);
    CHECK(tension(id, x, TensionConvention::BarlettaDragomir).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto c = heisenberg();
  const FoliatedMap hid = load_map(c, c, {"x", "y", "t"});
  CHECK(tension(hid, {0.1, 0.2, 0.3}, TensionConvention::BarlettaDragomir).norm() < 1e-12);
}

TEST_CASE("Heisenberg geodesic map") {
  const FoliatedMap g = load_map(heisenberg(), disc(), {"tanh(x/2)", "0"});
  for (const auto& x : sample_box(g.source().domain(), 20, 42)) {
    const MapJet mj = map_jet(g, x, 3);
    const DilatationSpectrum s = dilatation(mj);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(s.eigenvalues[1]) < 1e-9);
    CHECK(s.unbounded());
    CHECK(energy_density(mj).value() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(commutation_residual(mj) < 1e-10);
  }
}

TEST_CASE("constant maps") {
  const FoliatedMap k = load_map(heisenberg(), disc(), {"0.1", "0.2"});
  const MapJet mj = map_jet(k, {0.3, 0.3, 0.3}, 3);
  CHECK(energy_density(mj).value() == 0.0);
  const DilatationSpectrum s = dilatation(mj);
  REQUIRE(s.beta_min);
  CHECK(*s.beta_min == 0.0);
  const BochnerResult b = bochner_residual(mj, BochnerVariant::Riemannian);
  CHECK(b.lhs == 0.0);
  CHECK(b.rhs == 0.0);
}

TEST_CASE("Kahler Bochner needs a Kahler pair") {
  const auto plain = shared_chart([] {
    ChartSpec s = disc_spec();
    s.complex_structure.reset();
    return s;
  }());
  const FoliatedMap no_j = load_map(plain, disc(), {"x", "y"});
  CHECK_THROWS_AS(bochner_residual(no_j, {0.1, 0.1}, BochnerVariant::Kahler), MissingJ);
  const auto skew = shared_chart([] {
    ChartSpec s = disc_spec();
    s.complex_structure = Rows{{"0", "-2"}, {"0.5", "0"}};
    return s;
  }());
  const FoliatedMap bad_j = load_map(skew, disc(), {"x", "y"});
  CHECK_THROWS_AS(bochner_residual(bad_j, {0.1, 0.1}, BochnerVariant::Kahler), NotKahler);
}

TEST_CASE("chain rule") {
  const auto src = disc(1.0, 0.5), mid = disc(1.0, 0.6), tgt = disc(1.0, 0.6);
  const FoliatedMap f = load_map(src, mid, {"x^2 - y^2", "2*x*y"});
  const FoliatedMap g = load_map(mid, tgt, {"x/2 + (x^2 - y^2)/8", "y/2 + x*y/4"});
  const FoliatedMap h = load_map(src, tgt,
                                 {"(x^2 - y^2)/2 + ((x^2 - y^2)^2 - (2*x*y)^2)/8", "x*y + (x^2 - y^2)*(2*x*y)/4"});
  for (const auto& x : sample_box(src->domain(), 20, 42)) CHECK(chain_rule_residual(f, g, h, x) < 1e-8);
  // a wrong composite is detected
  const FoliatedMap wrong = load_map(src, tgt, {"(x^2 - y^2)/2", "x*y"});
  CHECK(chain_rule_residual(f, g, wrong, {0.3, 0.2}) > 1e-3);
}
