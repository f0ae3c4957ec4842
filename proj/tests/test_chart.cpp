#include <cmath>

#include "doctest.h"
#include "folia/connection.hpp"
#include "folia/errors.hpp"
#include "support.hpp"

using namespace folia;
using namespace folia::test;

namespace {

Eigen::MatrixXd real_matrix(const JetTensor& t) {
  Eigen::MatrixXd m(t.extent(0), t.extent(1));
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b) m(a, b) = t(a, b).value();
  return m;
}

std::vector<ChartSpec> all_gallery_charts() {
  std::vector<ChartSpec> out;
  for (const auto& s : full_gallery())
    for (const auto& [name, spec] : s.charts) out.push_back(spec);
  return out;
}

}  // namespace

TEST_CASE("valid model charts load") {
  CHECK_NOTHROW(load_chart(disc_spec()));
  CHECK_NOTHROW(load_chart(heisenberg_spec()));
  CHECK_NOTHROW(load_chart(warped_spec()));
}

TEST_CASE("Heisenberg metric is the inverse Gram matrix of X, Y, T") {
  // X = dx - (y/2) dt, Y = dy + (x/2) dt, T = dt in coordinates (x, y, t).
  const FoliatedChart c = load_chart(heisenberg_spec());
  const double x = 0.4, y = -0.7;
  Eigen::Matrix3d F;
  F << 1, 0, -y / 2, 0, 1, x / 2, 0, 0, 1;  // rows are X, Y, T
  const Eigen::Matrix3d g = (F.transpose() * F).inverse();
  const std::vector<double> p = {x, y, 0.3};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(eval_real(c.metric(a, b), p) == doctest::Approx(g(a, b)).epsilon(1e-14));
}

TEST_CASE("chart validation errors") {
  CHECK_THROWS_AS(load_chart(make_spec({"x", "y"}, {{"1", "0"}, {"0", "-1"}})), MetricNotSPD);
  CHECK_THROWS_AS(load_chart(make_spec({"x", "y"}, {{"1", "x"}, {"0", "1"}})), SchemaError);
  CHECK_THROWS_AS(load_chart(make_spec({"x", "y"}, {{"1", "0"}, {"0", "log(x - 5)"}})), SchemaError);
  const ChartSpec dependent = make_spec({"x", "y", "z"}, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}},
                                        {{"1", "0", "0"}, {"2", "0", "0"}});
  CHECK_THROWS_AS((void)adapted_frame(load_chart(dependent), {0.1, 0.2, 0.3}, 1), DependentVerticalFrames);

  nlohmann::json j = to_json(disc_spec());
  CHECK_NOTHROW(chart_spec_from_json(j));
  nlohmann::json missing = j;
  missing.erase("metric");
  CHECK_THROWS_AS(chart_spec_from_json(missing), SchemaError);
  nlohmann::json odd = j;
  odd["J"] = {{"0"}};
  CHECK_THROWS_AS(chart_spec_from_json(odd), SchemaError);
  nlohmann::json box = j;
  box["domain"] = {{1, 0}, {0, 1}};
  CHECK_THROWS_AS(chart_spec_from_json(box), SchemaError);
}

TEST_CASE("chart JSON round trip") {
  const ChartSpec s = heisenberg_spec();
  const ChartSpec back = chart_spec_from_json(to_json(s));
  CHECK(back.metric == s.metric);
  CHECK(back.vertical == s.vertical);
  CHECK(back.complex_structure == s.complex_structure);
  CHECK(back.domain.bounds == s.domain.bounds);
}

TEST_CASE("adapted frames of model charts") {
  SUBCASE("Euclidean frame is the coordinate frame") {
    const AdaptedFrame f = adapted_frame(load_chart(euclidean_spec()), {0.3, -1.2}, 2);
    CHECK(real_matrix(f.frame).isApprox(Eigen::Matrix2d::Identity(), 0.0));
  }
  SUBCASE("disc at (0.5, 0) is scaled by (1 - r^2) / 2") {
    const AdaptedFrame f = adapted_frame(load_chart(disc_spec()), {0.5, 0.0}, 1);
    CHECK(f.frame(0, 0).value() == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(f.frame(1, 1).value() == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(f.frame(0, 1).value() == 0.0);
  }
  SUBCASE("Heisenberg frame at the origin is (T; X, Y)") {
    const AdaptedFrame f = adapted_frame(load_chart(heisenberg_spec()), {0.0, 0.0, 0.0}, 1);
    CHECK(f.vertical_rank == 1);
    Eigen::Matrix3d expected;
    expected << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    CHECK((real_matrix(f.frame) - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("frames are orthonormal, dual and adapted on every gallery chart") {
  for (const auto& spec : all_gallery_charts()) {
    const FoliatedChart c = load_chart(spec);
    const int m = c.dim(), p = c.vertical_rank();
    double ortho = 0, dual = 0, span = 0, idem = 0, sum = 0;
    for (const auto& x : sample_box(c.domain(), 100, 42)) {
      const AdaptedFrame f = adapted_frame(c, x, 0);
      const Eigen::MatrixXd E = real_matrix(f.frame), W = real_matrix(f.coframe), g = real_matrix(f.metric);
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
      ortho = std::max(ortho, (E * g * E.transpose() - I).cwiseAbs().maxCoeff());
      dual = std::max(dual, (W * E.transpose() - I).cwiseAbs().maxCoeff());
      // vertical fields have no horizontal coframe components
      for (int i = 0; i < p; ++i) {
        Eigen::VectorXd v(m);
        for (int a = 0; a < m; ++a) v(a) = eval_real(c.vertical(i, a), x);
        span = std::max(span, (W.bottomRows(m - p) * v).cwiseAbs().maxCoeff() / v.norm());
      }
      // pi_H = sum over horizontal A of e_A (x) omega^A, in coordinates
      const Eigen::MatrixXd PH = E.bottomRows(m - p).transpose() * W.bottomRows(m - p);
      const Eigen::MatrixXd PV = E.topRows(p).transpose() * W.topRows(p);
      idem = std::max(idem, (PH * PH - PH).cwiseAbs().maxCoeff());
      sum = std::max(sum, (PH + PV - I).cwiseAbs().maxCoeff());
    }
    CHECK(ortho < 1e-9);
    CHECK(dual < 1e-9);
    CHECK(span < 1e-9);
    CHECK(idem < 1e-12);
    CHECK(sum < 1e-12);
  }
}

TEST_CASE("integrability of the vertical distribution") {
  const auto heis = load_chart(heisenberg_spec());
  CHECK(check_integrability(heis, sample_box(heis.domain(), 20, 1)) == 0.0);
  const auto plane = load_chart(euclidean_spec());
  CHECK(check_integrability(plane, sample_box(plane.domain(), 5, 1)) == 0.0);
  // [d_x, d_y + x d_z] = d_z is not in the span
  const auto contact = load_chart(make_spec({"x", "y", "z"}, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}},
                                            {{"1", "0", "0"}, {"0", "1", "x"}}));
  CHECK(integrability_residual(contact, {0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(check_integrability(contact, sample_box(contact.domain(), 5, 1)) > 0.5);
}

TEST_CASE("Riemannian foliation check") {
  for (const auto& spec : {heisenberg_spec(), warped_spec()}) {
    const auto c = load_chart(spec);
    const RiemannianCheck r = check_riemannian(c, sample_box(c.domain(), 30, 3));
    CHECK(r.antisymmetry < 1e-9);
    CHECK(r.lie_derivative < 1e-9);
  }
  // g_H = (1 + y^2) dx^2 varies along the leaves d_y
  const auto bundle_like = load_chart(make_spec({"x", "y"}, {{"1 + y^2", "0"}, {"0", "1"}}, {{"0", "1"}}));
  CHECK(check_riemannian(bundle_like, {{0.2, 0.5}}).lie_derivative > 0.1);
}

TEST_CASE("sampling is deterministic and inside the box") {
  DomainBox box;
  box.bounds = {{-1, 2}, {0.5, 0.75}};
  const auto a = sample_box(box, 40, 9), b = sample_box(box, 40, 9), c = sample_box(box, 40, 10);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& x : a) CHECK(box.contains(x));
}
