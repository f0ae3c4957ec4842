#include <cmath>
#include <random>

#include "doctest.h"
#include "folia/errors.hpp"
#include "folia/expr.hpp"
#include "folia/fdcheck.hpp"

using namespace folia;

namespace {
const std::vector<double> at23 = {2.0, 3.0};
}

TEST_CASE("coordinate jet") {
  const Jet x = jet_variable(0, at23, 2);
  CHECK(x.value() == 2.0);
  CHECK(x.partial(std::vector{1, 0}) == 1.0);
  CHECK(x.partial(std::vector{0, 1}) == 0.0);
  CHECK(x.partial(std::vector{2, 0}) == 0.0);
  CHECK(x.partial(std::vector{1, 1}) == 0.0);
  const std::vector<double> origin = {0.0};
  CHECK_THROWS_AS(jet_variable(1, origin, 2), std::invalid_argument);
}

TEST_CASE("product of coordinate jets follows Leibniz") {
  const Jet xy = jet_variable(0, at23, 2) * jet_variable(1, at23, 2);
  CHECK(xy.value() == 6.0);
  CHECK(xy.partial(std::vector{1, 0}) == 3.0);
  CHECK(xy.partial(std::vector{0, 1}) == 2.0);
  CHECK(xy.partial(std::vector{1, 1}) == 1.0);
  CHECK(xy.partial(std::vector{2, 0}) == 0.0);
}

TEST_CASE("partial converts Taylor coefficients to derivatives") {
  // x^3 at x = 2: coefficients 8, 12, 6, 1; partials 8, 12, 12, 6.
  const std::vector<double> p = {2.0};
  const Jet x = jet_variable(0, p, 3);
  const Jet c = x * x * x;
  CHECK(c.coefficient(std::vector{2}) == doctest::Approx(6.0));
  CHECK(c.partial(std::vector{2}) == doctest::Approx(12.0));
  CHECK(c.partial(std::vector{3}) == doctest::Approx(6.0));
}

TEST_CASE("exp series and geometric series") {
  const std::vector<double> zero = {0.0};
  const Jet x = jet_variable(0, zero, 3);
  const Jet e = exp(x);
  const double expected[] = {1.0, 1.0, 0.5, 1.0 / 6.0};
  for (int k = 0; k <= 3; ++k) CHECK(e.coefficients()[k] == doctest::Approx(expected[k]).epsilon(1e-15));

  const Jet x2 = jet_variable(0, zero, 2);
  const Jet g = 1.0 / (1.0 - x2 * x2);
  CHECK(g.coefficients()[0] == 1.0);
  CHECK(g.coefficients()[1] == 0.0);
  CHECK(g.coefficients()[2] == doctest::Approx(1.0));
}

TEST_CASE("log of a negative base is a domain error") {
  const std::vector<double> p = {-1.0};
  CHECK_THROWS_AS(log(jet_variable(0, p, 2)), DomainError);
}

TEST_CASE("elementary functions against closed-form derivatives") {
  const std::vector<double> p = {0.7};
  const Jet x = jet_variable(0, p, 3);
  const double v = 0.7;
  const double sec2 = 1.0 / (std::cos(v) * std::cos(v));
  const double th = std::tanh(v);
  struct Case {
    Jet jet;
    double d[4];
  };
  const Case cases[] = {
      {sin(x), {std::sin(v), std::cos(v), -std::sin(v), -std::cos(v)}},
      {cos(x), {std::cos(v), -std::sin(v), -std::cos(v), std::sin(v)}},
      {tan(x), {std::tan(v), sec2, 2 * sec2 * std::tan(v), 2 * sec2 * sec2 + 4 * sec2 * std::tan(v) * std::tan(v)}},
      {sqrt(x), {std::sqrt(v), 0.5 / std::sqrt(v), -0.25 * std::pow(v, -1.5), 0.375 * std::pow(v, -2.5)}},
      {log(x), {std::log(v), 1 / v, -1 / (v * v), 2 / (v * v * v)}},
      {tanh(x), {th, 1 - th * th, -2 * th * (1 - th * th), -2 * (1 - th * th) * (1 - 3 * th * th)}},
      {pow(x, 2.5), {std::pow(v, 2.5), 2.5 * std::pow(v, 1.5), 3.75 * std::sqrt(v), 1.875 / std::sqrt(v)}},
  };
  for (const auto& c : cases)
    for (int k = 0; k <= 3; ++k) CHECK(c.jet.partial(std::vector{k}) == doctest::Approx(c.d[k]).epsilon(1e-13));

  const std::vector<double> q = {1.5};
  const Jet y = jet_variable(0, q, 2);
  const double s = std::sqrt(1.5 * 1.5 - 1);
  CHECK(arccosh(y).partial(std::vector{1}) == doctest::Approx(1 / s));
  CHECK(arccosh(y).partial(std::vector{2}) == doctest::Approx(-1.5 / (s * s * s)));
}

TEST_CASE("ring laws hold up to reassociation") {
  const std::vector<double> p = {0.3, -0.4};
  const Jet x = jet_variable(0, p, 3), y = jet_variable(1, p, 3);
  const Jet a = exp(x) * y, b = sin(x + y), c = x * x - 2.0 * y;
  const Jet lhs = a * (b + c), rhs = a * b + a * c;
  for (std::size_t k = 0; k < lhs.coefficients().size(); ++k) {
    CHECK(std::fabs(lhs.coefficients()[k] - rhs.coefficients()[k]) < 1e-12);
    CHECK(std::fabs((a * b).coefficients()[k] - (b * a).coefficients()[k]) < 1e-12);
  }
}

TEST_CASE("truncation commutes with evaluation") {
  const std::vector<double> p = {0.2, 0.1};
  const Expr e = bind_variables(parse("4/(1 - x^2 - y^2)^2 * exp(x*y) + sqrt(2 + sin(y))"),
                                std::vector<std::string>{"x", "y"});
  auto at = [&](int order) {
    std::vector<Jet> v = {jet_variable(0, p, order), jet_variable(1, p, order)};
    return eval_jet(e, v);
  };
  const Jet high = at(3).truncated(2), low = at(2);
  for (std::size_t k = 0; k < low.coefficients().size(); ++k) CHECK(high.coefficients()[k] == low.coefficients()[k]);
}

TEST_CASE("composition matches direct evaluation") {
  const std::vector<double> p = {0.3, 0.2};
  const Jet x = jet_variable(0, p, 3), y = jet_variable(1, p, 3);
  const Jet u = x * y + sin(x), v = exp(y) - x;
  const std::vector<double> base = {u.value(), v.value()};
  const Jet s = jet_variable(0, base, 3), t = jet_variable(1, base, 3);
  const Jet outer = s * s * t + cos(t);
  const std::vector<Jet> inner = {u, v};
  const Jet composed = compose(outer, inner);
  const Jet direct = u * u * v + cos(v);
  for (std::size_t k = 0; k < direct.coefficients().size(); ++k)
    CHECK(composed.coefficients()[k] == doctest::Approx(direct.coefficients()[k]).epsilon(1e-13));
}

TEST_CASE("finite-difference helper") {
  const std::vector<std::string> xy = {"x", "y"};
  const Expr prod = bind_variables(parse("x*y"), xy);
  CHECK(fd_derivative(prod, at23, std::vector{1, 0}, 1e-5) == doctest::Approx(3.0).epsilon(1e-8));
  const Expr s = bind_variables(parse("sin(x)"), std::vector<std::string>{"x"});
  CHECK(std::fabs(fd_derivative(s, std::vector<double>{0.0}, std::vector{2}, 1e-3)) < 1e-6);

  const Expr disc = bind_variables(parse("4/(1-x^2-y^2)^2"), xy);
  const std::vector<double> p = {0.3, 0.1};
  const std::vector<Jet> vars = {jet_variable(0, p, 1), jet_variable(1, p, 1)};
  CHECK(fd_derivative(disc, p, std::vector{1, 0}, 1e-5) ==
        doctest::Approx(eval_jet(disc, vars).partial(std::vector{1, 0})).epsilon(1e-5));
}

TEST_CASE("jet partials agree with finite differences on random compositions") {
  // Random trees over a small grammar; every coefficient up to degree 3 is compared.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const std::vector<std::string> xy = {"x", "y"};
  const char* leaves[] = {"x", "y", "(x*y)", "(1 + x^2)", "(2 - y)"};
  // Damped wrappers keep derivatives moderate enough for the difference oracle.
  const char* wraps[] = {"exp(0.3*(%))", "sin(%)", "cos(%)", "sqrt(3 + (%)^2)", "tanh(%)", "log(4 + (%)^2)",
                         "0.5*(%)^2", "1/(3 + (%)^2)"};
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    std::string text = leaves[rng() % 5];
    for (int depth = 0; depth < 3; ++depth) {
      std::string w = wraps[rng() % 8];
      w.replace(w.find('%'), 1, text);
      text = w + (rng() % 2 ? " * " : " + ") + leaves[rng() % 5];
    }
    const Expr e = bind_variables(parse(text), xy);
    const std::vector<double> p = {unit(rng), unit(rng)};
    const std::vector<Jet> vars = {jet_variable(0, p, 3), jet_variable(1, p, 3)};
    const Jet j = eval_jet(e, vars);
    const auto& table = j.table();
    for (std::size_t k = 1; k < table.size(); ++k) {
      const auto ex = table.exponents(k);
      const std::vector<int> alpha(ex.begin(), ex.end());
      const double value = j.partial(alpha);
      const auto field = [&](const Point& y) { return std::vector<double>{eval_real(e, y)}; };
      const double fd = fd_partial(field, p, alpha, fd_step(table.degree(k)))[0];
      worst = std::max(worst, std::fabs(value - fd) / std::max(1.0, std::fabs(value)));
    }
  }
  CHECK(worst < 1e-4);
}
