#include <cmath>

#include "doctest.h"
#include "folia/fdcheck.hpp"
#include "support.hpp"

using namespace folia;
using namespace folia::test;

TEST_CASE("vector-valued central differences") {
  auto field = [](const Point& x) { return std::vector<double>{std::sin(x[0]) * x[1], std::exp(x[0] + 2 * x[1])}; };
  const Point p = {0.3, -0.2};
  const auto d = fd_partial(field, p, std::vector{1, 1}, fd_step(2));
  CHECK(d[0] == doctest::Approx(std::cos(0.3)).epsilon(1e-7));
  CHECK(d[1] == doctest::Approx(2 * std::exp(-0.1)).epsilon(1e-7));
  const auto d3 = fd_partial(field, p, std::vector{3, 0}, fd_step(3));
  CHECK(d3[0] == doctest::Approx(-std::cos(0.3) * -0.2).epsilon(1e-6));
}

TEST_CASE("jets agree with finite differences on model charts and maps") {
  for (const auto& spec : {heisenberg_spec(), warped_spec(), disc_spec()}) {
    const auto c = load_chart(spec);
    const FdReport r = fd_check_chart(c, sample_box(c.domain(), 5, 42));
    INFO(r.worst);
    CHECK(r.compared > 0);
    CHECK(r.passed());
  }
  const FoliatedMap sq = load_map(disc(1.0, 0.5), disc(1.0, 0.6), {"x^2 - y^2", "2*x*y"});
  const FdReport m = fd_check_map(sq, sample_box(sq.source().domain(), 5, 42));
  INFO(m.worst);
  CHECK(m.passed());
}

TEST_CASE("a wrong derivative is caught") {
  FdReport r;
  r.max_error = 0.0;
  FdReport bad;
  bad.compared = 1;
  bad.max_error = 0.5;
  bad.worst = "synthetic";
  r.merge(bad);
  CHECK_FALSE(r.passed());
  CHECK(r.worst == "synthetic");
}

TEST_CASE("interior points keep a margin") {
  DomainBox box;
  box.bounds = {{0.0, 1.0}};
  const auto pts = interior_points(box, {{0.0}, {0.01}, {0.5}, {0.99}, {0.7}}, 3, 0.02);
  CHECK(pts == std::vector<Point>{{0.5}, {0.7}});
}
