#pragma once

#include <memory>
#include <string>
#include <vector>

#include "folia/gallery.hpp"
#include "folia/maps.hpp"

namespace folia::test {

using Rows = std::vector<std::vector<std::string>>;

inline ChartSpec make_spec(std::vector<std::string> coords, Rows metric, Rows vertical = {}, double lo = -1,
                           double hi = 1) {
  ChartSpec s;
  s.dim = static_cast<int>(coords.size());
  s.vertical_rank = static_cast<int>(vertical.size());
  s.coords = std::move(coords);
  s.metric = std::move(metric);
  s.vertical = std::move(vertical);
  s.domain.bounds.assign(s.dim, {lo, hi});
  return s;
}

/// Chart spec taken from a built-in scenario.
inline ChartSpec gallery_spec(const std::string& scenario, const std::string& chart) {
  return gallery(scenario).charts.at(chart);
}

inline std::shared_ptr<const FoliatedChart> shared_chart(const ChartSpec& spec) {
  return std::make_shared<const FoliatedChart>(load_chart(spec));
}

/// Disc of constant curvature -K: g = 4 / (K (1 - x^2 - y^2)^2) (dx^2 + dy^2), J the rotation.
inline ChartSpec disc_spec(double K = 1.0, double half_width = 0.6) {
  const std::string c = "4/(" + std::to_string(K) + "*(1 - x^2 - y^2)^2)";
  ChartSpec s = make_spec({"x", "y"}, {{c, "0"}, {"0", c}}, {}, -half_width, half_width);
  s.complex_structure = Rows{{"0", "-1"}, {"1", "0"}};
  return s;
}

inline std::shared_ptr<const FoliatedChart> disc(double K = 1.0, double half_width = 0.6) {
  return shared_chart(disc_spec(K, half_width));
}

inline ChartSpec heisenberg_spec() {
  ChartSpec s = make_spec({"x", "y", "t"},
                          {{"1 + y^2/4", "-x*y/4", "y/2"}, {"-x*y/4", "1 + x^2/4", "-x/2"}, {"y/2", "-x/2", "1"}},
                          {{"0", "0", "1"}});
  s.complex_structure = Rows{{"0", "-1"}, {"1", "0"}};
  return s;
}

inline ChartSpec warped_spec() { return make_spec({"x", "y"}, {{"1", "0"}, {"0", "exp(2*x)"}}, {{"0", "1"}}); }

inline ChartSpec euclidean_spec() {
  ChartSpec s = make_spec({"x", "y"}, {{"1", "0"}, {"0", "1"}}, {}, -2, 2);
  s.complex_structure = Rows{{"0", "-1"}, {"1", "0"}};
  return s;
}

}  // namespace folia::test
