#pragma once

#include <functional>
#include <string>
#include <vector>

#include "folia/maps.hpp"

namespace folia {

/// Agreement of jet derivatives with central differences.
/// error = |jet - fd| / max(1, |jet|); a comparison passes when error <= kFdTolerance.
struct FdReport {
  std::size_t compared = 0;
  double max_error = 0.0;
  std::string worst;  // label of the worst comparison
  bool passed() const;
  void merge(const FdReport& other);
};

inline constexpr double kFdTolerance = 1e-4;

/// Vector-valued central difference of d^alpha, Richardson-extrapolated from steps h and h/2.
std::vector<double> fd_partial(const std::function<std::vector<double>(const Point&)>& field, const Point& point,
                               std::span<const int> alpha, double h);

/// Step used for derivatives of total degree 1, 2, 3.
double fd_step(int degree);

/// Expression partials up to degree 3, adapted frame up to degree 2, connection tables to degree 1.
FdReport fd_check_chart(const FoliatedChart& chart, const std::vector<Point>& points);
/// Component partials, df up to degree 2, e_H up to degree 2.
FdReport fd_check_map(const FoliatedMap& map, const std::vector<Point>& points);

/// Up to `count` points at least `margin` inside the box (relative to its width).
std::vector<Point> interior_points(const DomainBox& box, const std::vector<Point>& points, std::size_t count = 3,
                                   double margin = 0.02);

}  // namespace folia
