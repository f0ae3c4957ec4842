#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace folia {

using Point = std::vector<double>;

/// Axis-aligned box, one [lo, hi] pair per coordinate.
struct DomainBox {
  std::vector<std::pair<double, double>> bounds;

  int dim() const { return static_cast<int>(bounds.size()); }
  bool contains(const Point& p, double slack = 0.0) const;
};

/// Counter-based uniform deviate in [0, 1): depends only on (seed, counter).
double uniform01(std::uint64_t seed, std::uint64_t counter);

/// Deterministic uniform samples in the box; sample k uses counters k*dim + axis.
std::vector<Point> sample_box(const DomainBox& box, std::size_t count, std::uint64_t seed);

}  // namespace folia
