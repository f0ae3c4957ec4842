#include "folia/sampling.hpp"

namespace folia {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

bool DomainBox::contains(const Point& p, double slack) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (std::size_t a = 0; a < p.size(); ++a)
    if (p[a] < bounds[a].first - slack || p[a] > bounds[a].second + slack) return false;
  return true;
}

double uniform01(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = mix(mix(seed) ^ counter);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::vector<Point> sample_box(const DomainBox& box, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out(count, Point(box.dim()));
  for (std::size_t k = 0; k < count; ++k)
    for (int a = 0; a < box.dim(); ++a) {
      const auto [lo, hi] = box.bounds[a];
      out[k][a] = lo + (hi - lo) * uniform01(seed, k * box.dim() + a);
    }
  return out;
}

}  // namespace folia
