#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "folia/maps.hpp"

namespace folia {

enum class CurvatureMode { Sectional, Bisectional };

struct BoundEstimate {
  double K1 = 0.0;  // -inf of the smallest transverse Ricci eigenvalue on the source, clamped at 0
  double K2 = 0.0;  // -sup of target transverse (bi)sectional curvature
  bool assumption_ok = false;
  C1Norms source_norms;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Sampled estimates; `samples` points in each domain box.
BoundEstimate estimate_bounds(const FoliatedChart& source, const FoliatedChart& target, std::size_t samples,
                              std::uint64_t seed, CurvatureMode mode);
/// Throws AssumptionViolated unless K2 > 0.
void require_assumptions(const BoundEstimate& b);

/// -inf over points of the smallest eigenvalue of Ric^T, clamped at 0 (values below 1e-10 count as 0).
double ricci_lower_bound(const FoliatedChart& chart, const std::vector<Point>& points);

enum class SchwarzVariant { Riemannian, Kahler };

struct SchwarzSample {
  Point point;
  double value = 0.0;  // lambda_1, or e_H for the Kahler variant
  double bound = 0.0;
  double ratio = 0.0;  // infinite when the bound is 0 and the value is not
};

struct SchwarzReport {
  SchwarzVariant variant = SchwarzVariant::Riemannian;
  BoundEstimate bounds;
  double beta = 1.0;
  std::vector<SchwarzSample> samples;
  double max_ratio = 0.0;
  bool horizontally_constant = false;
  bool passed(double tol) const;
};

/// Empty `beta` means auto: the largest beta_min over the samples.
SchwarzReport schwarz_check(const FoliatedMap& map, const std::vector<Point>& points, SchwarzVariant variant,
                            std::optional<double> beta, const BoundEstimate& bounds);

struct ComparisonSample {
  Point point;
  double r = 0.0;
  double gradient_residual = 0.0;  // | |grad r| - 1 |
  double laplacian = 0.0;          // sub-Laplacian of r
  double bound = 0.0;
  bool holds = true;
};

struct ComparisonReport {
  double C_candidate = 1.0;
  std::optional<double> C_min;  // empty when no finite C works
  double K1 = 0.0, k1 = 0.0, k2 = 0.0;
  int codim = 0;
  std::vector<ComparisonSample> samples;
  std::size_t skipped = 0;  // samples with r below kMinRadius
  bool passed() const;
};

inline constexpr double kMinRadius = 1e-3;
inline constexpr double kEikonalTolerance = 1e-6;

/// Sub-Laplacian comparison for the chart's distance expression at each point.
ComparisonReport comparison_check(const FoliatedChart& chart, const std::vector<Point>& points,
                                  double C_candidate = 1.0);

}  // namespace folia
