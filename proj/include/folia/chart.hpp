#pragma once

#include <optional>
#include <string>
#include <vector>

#include "folia/expr.hpp"
#include "folia/sampling.hpp"
#include "folia/tensor.hpp"
#include "json.hpp"

namespace folia {

/// Textual chart description, as read from or written to JSON.
struct ChartSpec {
  int dim = 0;
  int vertical_rank = 0;
  std::vector<std::string> coords;
  std::vector<std::vector<std::string>> metric;
  std::vector<std::vector<std::string>> vertical;
  std::optional<std::vector<std::vector<std::string>>> complex_structure;
  std::optional<std::string> distance;
  std::vector<double> basepoint;
  DomainBox domain;
};

ChartSpec chart_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ChartSpec& spec);

/// Chart of a foliated Riemannian manifold with expressions bound to its coordinates.
class FoliatedChart {
 public:
  const ChartSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  int vertical_rank() const { return spec_.vertical_rank; }
  int codim() const { return spec_.dim - spec_.vertical_rank; }
  const std::vector<std::string>& coords() const { return spec_.coords; }
  const DomainBox& domain() const { return spec_.domain; }

  const Expr& metric(int a, int b) const { return metric_[a <= b ? a * dim() + b : b * dim() + a]; }
  const Expr& vertical(int i, int a) const { return vertical_[i * dim() + a]; }
  bool has_complex_structure() const { return !complex_.empty(); }
  /// J in the adapted horizontal frame: J e_b = sum_a J(a, b) e_a.
  const Expr& complex_structure(int a, int b) const { return complex_[a * codim() + b]; }
  bool has_distance() const { return distance_.has_value(); }
  const Expr& distance() const { return *distance_; }

  /// Coordinate jets at `point` (variable a is coordinate a).
  std::vector<Jet> coordinate_jets(const Point& point, int order) const;

 private:
  friend FoliatedChart load_chart(const ChartSpec& spec);
  ChartSpec spec_;
  std::vector<Expr> metric_;
  std::vector<Expr> vertical_;
  std::vector<Expr> complex_;
  std::optional<Expr> distance_;
};

/// Parses and validates on 64 seeded domain samples.
FoliatedChart load_chart(const ChartSpec& spec);
FoliatedChart load_chart(const nlohmann::json& j);

/// Orthonormal frame: vertical vectors first (indices 0..p-1), then horizontal.
struct AdaptedFrame {
  Point point;
  int order = 0;
  int dim = 0;
  int vertical_rank = 0;
  JetTensor metric;   // (a, b)
  JetTensor frame;    // (A, a) = coordinate component a of e_A
  JetTensor coframe;  // (A, a) = component a of omega^A

  int codim() const { return dim - vertical_rank; }
  bool is_vertical(int A) const { return A < vertical_rank; }
};

AdaptedFrame adapted_frame(const FoliatedChart& chart, const Point& point, int order);

/// Residual-norm cutoff used when building the frame.
inline constexpr double kFrameDropTolerance = 1e-10;

/// J at a point as jets, q x q.
JetTensor complex_structure_jets(const FoliatedChart& chart, const std::vector<Jet>& coords);

/// max |pi_H [V_i, V_j]| over the chart's vertical fields at `point`.
double integrability_residual(const FoliatedChart& chart, const Point& point);

}  // namespace folia
