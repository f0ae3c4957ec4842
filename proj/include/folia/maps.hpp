#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "folia/curvature.hpp"
#include "folia/kahler.hpp"

namespace folia {

/// Smooth map between two charts, given by one expression per target coordinate.
class FoliatedMap {
 public:
  const FoliatedChart& source() const { return *source_; }
  const FoliatedChart& target() const { return *target_; }
  std::shared_ptr<const FoliatedChart> source_ptr() const { return source_; }
  std::shared_ptr<const FoliatedChart> target_ptr() const { return target_; }
  const std::vector<std::string>& component_text() const { return text_; }
  const Expr& component(int mu) const { return components_[mu]; }
  /// Image of a point in target coordinates.
  Point image(const Point& point) const;

 private:
  friend FoliatedMap load_map(std::shared_ptr<const FoliatedChart>, std::shared_ptr<const FoliatedChart>,
                              const std::vector<std::string>&);
  std::shared_ptr<const FoliatedChart> source_, target_;
  std::vector<std::string> text_;
  std::vector<Expr> components_;
};

/// Binds the components to source coordinates and checks the image of 64 domain samples.
FoliatedMap load_map(std::shared_ptr<const FoliatedChart> source, std::shared_ptr<const FoliatedChart> target,
                     const std::vector<std::string>& components);

/// Differential of a map in adapted frames, with covariant derivatives.
/// Indices: df(T, B) = f^T_B, ddf(T, B, C) = f^T_{B,C}, dddf(T, B, C, D) = f^T_{B,CD};
/// T runs over the target frame, B, C, D over the source frame, vertical first on both sides.
struct MapJet {
  Point point, image;
  int order = 0;
  std::shared_ptr<const FoliatedChart> source_chart, target_chart;  // keep the geometries valid
  std::shared_ptr<const Geometry> source, target;
  JetTensor components;   // (mu), order K
  JetTensor df;           // order K-1
  JetTensor ddf;          // order K-2
  JetTensor dddf;         // order K-3, empty when K < 3
  JetTensor target_bott;  // target Bott table composed with the map, order K-1
};

/// Needs order >= 2; second covariant derivatives need order >= 3.
MapJet map_jet(const FoliatedMap& map, const Point& point, int order);

/// max |f^a_i| over target horizontal a and source vertical i.
double check_foliated(const FoliatedMap& map, const std::vector<Point>& points);

struct SymmetryResidual {
  double symmetric = 0.0;  // f^c_{a,b} - f^c_{b,a}
  double mixed = 0.0;      // f^c_{a,i}
  double max() const { return std::max(symmetric, mixed); }
};
SymmetryResidual second_fundamental_symmetry(const FoliatedMap& map, const std::vector<Point>& points);

enum class TensionConvention { Bott, BarlettaDragomir };
/// Horizontal target components of the tension field.
Eigen::VectorXd tension(const MapJet& mj, TensionConvention convention = TensionConvention::Bott);
Eigen::VectorXd tension(const FoliatedMap& map, const Point& point, TensionConvention convention);

/// e_H as a jet of order K-1.
Jet energy_density(const MapJet& mj);
/// Sub-Laplacian of e_H at the point; needs order >= 3.
double energy_laplacian(const MapJet& mj);

struct DilatationSpectrum {
  Point point;
  std::vector<double> eigenvalues;  // descending
  std::optional<double> beta_min;   // empty when unbounded
  bool unbounded() const { return !beta_min.has_value(); }
};
/// Spectrum of f^c_a f^c_b over horizontal indices.
DilatationSpectrum dilatation(const MapJet& mj);
DilatationSpectrum dilatation(const FoliatedMap& map, const Point& point);

/// max |df(J e_b) - J~ df(e_b)| over horizontal b and points.
double check_holomorphic(const FoliatedMap& map, const std::vector<Point>& points);

enum class BochnerVariant { Riemannian, Kahler };

struct BochnerResult {
  BochnerVariant variant = BochnerVariant::Riemannian;
  bool harmonic = true;         // |tension| below the harmonicity tolerance
  double tension_norm = 0.0;
  double laplacian = 0.0;       // Sub-Laplacian of e_H
  double lhs = 0.0;             // laplacian, or half of it for the Kahler form
  double rhs = 0.0;
  double hessian_term = 0.0;
  double ricci_term = 0.0;
  double curvature_term = 0.0;  // inner-product form
  double tension_term = 0.0;    // f^a_b f^a_{c,cb}; dropped from rhs when harmonic
  double index_form_gap = 0.0;  // curvature term by explicit index contraction minus inner-product form
  double residual() const { return std::fabs(lhs - rhs); }
};
inline constexpr double kHarmonicTolerance = 1e-5;
/// Needs order >= 3.
BochnerResult bochner_residual(const MapJet& mj, BochnerVariant variant);
BochnerResult bochner_residual(const FoliatedMap& map, const Point& point, BochnerVariant variant, int order = 3);

/// f^a_{b,cd} - f^a_{b,dc} against the source and target curvature terms over horizontal indices.
double commutation_residual(const MapJet& mj);

/// max |d(outer o inner)(T, B) - d outer(T, C) d inner(C, B)| at a point.
double chain_rule_residual(const FoliatedMap& inner, const FoliatedMap& outer, const FoliatedMap& composite,
                           const Point& point);

}  // namespace folia
