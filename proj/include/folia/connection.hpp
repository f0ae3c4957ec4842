#pragma once

#include <optional>
#include <vector>

#include "folia/chart.hpp"

namespace folia {

/// Connection coefficients at one point; jets of order frame.order - 1.
/// Frame tables use (A, B, C) = C-component of nabla_{e_A} e_B.
struct ConnectionTable {
  int order = 0;
  JetTensor christoffel;  // (c, a, b): coordinate Gamma^c_{ab}
  JetTensor levi_civita;  // (A, B, C)
  JetTensor bott;         // (A, B, C)
  JetTensor structure;    // (A, B, C): C-component of [e_A, e_B]
};

/// Frame plus connection at a point; the common input of the curvature and map code.
class Geometry {
 public:
  Geometry(const FoliatedChart& chart, const Point& point, int order);

  const FoliatedChart& chart() const { return *chart_; }
  const AdaptedFrame& frame() const { return frame_; }
  const ConnectionTable& connection() const { return connection_; }
  const Point& point() const { return frame_.point; }
  int order() const { return frame_.order; }
  int dim() const { return frame_.dim; }
  int vertical_rank() const { return frame_.vertical_rank; }
  int codim() const { return frame_.codim(); }
  bool is_vertical(int A) const { return A < frame_.vertical_rank; }

  /// e_A(u); the result has order u.order() - 1.
  Jet along(int A, const Jet& u) const;
  /// Frame components truncated to order k.
  const JetTensor& frame_at(int k) const { return frames_[k]; }
  /// Sub-Laplacian sum_alpha e_alpha(e_alpha u) - (nabla^B_{e_alpha} e_alpha) u; order drops by 2.
  Jet sub_laplacian(const Jet& u) const;
  /// Levi-Civita covariant derivative of a tensor given by orthonormal frame components.
  /// Appends the derivative index; order drops by 1.
  JetTensor covariant_derivative(const JetTensor& t) const;

 private:
  const FoliatedChart* chart_;
  AdaptedFrame frame_;
  ConnectionTable connection_;
  std::vector<JetTensor> frames_;
};

/// Gauss-Jordan inverse of a square jet matrix.
JetTensor inverse(const JetTensor& m);

ConnectionTable levi_civita(const FoliatedChart& chart, const Point& point, int order);
ConnectionTable bott_connection(const FoliatedChart& chart, const Point& point, int order);

/// A, h as (1,2)-tensors with upper index first: A(C, A, B) = C-component of A(e_A, e_B).
struct ONeillTensors {
  JetTensor A;      // order K-1
  JetTensor h;      // order K-1
  JetTensor kappa;  // (C), order K-1
  JetTensor dA;     // (C, A, B, D) = A^C_{AB;D}, order K-2
  JetTensor dh;     // order K-2
  std::optional<JetTensor> ddh;  // (C, A, B, D, E), order K-3, when K >= 3
};

ONeillTensors oneill_tensors(const Geometry& g);
ONeillTensors oneill_tensors(const FoliatedChart& chart, const Point& point, int order);

/// Square root of the sum of squared frame components (values only).
double tensor_norm(const JetTensor& t);

/// T(C, A, B) = C-component of T(e_A, e_B) for the Bott connection.
JetTensor torsion(const Geometry& g);
JetTensor torsion(const FoliatedChart& chart, const Point& point, int order);

struct TorsionCheck {
  double route_residual = 0.0;      // Bott torsion vs -pi_V[pi_H ., pi_H .]
  double antisymmetry_residual = 0.0;
  double max_magnitude = 0.0;       // largest |T^C_{AB}|
};
TorsionCheck torsion_check(const Geometry& g);

struct ConnectionCheck {
  double lc_metric = 0.0;           // <nabla e_B, e_C> + <e_B, nabla e_C>
  double lc_torsion = 0.0;          // nabla_A e_B - nabla_B e_A - [e_A, e_B]
  double transverse_metric = 0.0;   // Bott on horizontal blocks
  double transverse_torsion = 0.0;  // nabla_X pi_H Y - nabla_Y pi_H X - pi_H [X, Y]
  double coframe_duality = 0.0;
  double orthonormality = 0.0;
  double max() const;
};
ConnectionCheck connection_check(const Geometry& g);

double check_integrability(const FoliatedChart& chart, const std::vector<Point>& points);

struct RiemannianCheck {
  double antisymmetry = 0.0;    // A^i_{ab} + A^i_{ba}
  double lie_derivative = 0.0;  // (L_V g_H)(e_a, e_b)
  double max() const { return std::max(antisymmetry, lie_derivative); }
};
RiemannianCheck check_riemannian(const FoliatedChart& chart, const std::vector<Point>& points);

struct C1Norms {
  double A = 0.0, dA = 0.0, h = 0.0, dh = 0.0;
  double A_c1() const { return std::max(A, dA); }
  double h_c1() const { return std::max(h, dh); }
};
C1Norms c1_norms(const FoliatedChart& chart, const std::vector<Point>& points);

}  // namespace folia
