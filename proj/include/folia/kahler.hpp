#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "folia/curvature.hpp"

namespace folia {

using cplx = std::complex<double>;

/// eta_k = (u_k - i J u_k) / sqrt(2) in horizontal frame components (length q).
struct UnitaryFrame {
  int complex_dim = 0;
  JetTensor re;  // (k, a)
  JetTensor im;  // (k, a)
  JetTensor J;   // (a, b), J e_b = J(a, b) e_a
};

UnitaryFrame unitary_frame(const Geometry& g);
UnitaryFrame unitary_frame(const FoliatedChart& chart, const Point& point, int order);

/// A complex horizontal vector as separate real and imaginary frame components.
struct ComplexVector {
  Eigen::VectorXd re, im;
};

ComplexVector eta(const UnitaryFrame& u, int k);
/// sum_k z_k eta_k
ComplexVector combine(const UnitaryFrame& u, std::span<const cplx> z);

/// Complex-multilinear extension of a real four-slot tensor R(x, y, z, w).
cplx four_slot(const JetTensor& transverse, const ComplexVector& x, const ComplexVector& y,
               const ComplexVector& z, const ComplexVector& w);
ComplexVector conj(const ComplexVector& v);
/// Complex-bilinear metric g(x, y) in an orthonormal frame.
cplx bilinear(const ComplexVector& x, const ComplexVector& y);

/// R^T(Z, conj Z, W, conj W) / (|Z|^2 |W|^2); z, w are coefficients in the eta basis.
double bisectional(const CurvatureTable& c, const UnitaryFrame& u, std::span<const cplx> z,
                   std::span<const cplx> w);
/// Ric_{a conj b} = sum_c R^T(eta_c, conj eta_c, eta_a, conj eta_b).
Eigen::MatrixXcd complex_transverse_ricci(const CurvatureTable& c, const UnitaryFrame& u);

struct KahlerCheck {
  double orthogonality = 0.0;  // g(J., J.) - g
  double parallel = 0.0;       // nabla^T J along every direction
  double lie = 0.0;            // horizontal part of L_V J, from coordinate brackets
  double unitary = 0.0;        // <eta_a, conj eta_b> - delta and J eta - i eta
  double max() const { return std::max({orthogonality, parallel, lie, unitary}); }
};
KahlerCheck validate_kahler(const Geometry& g);

struct ComplexSymmetryCheck {
  double swap_first = 0.0;  // R_{a b* c d*} - R_{c b* a d*}
  double swap_pair = 0.0;   // R_{a b* c d*} - R_{c d* a b*}
  double j_invariance = 0.0;  // R^T(JX, JY, Z, W) - R^T(X, Y, Z, W)
  double ricci_hermitian = 0.0;
  double max() const { return std::max({swap_first, swap_pair, j_invariance, ricci_hermitian}); }
};
ComplexSymmetryCheck complex_symmetries(const CurvatureTable& c, const UnitaryFrame& u);

}  // namespace folia
