#pragma once

#include <span>
#include <string>
#include <vector>

#include "folia/connection.hpp"

namespace folia {

/// Curvature at a point; jets of order K-2.
/// Endomorphism tables use (E, C, A, B) = R^E_{CAB}, so R(e_A, e_B) e_C = R^E_{CAB} e_E.
struct CurvatureTable {
  int order = 0;
  JetTensor riemann;        // Levi-Civita, from coordinate Christoffels
  JetTensor riemann_frame;  // Levi-Civita, from frame coefficients
  JetTensor bott;           // Bott connection
  JetTensor transverse;     // (b, a, c, d) = R^T_{bacd}, horizontal indices from 0
  JetTensor ricci;          // (a, b) = Ric^T_{ab}

  /// Four-slot value R(e_a, e_b, e_c, e_d) = <R(e_c, e_d) e_a, e_b> of an endomorphism table.
  static double slots(const JetTensor& endo, int a, int b, int c, int d) {
    return endo(b, a, c, d).value();
  }
};

CurvatureTable curvature(const Geometry& g);
CurvatureTable riemann(const FoliatedChart& chart, const Point& point, int order);
CurvatureTable transverse_curvature(const FoliatedChart& chart, const Point& point, int order);

/// Sectional curvature of the plane spanned by frame-component vectors; full or horizontal.
double sectional(const JetTensor& endo, std::span<const double> z, std::span<const double> w);
double transverse_sectional(const CurvatureTable& c, std::span<const double> z, std::span<const double> w);

struct SymmetryCheck {
  double first_pair = 0.0;
  double second_pair = 0.0;
  double bianchi = 0.0;
  double pair_exchange = 0.0;
  double max() const;
};
/// Symmetries of a four-slot curvature given by an endomorphism table over `indices`.
SymmetryCheck curvature_symmetries(const JetTensor& endo, std::span<const int> indices);

/// Entries of the Bott curvature that vanish on a Riemannian foliation.
double block_vanishing_residual(const CurvatureTable& c, int vertical_rank);

struct ONeillCheck {
  double identity = 0.0;   // R^M vs R^T + A-terms, horizontal slots
  double corollary = 0.0;  // horizontal Ricci version
  double max() const { return std::max(identity, corollary); }
};
ONeillCheck oneill_check(const Geometry& g, const CurvatureTable& c, const ONeillTensors& o);

struct IdentityResidual {
  std::string name;
  double residual = 0.0;
};
/// Six first-order relations between h, A, their derivatives and R^M.
std::vector<IdentityResidual> nakagawa_takagi(const Geometry& g, const CurvatureTable& c,
                                              const ONeillTensors& o);
/// h^A_{BC;DE} - h^A_{BC;ED} against the curvature terms; needs ddh.
double ricci_identity_residual(const CurvatureTable& c, const ONeillTensors& o);

}  // namespace folia
