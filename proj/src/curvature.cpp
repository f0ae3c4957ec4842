#include "folia/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "folia/errors.hpp"

namespace folia {

namespace {

// R^E_{CAB} from frame coefficients conn(A, B, C) and structure functions.
JetTensor frame_curvature(const Geometry& g, const JetTensor& conn) {
  const int m = g.dim(), K = g.connection().order - 1;
  const JetTensor G = truncated(conn, K);
  const JetTensor c = truncated(g.connection().structure, K);
  JetTensor R = zeros({m, m, m, m}, m, K);
  for (int E = 0; E < m; ++E)
    for (int C = 0; C < m; ++C)
      for (int A = 0; A < m; ++A)
        for (int B = 0; B < m; ++B) {
          Jet s = g.along(A, conn(B, C, E)) - g.along(B, conn(A, C, E));
          for (int D = 0; D < m; ++D)
            s += G(B, C, D) * G(A, D, E) - G(A, C, D) * G(B, D, E) - c(A, B, D) * G(D, C, E);
          R(E, C, A, B) = std::move(s);
        }
  return R;
}

JetTensor coordinate_curvature(const Geometry& g) {
  const int m = g.dim(), K = g.connection().order - 1;
  const auto& Gam = g.connection().christoffel;
  const JetTensor G = truncated(Gam, K);
  JetTensor R = zeros({m, m, m, m}, m, K);  // (d, c, a, b) coordinate R^d_{cab}
  for (int d = 0; d < m; ++d)
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          Jet s = Gam(d, b, c).derivative(a) - Gam(d, a, c).derivative(b);
          for (int e = 0; e < m; ++e) s += G(e, b, c) * G(d, a, e) - G(e, a, c) * G(d, b, e);
          R(d, c, a, b) = std::move(s);
        }
  const JetTensor E = g.frame_at(K);
  const JetTensor W = truncated(g.frame().coframe, K);
  // Contract one slot at a time.
  auto contract = [&](const JetTensor& in, int slot, const JetTensor& M) {
    JetTensor out = zeros({m, m, m, m}, m, K);
    for (std::size_t k = 0; k < out.size(); ++k) {
      auto idx = out.index(k);
      auto src = idx;
      Jet s(m, K);
      for (int x = 0; x < m; ++x) {
        src[slot] = x;
        s += M(idx[slot], x) * in.at(src);
      }
      out.flat(k) = std::move(s);
    }
    return out;
  };
  JetTensor r = contract(R, 0, W);
  r = contract(r, 1, E);
  r = contract(r, 2, E);
  return contract(r, 3, E);
}

void upd(double& slot, double v) { slot = std::max(slot, std::fabs(v)); }

}  // namespace

CurvatureTable curvature(const Geometry& g) {
  if (g.order() < 2) throw std::invalid_argument("curvature needs jet order >= 2");
  const int m = g.dim(), p = g.vertical_rank(), q = g.codim(), K = g.order() - 2;
  CurvatureTable t;
  t.order = K;
  t.riemann = coordinate_curvature(g);
  t.riemann_frame = frame_curvature(g, g.connection().levi_civita);
  t.bott = frame_curvature(g, g.connection().bott);
  t.transverse = zeros({q, q, q, q}, m, K);
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < q; ++a)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) t.transverse(b, a, c, d) = t.bott(p + a, p + b, p + c, p + d);
  t.ricci = zeros({q, q}, m, K);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c) t.ricci(a, b) += t.transverse(c, b, a, c);
  return t;
}

CurvatureTable riemann(const FoliatedChart& chart, const Point& point, int order) {
  return curvature(Geometry(chart, point, order));
}

CurvatureTable transverse_curvature(const FoliatedChart& chart, const Point& point, int order) {
  return curvature(Geometry(chart, point, order));
}

namespace {

double plane_curvature(const std::function<double(int, int, int, int)>& R, std::span<const double> z,
                       std::span<const double> w) {
  const std::size_t n = z.size();
  double zz = 0, ww = 0, zw = 0, num = 0;
  for (std::size_t a = 0; a < n; ++a) {
    zz += z[a] * z[a];
    ww += w[a] * w[a];
    zw += z[a] * w[a];
  }
  const double den = zz * ww - zw * zw;
  if (den <= 1e-12) throw DegeneratePlane("vectors do not span a plane");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          const double coef = z[a] * w[b] * w[c] * z[d];
          if (coef != 0.0) num += coef * R(a, b, c, d);
        }
  return num / den;
}

}  // namespace

double sectional(const JetTensor& endo, std::span<const double> z, std::span<const double> w) {
  return plane_curvature([&](int a, int b, int c, int d) { return CurvatureTable::slots(endo, a, b, c, d); },
                         z, w);
}

double transverse_sectional(const CurvatureTable& c, std::span<const double> z, std::span<const double> w) {
  return plane_curvature([&](int a, int b, int x, int d) { return c.transverse(a, b, x, d).value(); }, z, w);
}

double SymmetryCheck::max() const { return std::max({first_pair, second_pair, bianchi, pair_exchange}); }

SymmetryCheck curvature_symmetries(const JetTensor& endo, std::span<const int> ix) {
  SymmetryCheck s;
  auto R = [&](int a, int b, int c, int d) { return CurvatureTable::slots(endo, a, b, c, d); };
  for (int a : ix)
    for (int b : ix)
      for (int c : ix)
        for (int d : ix) {
          const double r = R(a, b, c, d);
          upd(s.first_pair, r + R(b, a, c, d));
          upd(s.second_pair, r + R(a, b, d, c));
          upd(s.bianchi, r + R(c, b, d, a) + R(d, b, a, c));
          upd(s.pair_exchange, r - R(c, d, a, b));
        }
  return s;
}

double block_vanishing_residual(const CurvatureTable& c, int p) {
  const int m = c.bott.extent(0);
  double worst = 0.0;
  for (int a = p; a < m; ++a)
    for (int i = 0; i < p; ++i)
      for (int A = 0; A < m; ++A)
        for (int B = 0; B < m; ++B) {
          upd(worst, c.bott(a, i, A, B).value());
          upd(worst, c.bott(i, a, A, B).value());
          upd(worst, c.bott(A, a, i, B).value());
          upd(worst, c.bott(A, a, B, i).value());
        }
  return worst;
}

ONeillCheck oneill_check(const Geometry& g, const CurvatureTable& c, const ONeillTensors& o) {
  const int m = g.dim(), p = g.vertical_rank();
  ONeillCheck r;
  auto AA = [&](int x, int y, int z, int w) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) s += o.A(i, x, y).value() * o.A(i, z, w).value();
    return s;
  };
  for (int X = p; X < m; ++X)
    for (int Y = p; Y < m; ++Y) {
      for (int Z = p; Z < m; ++Z)
        for (int W = p; W < m; ++W) {
          const double lhs = c.riemann(W, Z, X, Y).value();
          const double rhs = c.bott(W, Z, X, Y).value() + 2.0 * AA(X, Y, Z, W) + AA(Y, W, X, Z) - AA(Y, Z, X, W);
          upd(r.identity, lhs - rhs);
        }
      double lhs = 0.0, extra = 0.0;
      for (int a = p; a < m; ++a) {
        lhs += c.riemann(Y, a, X, a).value();
        extra += AA(X, a, a, Y);
      }
      upd(r.corollary, lhs - (c.ricci(X - p, Y - p).value() + 3.0 * extra));
    }
  return r;
}

std::vector<IdentityResidual> nakagawa_takagi(const Geometry& g, const CurvatureTable& c,
                                              const ONeillTensors& o) {
  const int m = g.dim(), p = g.vertical_rank();
  auto R = [&](int a, int b, int x, int d) { return CurvatureTable::slots(c.riemann, a, b, x, d); };
  auto h = [&](int a, int b, int x) { return o.h(a, b, x).value(); };
  auto A = [&](int a, int b, int x) { return o.A(a, b, x).value(); };
  auto dh = [&](int a, int b, int x, int d) { return o.dh(a, b, x, d).value(); };
  auto dA = [&](int a, int b, int x, int d) { return o.dA(a, b, x, d).value(); };

  std::vector<IdentityResidual> out = {{"h_{i b;j} = h_{ik} h^b_{kj}"},
                                       {"h_{i b;c} = h_{ik} A^k_{bc}"},
                                       {"A^i_{a j;b} = -A^i_{ac} A^j_{cb}"},
                                       {"h_{ij;k} - h_{ik;j} = R_{aijk}"},
                                       {"mixed vertical Codazzi"},
                                       {"mixed horizontal Codazzi"}};
  for (int a = p; a < m; ++a)
    for (int i = 0; i < p; ++i) {
      for (int b = p; b < m; ++b)
        for (int j = 0; j < p; ++j) {
          double s = 0.0;
          for (int k = 0; k < p; ++k) s += h(a, i, k) * h(b, k, j);
          upd(out[0].residual, dh(a, i, b, j) - s);
          upd(out[0].residual, dh(a, b, i, j) - s);
          upd(out[4].residual, dh(a, i, j, b) - dh(a, i, b, j) + dA(i, a, j, b) - dA(i, a, b, j) - R(a, i, j, b));
          double t = 0.0;
          for (int x = p; x < m; ++x) t += A(i, a, x) * A(j, x, b);
          upd(out[2].residual, dA(i, a, j, b) + t);
        }
      for (int b = p; b < m; ++b)
        for (int x = p; x < m; ++x) {
          double s = 0.0;
          for (int k = 0; k < p; ++k) s += h(a, i, k) * A(k, b, x);
          upd(out[1].residual, dh(a, i, b, x) - s);
          upd(out[5].residual, dh(a, i, b, x) - dh(a, i, x, b) + dA(i, a, b, x) - dA(i, a, x, b) - R(a, i, b, x));
        }
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k) upd(out[3].residual, dh(a, i, j, k) - dh(a, i, k, j) - R(a, i, j, k));
    }
  return out;
}

double ricci_identity_residual(const CurvatureTable& c, const ONeillTensors& o) {
  if (!o.ddh) throw std::invalid_argument("Ricci identity needs jet order >= 3");
  const int m = o.h.extent(0);
  auto R = [&](int a, int b, int x, int d) { return CurvatureTable::slots(c.riemann, a, b, x, d); };
  auto h = [&](int a, int b, int x) { return o.h(a, b, x).value(); };
  double worst = 0.0;
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B)
      for (int C = 0; C < m; ++C)
        for (int D = 0; D < m; ++D)
          for (int E = 0; E < m; ++E) {
            const double lhs = (*o.ddh)(A, B, C, D, E).value() - (*o.ddh)(A, B, C, E, D).value();
            double rhs = 0.0;
            for (int F = 0; F < m; ++F)
              rhs += h(F, B, C) * R(A, F, D, E) + h(A, F, C) * R(B, F, D, E) + h(A, B, F) * R(C, F, D, E);
            upd(worst, lhs - rhs);
          }
  return worst;
}

}  // namespace folia
