#include "folia/connection.hpp"

#include <algorithm>
#include <cmath>

#include "folia/errors.hpp"

namespace folia {

JetTensor inverse(const JetTensor& m) {
  const int n = m.extent(0);
  const int dim = m.flat(0).dim(), order = m.flat(0).order();
  JetTensor a = m;
  JetTensor inv = zeros({n, n}, dim, order);
  for (int i = 0; i < n; ++i) inv(i, i) += 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col).value()) > std::fabs(a(piv, col).value())) piv = r;
    if (a(piv, col).value() == 0.0) throw DomainError("singular jet matrix");
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    const Jet p = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) / p;
      inv(col, c) = inv(col, c) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a(r, col);
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

Geometry::Geometry(const FoliatedChart& chart, const Point& point, int order)
    : chart_(&chart), frame_(adapted_frame(chart, point, order)) {
  if (order < 1) throw std::invalid_argument("geometry needs jet order >= 1");
  const int m = frame_.dim, p = frame_.vertical_rank, K = order - 1;
  for (int k = 0; k <= order; ++k) frames_.push_back(truncated(frame_.frame, k));

  auto& cn = connection_;
  cn.order = K;
  const JetTensor g = truncated(frame_.metric, K);
  const JetTensor ginv = inverse(g);
  JetTensor dg = zeros({m, m, m}, m, K);  // (d, a, b) = d_d g_ab
  for (int d = 0; d < m; ++d)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) dg(d, a, b) = frame_.metric(a, b).derivative(d);
  cn.christoffel = zeros({m, m, m}, m, K);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        Jet s(m, K);
        for (int d = 0; d < m; ++d) s += ginv(c, d) * (dg(a, d, b) + dg(b, d, a) - dg(d, a, b));
        cn.christoffel(c, a, b) = 0.5 * s;
        cn.christoffel(c, b, a) = cn.christoffel(c, a, b);
      }

  const JetTensor& E = frames_[K];
  const JetTensor W = truncated(frame_.coframe, K);
  // de(A, a, c) = d_a e_A^c
  JetTensor de = zeros({m, m, m}, m, K);
  for (int A = 0; A < m; ++A)
    for (int a = 0; a < m; ++a)
      for (int c = 0; c < m; ++c) de(A, a, c) = frame_.frame(A, c).derivative(a);

  cn.levi_civita = zeros({m, m, m}, m, K);
  cn.structure = zeros({m, m, m}, m, K);
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B) {
      std::vector<Jet> cov(m, Jet(m, K)), br(m, Jet(m, K));
      for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a) {
          Jet inner = de(B, a, c);
          for (int b = 0; b < m; ++b) inner += cn.christoffel(c, a, b) * E(B, b);
          cov[c] += E(A, a) * inner;
          br[c] += E(A, a) * de(B, a, c) - E(B, a) * de(A, a, c);
        }
      for (int C = 0; C < m; ++C)
        for (int c = 0; c < m; ++c) {
          cn.levi_civita(A, B, C) += W(C, c) * cov[c];
          cn.structure(A, B, C) += W(C, c) * br[c];
        }
    }

  cn.bott = zeros({m, m, m}, m, K);
  auto vert = [p](int A) { return A < p; };
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B)
      for (int C = 0; C < m; ++C) {
        if (vert(B) != vert(C)) continue;  // mixed blocks vanish
        if (vert(A) == vert(B))
          cn.bott(A, B, C) = cn.levi_civita(A, B, C);
        else
          cn.bott(A, B, C) = cn.structure(A, B, C);
      }
}

Jet Geometry::along(int A, const Jet& u) const {
  const int k = u.order() - 1;
  const JetTensor& E = frames_[k];
  Jet r(u.dim(), k);
  for (int a = 0; a < dim(); ++a) r += E(A, a) * u.derivative(a);
  return r;
}

Jet Geometry::sub_laplacian(const Jet& u) const {
  const int k = u.order() - 2;
  if (k < 0) throw std::invalid_argument("sub-Laplacian needs jet order >= 2");
  Jet r(u.dim(), k);
  std::vector<Jet> first;
  for (int C = 0; C < dim(); ++C) first.push_back(along(C, u).truncated(k));
  for (int a = vertical_rank(); a < dim(); ++a) {
    r += along(a, along(a, u));
    for (int C = 0; C < dim(); ++C) r -= connection_.bott(a, a, C).truncated(k) * first[C];
  }
  return r;
}

JetTensor Geometry::covariant_derivative(const JetTensor& t) const {
  const int m = dim();
  const int r = t.flat(0).order() - 1;
  if (r < 0) throw std::invalid_argument("covariant derivative needs order >= 1");
  const JetTensor lc = truncated(connection_.levi_civita, r);
  const JetTensor tr = truncated(t, r);
  auto shape = t.shape();
  shape.push_back(m);
  JetTensor out = zeros(shape, m, r);
  const int rank = t.rank();
  std::vector<int> idx(rank), moved(rank);
  for (std::size_t k = 0; k < t.size(); ++k) {
    idx = t.index(k);
    for (int D = 0; D < m; ++D) {
      Jet s = along(D, t.flat(k));
      for (int slot = 0; slot < rank; ++slot) {
        moved = idx;
        for (int E = 0; E < m; ++E) {
          moved[slot] = E;
          s -= lc(D, idx[slot], E) * tr.at(moved);
        }
      }
      auto full = idx;
      full.push_back(D);
      out.at(full) = std::move(s);
    }
  }
  return out;
}

ConnectionTable levi_civita(const FoliatedChart& chart, const Point& point, int order) {
  return Geometry(chart, point, order).connection();
}

ConnectionTable bott_connection(const FoliatedChart& chart, const Point& point, int order) {
  return Geometry(chart, point, order).connection();
}

double tensor_norm(const JetTensor& t) {
  double s = 0.0;
  for (const auto& x : t) s += x.value() * x.value();
  return std::sqrt(s);
}

ONeillTensors oneill_tensors(const Geometry& g) {
  const int m = g.dim(), p = g.vertical_rank(), K = g.connection().order;
  const auto& lc = g.connection().levi_civita;
  ONeillTensors o;
  o.A = zeros({m, m, m}, m, K);
  o.h = zeros({m, m, m}, m, K);
  o.kappa = zeros({m}, m, K);
  for (int C = 0; C < m; ++C)
    for (int A = 0; A < m; ++A)
      for (int B = 0; B < m; ++B) {
        if (C < p && A >= p && B >= p) o.A(C, A, B) = -lc(B, A, C);
        if (C >= p && A < p && B < p) o.h(C, A, B) = lc(B, A, C);
      }
  for (int C = p; C < m; ++C)
    for (int i = 0; i < p; ++i) o.kappa(C) += o.h(C, i, i);
  if (K >= 1) {
    o.dA = g.covariant_derivative(o.A);
    o.dh = g.covariant_derivative(o.h);
  }
  if (K >= 2) o.ddh = g.covariant_derivative(o.dh);
  return o;
}

ONeillTensors oneill_tensors(const FoliatedChart& chart, const Point& point, int order) {
  return oneill_tensors(Geometry(chart, point, order));
}

JetTensor torsion(const Geometry& g) {
  const int m = g.dim();
  const auto& cn = g.connection();
  JetTensor T = zeros({m, m, m}, m, cn.order);
  for (int C = 0; C < m; ++C)
    for (int A = 0; A < m; ++A)
      for (int B = 0; B < m; ++B)
        T(C, A, B) = cn.bott(A, B, C) - cn.bott(B, A, C) - cn.structure(A, B, C);
  return T;
}

JetTensor torsion(const FoliatedChart& chart, const Point& point, int order) {
  return torsion(Geometry(chart, point, order));
}

TorsionCheck torsion_check(const Geometry& g) {
  const int m = g.dim(), p = g.vertical_rank();
  const auto& lc = g.connection().levi_civita;
  const JetTensor T = torsion(g);
  TorsionCheck r;
  for (int C = 0; C < m; ++C)
    for (int A = 0; A < m; ++A)
      for (int B = 0; B < m; ++B) {
        // -pi_V [pi_H e_A, pi_H e_B], bracket taken from the torsion-free Levi-Civita connection.
        double expect = 0.0;
        if (A >= p && B >= p && C < p) expect = -(lc(A, B, C).value() - lc(B, A, C).value());
        const double t = T(C, A, B).value();
        r.route_residual = std::max(r.route_residual, std::fabs(t - expect));
        r.antisymmetry_residual = std::max(r.antisymmetry_residual, std::fabs(t + T(C, B, A).value()));
        r.max_magnitude = std::max(r.max_magnitude, std::fabs(t));
      }
  return r;
}

double ConnectionCheck::max() const {
  return std::max({lc_metric, lc_torsion, transverse_metric, transverse_torsion, coframe_duality,
                   orthonormality});
}

ConnectionCheck connection_check(const Geometry& g) {
  const int m = g.dim(), p = g.vertical_rank();
  const auto& cn = g.connection();
  const auto& f = g.frame();
  ConnectionCheck r;
  auto upd = [](double& slot, double v) { slot = std::max(slot, std::fabs(v)); };
  for (int A = 0; A < m; ++A)
    for (int B = 0; B < m; ++B) {
      double dual = 0.0, ortho = 0.0;
      for (int a = 0; a < m; ++a) {
        dual += f.coframe(A, a).value() * f.frame(B, a).value();
        for (int b = 0; b < m; ++b) ortho += f.metric(a, b).value() * f.frame(A, a).value() * f.frame(B, b).value();
      }
      upd(r.coframe_duality, dual - (A == B));
      upd(r.orthonormality, ortho - (A == B));
      for (int C = 0; C < m; ++C) {
        upd(r.lc_metric, cn.levi_civita(A, B, C).value() + cn.levi_civita(A, C, B).value());
        upd(r.lc_torsion, cn.levi_civita(A, B, C).value() - cn.levi_civita(B, A, C).value() -
                              cn.structure(A, B, C).value());
        if (B >= p && C >= p) upd(r.transverse_metric, cn.bott(A, B, C).value() + cn.bott(A, C, B).value());
        if (C >= p) {
          const double xy = B >= p ? cn.bott(A, B, C).value() : 0.0;
          const double yx = A >= p ? cn.bott(B, A, C).value() : 0.0;
          upd(r.transverse_torsion, xy - yx - cn.structure(A, B, C).value());
        }
      }
    }
  return r;
}

double check_integrability(const FoliatedChart& chart, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const auto& pt : points) worst = std::max(worst, integrability_residual(chart, pt));
  return worst;
}

RiemannianCheck check_riemannian(const FoliatedChart& chart, const std::vector<Point>& points) {
  RiemannianCheck r;
  const int m = chart.dim(), p = chart.vertical_rank();
  for (const auto& pt : points) {
    Geometry g(chart, pt, 1);
    const auto o = oneill_tensors(g);
    const auto& c = g.connection().structure;
    for (int i = 0; i < p; ++i)
      for (int a = p; a < m; ++a)
        for (int b = p; b < m; ++b) {
          r.antisymmetry = std::max(r.antisymmetry, std::fabs(o.A(i, a, b).value() + o.A(i, b, a).value()));
          const double lie = -(c(i, a, b).value() + c(i, b, a).value());
          r.lie_derivative = std::max(r.lie_derivative, std::fabs(lie));
        }
  }
  return r;
}

C1Norms c1_norms(const FoliatedChart& chart, const std::vector<Point>& points) {
  C1Norms n;
  for (const auto& pt : points) {
    const auto o = oneill_tensors(chart, pt, 2);
    n.A = std::max(n.A, tensor_norm(o.A));
    n.h = std::max(n.h, tensor_norm(o.h));
    n.dA = std::max(n.dA, tensor_norm(o.dA));
    n.dh = std::max(n.dh, tensor_norm(o.dh));
  }
  return n;
}

}  // namespace folia
