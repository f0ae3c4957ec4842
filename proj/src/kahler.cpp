#include "folia/kahler.hpp"

#include <cmath>

#include "folia/errors.hpp"

namespace folia {

UnitaryFrame unitary_frame(const Geometry& g) {
  const int q = g.codim(), m = g.dim(), K = g.order();
  const auto xs = g.chart().coordinate_jets(g.point(), K);
  UnitaryFrame u;
  u.J = complex_structure_jets(g.chart(), xs);
  u.complex_dim = q / 2;
  u.re = zeros({q / 2, q}, m, K);
  u.im = zeros({q / 2, q}, m, K);

  std::vector<std::vector<Jet>> basis;
  auto dot = [&](const std::vector<Jet>& a, const std::vector<Jet>& b) {
    Jet s(m, K);
    for (int x = 0; x < q; ++x) s += a[x] * b[x];
    return s;
  };
  int k = 0;
  for (int a = 0; a < q && k < q / 2; ++a) {
    std::vector<Jet> v(q, Jet(m, K));
    v[a] += 1.0;
    for (const auto& b : basis) {
      const Jet c = dot(v, b);
      for (int x = 0; x < q; ++x) v[x] -= c * b[x];
    }
    const Jet n2 = dot(v, v);
    if (!(n2.value() > kFrameDropTolerance * kFrameDropTolerance)) continue;
    const Jet n = sqrt(n2);
    for (auto& x : v) x = x / n;
    std::vector<Jet> Jv(q, Jet(m, K));
    for (int x = 0; x < q; ++x)
      for (int y = 0; y < q; ++y) Jv[x] += u.J(x, y) * v[y];
    const double r = 1.0 / std::sqrt(2.0);
    for (int x = 0; x < q; ++x) {
      u.re(k, x) = v[x] * r;
      u.im(k, x) = Jv[x] * (-r);
    }
    basis.push_back(std::move(v));
    basis.push_back(std::move(Jv));
    ++k;
  }
  if (k < q / 2) throw DegenerateFrame("could not build a unitary frame");
  return u;
}

UnitaryFrame unitary_frame(const FoliatedChart& chart, const Point& point, int order) {
  return unitary_frame(Geometry(chart, point, order));
}

ComplexVector eta(const UnitaryFrame& u, int k) {
  const int q = u.re.extent(1);
  ComplexVector v{Eigen::VectorXd(q), Eigen::VectorXd(q)};
  for (int a = 0; a < q; ++a) {
    v.re(a) = u.re(k, a).value();
    v.im(a) = u.im(k, a).value();
  }
  return v;
}

ComplexVector combine(const UnitaryFrame& u, std::span<const cplx> z) {
  const int q = u.re.extent(1);
  ComplexVector v{Eigen::VectorXd::Zero(q), Eigen::VectorXd::Zero(q)};
  for (int k = 0; k < u.complex_dim; ++k) {
    const auto e = eta(u, k);
    v.re += z[k].real() * e.re - z[k].imag() * e.im;
    v.im += z[k].real() * e.im + z[k].imag() * e.re;
  }
  return v;
}

ComplexVector conj(const ComplexVector& v) { return {v.re, -v.im}; }

cplx bilinear(const ComplexVector& x, const ComplexVector& y) {
  return {x.re.dot(y.re) - x.im.dot(y.im), x.re.dot(y.im) + x.im.dot(y.re)};
}

cplx four_slot(const JetTensor& T, const ComplexVector& x, const ComplexVector& y, const ComplexVector& z,
               const ComplexVector& w) {
  const int q = T.extent(0);
  const ComplexVector* args[4] = {&x, &y, &z, &w};
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  cplx total = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    const Eigen::VectorXd* v[4];
    int n_im = 0;
    for (int s = 0; s < 4; ++s) {
      const bool imag = mask & (1 << s);
      v[s] = imag ? &args[s]->im : &args[s]->re;
      n_im += imag;
    }
    double sum = 0.0;
    for (int a = 0; a < q; ++a) {
      if ((*v[0])(a) == 0.0) continue;
      for (int b = 0; b < q; ++b) {
        if ((*v[1])(b) == 0.0) continue;
        for (int c = 0; c < q; ++c) {
          if ((*v[2])(c) == 0.0) continue;
          for (int d = 0; d < q; ++d)
            sum += (*v[0])(a) * (*v[1])(b) * (*v[2])(c) * (*v[3])(d) * T(a, b, c, d).value();
        }
      }
    }
    total += ipow[n_im % 4] * sum;
  }
  return total;
}

double bisectional(const CurvatureTable& c, const UnitaryFrame& u, std::span<const cplx> z,
                   std::span<const cplx> w) {
  const auto Z = combine(u, z), W = combine(u, w);
  const double zz = bilinear(Z, conj(Z)).real(), ww = bilinear(W, conj(W)).real();
  if (zz <= 1e-24 || ww <= 1e-24) throw ZeroVector("bisectional curvature of a zero vector");
  return four_slot(c.transverse, Z, conj(Z), W, conj(W)).real() / (zz * ww);
}

Eigen::MatrixXcd complex_transverse_ricci(const CurvatureTable& c, const UnitaryFrame& u) {
  const int n = u.complex_dim;
  Eigen::MatrixXcd ric = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        const auto ek = eta(u, k);
        ric(a, b) += four_slot(c.transverse, ek, conj(ek), eta(u, a), conj(eta(u, b)));
      }
  return ric;
}

KahlerCheck validate_kahler(const Geometry& g) {
  if (!g.chart().has_complex_structure()) throw MissingJ("chart has no complex structure");
  const int m = g.dim(), p = g.vertical_rank(), q = g.codim(), K = g.order();
  const UnitaryFrame u = unitary_frame(g);
  const auto& J = u.J;
  const auto& cn = g.connection();
  KahlerCheck r;
  auto upd = [](double& slot, double v) { slot = std::max(slot, std::fabs(v)); };

  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      double s = 0.0;
      for (int c = 0; c < q; ++c) s += J(c, a).value() * J(c, b).value();
      upd(r.orthogonality, s - (a == b));
    }

  const JetTensor Jl = truncated(J, K - 1);
  for (int A = 0; A < m; ++A)
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        Jet s = g.along(A, J(a, b));
        for (int c = 0; c < q; ++c)
          s += Jl(c, b) * cn.bott(A, p + c, p + a) - Jl(a, c) * cn.bott(A, p + b, p + c);
        upd(r.parallel, s.value());
      }

  // L_{e_i} J on horizontal vectors, from coordinate brackets of frame fields.
  const JetTensor& E = g.frame().frame;
  const JetTensor W = truncated(g.frame().coframe, K - 1);
  auto bracket = [&](const std::vector<Jet>& U, const std::vector<Jet>& V) {
    std::vector<Jet> out(m, Jet(m, K - 1));
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        out[c] += U[a].truncated(K - 1) * V[c].derivative(a) - V[a].truncated(K - 1) * U[c].derivative(a);
    return out;
  };
  auto field = [&](int A) {
    std::vector<Jet> v;
    for (int a = 0; a < m; ++a) v.push_back(E(A, a));
    return v;
  };
  for (int i = 0; i < p; ++i)
    for (int b = 0; b < q; ++b) {
      std::vector<Jet> Jb(m, Jet(m, K));
      for (int c = 0; c < q; ++c)
        for (int a = 0; a < m; ++a) Jb[a] += J(c, b) * E(p + c, a);
      const auto lhs = bracket(field(i), Jb);
      const auto inner = bracket(field(i), field(p + b));
      for (int a = 0; a < q; ++a) {
        double s = 0.0;
        for (int x = 0; x < m; ++x) s += W(p + a, x).value() * lhs[x].value();
        for (int c = 0; c < q; ++c) {
          double proj = 0.0;
          for (int x = 0; x < m; ++x) proj += W(p + c, x).value() * inner[x].value();
          s -= J(a, c).value() * proj;
        }
        upd(r.lie, s);
      }
    }

  for (int a = 0; a < u.complex_dim; ++a) {
    const auto ea = eta(u, a);
    for (int b = 0; b < u.complex_dim; ++b) {
      const cplx h = bilinear(ea, conj(eta(u, b)));
      upd(r.unitary, std::abs(h - cplx(a == b ? 1.0 : 0.0)));
    }
    Eigen::MatrixXd Jv(q, q);
    for (int x = 0; x < q; ++x)
      for (int y = 0; y < q; ++y) Jv(x, y) = J(x, y).value();
    upd(r.unitary, (Jv * ea.re + ea.im).cwiseAbs().maxCoeff());
    upd(r.unitary, (Jv * ea.im - ea.re).cwiseAbs().maxCoeff());
  }
  return r;
}

ComplexSymmetryCheck complex_symmetries(const CurvatureTable& c, const UnitaryFrame& u) {
  const int n = u.complex_dim, q = u.J.extent(0);
  ComplexSymmetryCheck r;
  auto upd = [](double& slot, double v) { slot = std::max(slot, std::fabs(v)); };
  std::vector<ComplexVector> e;
  for (int k = 0; k < n; ++k) e.push_back(eta(u, k));
  auto R = [&](int a, int b, int x, int d) { return four_slot(c.transverse, e[a], conj(e[b]), e[x], conj(e[d])); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int x = 0; x < n; ++x)
        for (int d = 0; d < n; ++d) {
          upd(r.swap_first, std::abs(R(a, b, x, d) - R(x, b, a, d)));
          upd(r.swap_pair, std::abs(R(a, b, x, d) - R(x, d, a, b)));
        }
  Eigen::MatrixXd J(q, q);
  for (int x = 0; x < q; ++x)
    for (int y = 0; y < q; ++y) J(x, y) = u.J(x, y).value();
  auto unit = [&](int a) {
    return ComplexVector{Eigen::VectorXd::Unit(q, a), Eigen::VectorXd::Zero(q)};
  };
  auto jay = [&](int a) { return ComplexVector{J.col(a), Eigen::VectorXd::Zero(q)}; };
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int x = 0; x < q; ++x)
        for (int d = 0; d < q; ++d)
          upd(r.j_invariance, (four_slot(c.transverse, jay(a), jay(b), unit(x), unit(d)) -
                               four_slot(c.transverse, unit(a), unit(b), unit(x), unit(d)))
                                  .real());
  const auto ric = complex_transverse_ricci(c, u);
  r.ricci_hermitian = (ric - ric.adjoint()).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace folia
