#include "folia/maps.hpp"

#include <algorithm>
#include <cmath>

#include "folia/errors.hpp"

namespace folia {

namespace {

constexpr std::uint64_t kMapValidationSeed = 0x5eed0f01a7e6ULL;
constexpr std::size_t kMapValidationSamples = 64;

void check_image(const FoliatedMap& map, const Point& point, const Point& image) {
  if (!map.target().domain().contains(image, 1e-9)) {
    std::string where;
    for (double x : point) where += (where.empty() ? "" : ", ") + std::to_string(x);
    throw ImageOutOfDomain("image of (" + where + ") leaves the target domain");
  }
}

JetTensor compose_table(const JetTensor& t, std::span<const Jet> inner) {
  JetTensor out(t.shape(), Jet(inner[0].dim(), 0));
  for (std::size_t k = 0; k < t.size(); ++k) out.flat(k) = compose(t.flat(k), inner);
  return out;
}

}  // namespace

Point FoliatedMap::image(const Point& point) const {
  Point y;
  for (const auto& c : components_) y.push_back(eval_real(c, point));
  return y;
}

FoliatedMap load_map(std::shared_ptr<const FoliatedChart> source, std::shared_ptr<const FoliatedChart> target,
                     const std::vector<std::string>& components) {
  if (static_cast<int>(components.size()) != target->dim())
    throw SchemaError("map needs " + std::to_string(target->dim()) + " components, got " +
                      std::to_string(components.size()));
  FoliatedMap map;
  map.source_ = std::move(source);
  map.target_ = std::move(target);
  map.text_ = components;
  for (const auto& c : components) map.components_.push_back(bind_variables(parse(c), map.source_->coords()));
  for (const auto& p : sample_box(map.source_->domain(), kMapValidationSamples, kMapValidationSeed))
    check_image(map, p, map.image(p));
  return map;
}

MapJet map_jet(const FoliatedMap& map, const Point& point, int order) {
  if (order < 1) throw std::invalid_argument("map jets need order >= 1");
  const int K = order;
  const int m = map.source().dim(), n = map.target().dim();
  MapJet mj;
  mj.point = point;
  mj.order = K;
  mj.source_chart = map.source_ptr();
  mj.target_chart = map.target_ptr();
  mj.source = std::make_shared<const Geometry>(*mj.source_chart, point, K);

  const auto xs = map.source().coordinate_jets(point, K);
  mj.components = zeros({n}, m, K);
  std::vector<Jet> F;
  for (int mu = 0; mu < n; ++mu) {
    F.push_back(eval_jet(map.component(mu), xs));
    mj.components(mu) = F.back();
    mj.image.push_back(F.back().value());
  }
  check_image(map, point, mj.image);
  mj.target = std::make_shared<const Geometry>(*mj.target_chart, mj.image, K);

  const Geometry& src = *mj.source;
  const JetTensor coframe = compose_table(mj.target->frame().coframe, F);
  mj.target_bott = compose_table(mj.target->connection().bott, F);

  std::vector<std::vector<Jet>> dF(n);
  for (int mu = 0; mu < n; ++mu)
    for (int B = 0; B < m; ++B) dF[mu].push_back(src.along(B, F[mu]));
  mj.df = zeros({n, m}, m, K - 1);
  for (int T = 0; T < n; ++T)
    for (int B = 0; B < m; ++B)
      for (int mu = 0; mu < n; ++mu) mj.df(T, B) += coframe(T, mu).truncated(K - 1) * dF[mu][B];

  if (K < 2) return mj;
  const JetTensor& bott = src.connection().bott;
  const JetTensor f1 = truncated(mj.df, K - 2);
  const JetTensor tb1 = truncated(mj.target_bott, K - 2);
  const JetTensor sb1 = truncated(bott, K - 2);
  mj.ddf = zeros({n, m, m}, m, K - 2);
  for (int T = 0; T < n; ++T)
    for (int B = 0; B < m; ++B)
      for (int C = 0; C < m; ++C) {
        Jet s = src.along(C, mj.df(T, B));
        for (int D = 0; D < m; ++D) s -= f1(T, D) * sb1(C, B, D);
        for (int D = 0; D < n; ++D)
          for (int E = 0; E < n; ++E) s += f1(D, B) * tb1(E, D, T) * f1(E, C);
        mj.ddf(T, B, C) = s;
      }

  if (K < 3) return mj;
  const JetTensor f2 = truncated(mj.df, K - 3);
  const JetTensor d2 = truncated(mj.ddf, K - 3);
  const JetTensor tb2 = truncated(mj.target_bott, K - 3);
  const JetTensor sb2 = truncated(bott, K - 3);
  mj.dddf = zeros({n, m, m, m}, m, K - 3);
  for (int T = 0; T < n; ++T)
    for (int B = 0; B < m; ++B)
      for (int C = 0; C < m; ++C)
        for (int D = 0; D < m; ++D) {
          Jet s = src.along(D, mj.ddf(T, B, C));
          for (int E = 0; E < m; ++E) s -= d2(T, E, C) * sb2(D, B, E) + d2(T, B, E) * sb2(D, C, E);
          for (int X = 0; X < n; ++X)
            for (int E = 0; E < n; ++E) s += d2(X, B, C) * tb2(E, X, T) * f2(E, D);
          mj.dddf(T, B, C, D) = s;
        }
  return mj;
}

double check_foliated(const FoliatedMap& map, const std::vector<Point>& points) {
  const int p = map.source().vertical_rank(), pt = map.target().vertical_rank(), n = map.target().dim();
  double worst = 0.0;
  for (const auto& x : points) {
    const MapJet mj = map_jet(map, x, 1);
    for (int a = pt; a < n; ++a)
      for (int i = 0; i < p; ++i) worst = std::max(worst, std::fabs(mj.df(a, i).value()));
  }
  return worst;
}

SymmetryResidual second_fundamental_symmetry(const FoliatedMap& map, const std::vector<Point>& points) {
  const int p = map.source().vertical_rank(), m = map.source().dim();
  const int pt = map.target().vertical_rank(), n = map.target().dim();
  SymmetryResidual r;
  for (const auto& x : points) {
    const MapJet mj = map_jet(map, x, 2);
    for (int c = pt; c < n; ++c)
      for (int a = p; a < m; ++a) {
        for (int b = p; b < m; ++b)
          r.symmetric = std::max(r.symmetric, std::fabs(mj.ddf(c, a, b).value() - mj.ddf(c, b, a).value()));
        for (int i = 0; i < p; ++i) r.mixed = std::max(r.mixed, std::fabs(mj.ddf(c, a, i).value()));
      }
  }
  return r;
}

Eigen::VectorXd tension(const MapJet& mj, TensionConvention convention) {
  if (mj.order < 2) throw std::invalid_argument("tension needs map jets of order >= 2");
  const int p = mj.source->vertical_rank(), m = mj.source->dim();
  const int pt = mj.target->vertical_rank(), n = mj.target->dim();
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(n - pt);
  for (int a = pt; a < n; ++a)
    for (int c = p; c < m; ++c) tau(a - pt) += mj.ddf(a, c, c).value();
  if (convention == TensionConvention::BarlettaDragomir) {
    const ONeillTensors o = oneill_tensors(*mj.source);
    for (int a = pt; a < n; ++a)
      for (int b = p; b < m; ++b) tau(a - pt) -= mj.df(a, b).value() * o.kappa(b).value();
  }
  return tau;
}

Eigen::VectorXd tension(const FoliatedMap& map, const Point& point, TensionConvention convention) {
  return tension(map_jet(map, point, 2), convention);
}

Jet energy_density(const MapJet& mj) {
  const int p = mj.source->vertical_rank(), m = mj.source->dim();
  const int pt = mj.target->vertical_rank(), n = mj.target->dim();
  Jet e(m, mj.order - 1);
  for (int a = pt; a < n; ++a)
    for (int b = p; b < m; ++b) e += mj.df(a, b) * mj.df(a, b);
  return e * 0.5;
}

double energy_laplacian(const MapJet& mj) {
  if (mj.order < 3) throw std::invalid_argument("sub-Laplacian of the energy density needs order >= 3");
  return mj.source->sub_laplacian(energy_density(mj)).value();
}

DilatationSpectrum dilatation(const MapJet& mj) {
  const int p = mj.source->vertical_rank(), q = mj.source->codim();
  const int pt = mj.target->vertical_rank(), qt = mj.target->codim();
  Eigen::MatrixXd f(qt, q);
  for (int a = 0; a < qt; ++a)
    for (int b = 0; b < q; ++b) f(a, b) = mj.df(pt + a, p + b).value();
  const Eigen::MatrixXd pull = f.transpose() * f;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(pull, Eigen::EigenvaluesOnly);
  DilatationSpectrum s;
  s.point = mj.point;
  for (int k = q - 1; k >= 0; --k) s.eigenvalues.push_back(std::max(0.0, solver.eigenvalues()(k)));
  const double top = s.eigenvalues.empty() ? 0.0 : s.eigenvalues[0];
  double tail = 0.0;
  for (std::size_t k = 1; k < s.eigenvalues.size(); ++k) tail += s.eigenvalues[k];
  if (top <= 1e-12)
    s.beta_min = 0.0;
  else if (tail > 1e-12)
    s.beta_min = std::sqrt(top / tail);
  return s;
}

DilatationSpectrum dilatation(const FoliatedMap& map, const Point& point) {
  return dilatation(map_jet(map, point, 1));
}

double check_holomorphic(const FoliatedMap& map, const std::vector<Point>& points) {
  if (!map.source().has_complex_structure()) throw MissingJ("source chart has no complex structure");
  if (!map.target().has_complex_structure()) throw MissingJ("target chart has no complex structure");
  const int p = map.source().vertical_rank(), q = map.source().codim();
  const int pt = map.target().vertical_rank(), qt = map.target().codim();
  double worst = 0.0;
  for (const auto& x : points) {
    const MapJet mj = map_jet(map, x, 1);
    const JetTensor J = complex_structure_jets(map.source(), map.source().coordinate_jets(x, 0));
    const JetTensor Jt = complex_structure_jets(map.target(), map.target().coordinate_jets(mj.image, 0));
    for (int b = 0; b < q; ++b)
      for (int a = 0; a < qt; ++a) {
        double s = 0.0;
        for (int c = 0; c < q; ++c) s += mj.df(pt + a, p + c).value() * J(c, b).value();
        for (int c = 0; c < qt; ++c) s -= Jt(a, c).value() * mj.df(pt + c, p + b).value();
        worst = std::max(worst, std::fabs(s));
      }
  }
  return worst;
}

namespace {

void require_kahler(const Geometry& g, const char* side) {
  if (!g.chart().has_complex_structure()) throw MissingJ(std::string(side) + " chart has no complex structure");
  if (validate_kahler(g).max() > 1e-8) throw NotKahler(std::string(side) + " chart is not Kahler");
}

// Complex horizontal target vector sum_b f^._b v^b for complex source components v.
ComplexVector push(const JetTensor& df, int pt, int qt, int p, const ComplexVector& v) {
  ComplexVector out{Eigen::VectorXd::Zero(qt), Eigen::VectorXd::Zero(qt)};
  for (int a = 0; a < qt; ++a)
    for (int b = 0; b < v.re.size(); ++b) {
      out.re(a) += df(pt + a, p + b).value() * v.re(b);
      out.im(a) += df(pt + a, p + b).value() * v.im(b);
    }
  return out;
}

cplx product(const ComplexVector& v, int b) { return {v.re(b), v.im(b)}; }

}  // namespace

BochnerResult bochner_residual(const MapJet& mj, BochnerVariant variant) {
  if (mj.order < 3) throw std::invalid_argument("Bochner formula needs map jets of order >= 3");
  const Geometry& src = *mj.source;
  const Geometry& tgt = *mj.target;
  const int p = src.vertical_rank(), m = src.dim(), q = src.codim();
  const int pt = tgt.vertical_rank(), n = tgt.dim(), qt = tgt.codim();
  if (variant == BochnerVariant::Kahler) {
    require_kahler(src, "source");
    require_kahler(tgt, "target");
  }
  const CurvatureTable sc = curvature(src);
  const CurvatureTable tc = curvature(tgt);
  const RealTensor T = values(tc.transverse);
  auto f = [&](int a, int b) { return mj.df(pt + a, p + b).value(); };

  BochnerResult r;
  r.variant = variant;
  r.tension_norm = tension(mj).norm();
  r.harmonic = r.tension_norm < kHarmonicTolerance;
  r.laplacian = energy_laplacian(mj);

  double tension_term = 0.0;
  for (int a = pt; a < n; ++a)
    for (int b = p; b < m; ++b)
      for (int c = p; c < m; ++c) tension_term += mj.df(a, b).value() * mj.dddf(a, c, c, b).value();

  // <R~(f_b, f_c) f_c, f_b> from the endomorphism table, and the four-slot index contraction
  const RealTensor Rt = values(tc.bott);
  double inner = 0.0, index_form = 0.0;
  for (int b = 0; b < q; ++b)
    for (int c = 0; c < q; ++c)
      for (int x = 0; x < qt; ++x)
        for (int y = 0; y < qt; ++y)
          for (int z = 0; z < qt; ++z)
            for (int w = 0; w < qt; ++w) {
              inner += f(x, b) * f(y, c) * f(z, c) * f(w, b) * Rt(pt + w, pt + z, pt + x, pt + y);
              index_form += f(y, b) * f(x, c) * f(z, b) * f(w, c) * T(x, y, z, w);
            }

  if (variant == BochnerVariant::Riemannian) {
    r.lhs = r.laplacian;
    for (int a = pt; a < n; ++a)
      for (int b = p; b < m; ++b)
        for (int c = p; c < m; ++c) r.hessian_term += std::pow(mj.ddf(a, b, c).value(), 2);
    for (int a = 0; a < qt; ++a)
      for (int b = 0; b < q; ++b)
        for (int d = 0; d < q; ++d) r.ricci_term += f(a, b) * f(a, d) * sc.ricci(b, d).value();
    r.curvature_term = inner;
    r.index_form_gap = index_form - inner;
    r.tension_term = tension_term;
    r.rhs = r.hessian_term + r.ricci_term - r.curvature_term;
    if (!r.harmonic) r.rhs += r.tension_term;
    return r;
  }

  const UnitaryFrame us = unitary_frame(src), ut = unitary_frame(tgt);
  const int ns = us.complex_dim, nt = ut.complex_dim;
  std::vector<ComplexVector> es, et, pushed;
  for (int k = 0; k < ns; ++k) es.push_back(eta(us, k));
  for (int k = 0; k < nt; ++k) et.push_back(eta(ut, k));
  for (int k = 0; k < ns; ++k) pushed.push_back(push(mj.df, pt, qt, p, es[k]));

  // a(x, b) = g~(df eta_b, conj eta~_x)
  Eigen::MatrixXcd a(nt, ns);
  for (int x = 0; x < nt; ++x)
    for (int b = 0; b < ns; ++b) a(x, b) = bilinear(pushed[b], conj(et[x]));

  r.lhs = 0.5 * r.laplacian;
  for (int b = 0; b < ns; ++b)
    for (int c = 0; c < ns; ++c) {
      ComplexVector hess{Eigen::VectorXd::Zero(qt), Eigen::VectorXd::Zero(qt)};
      for (int x = 0; x < qt; ++x)
        for (int y = 0; y < q; ++y)
          for (int z = 0; z < q; ++z) {
            const cplx w = mj.ddf(pt + x, p + y, p + z).value() * product(es[b], y) * product(es[c], z);
            hess.re(x) += w.real();
            hess.im(x) += w.imag();
          }
      for (int x = 0; x < nt; ++x) r.hessian_term += std::norm(bilinear(hess, conj(et[x])));
    }
  for (int b = 0; b < ns; ++b)
    for (int c = 0; c < ns; ++c) {
      cplx ric = 0.0;
      for (int y = 0; y < q; ++y)
        for (int z = 0; z < q; ++z)
          ric += sc.ricci(y, z).value() * product(es[b], y) * std::conj(product(es[c], z));
      for (int x = 0; x < nt; ++x) r.ricci_term += (std::conj(a(x, b)) * a(x, c) * ric).real();
    }
  cplx literal = 0.0;
  double pulled = 0.0;
  for (int b = 0; b < ns; ++b)
    for (int c = 0; c < ns; ++c) {
      pulled += four_slot(tc.transverse, pushed[b], conj(pushed[b]), pushed[c], conj(pushed[c])).real();
      for (int w = 0; w < nt; ++w)
        for (int x = 0; x < nt; ++x)
          for (int y = 0; y < nt; ++y)
            for (int z = 0; z < nt; ++z)
              literal += a(w, b) * std::conj(a(x, b)) * a(y, c) * std::conj(a(z, c)) *
                         four_slot(tc.transverse, et[w], conj(et[x]), et[y], conj(et[z]));
    }
  r.curvature_term = literal.real();
  r.index_form_gap = literal.real() - pulled;
  r.tension_term = 0.5 * tension_term;
  r.rhs = r.hessian_term + r.ricci_term - r.curvature_term;
  if (!r.harmonic) r.rhs += r.tension_term;
  return r;
}

BochnerResult bochner_residual(const FoliatedMap& map, const Point& point, BochnerVariant variant, int order) {
  return bochner_residual(map_jet(map, point, std::max(order, 3)), variant);
}

double commutation_residual(const MapJet& mj) {
  if (mj.order < 3) throw std::invalid_argument("commutation check needs map jets of order >= 3");
  const Geometry& src = *mj.source;
  const int p = src.vertical_rank(), m = src.dim();
  const int pt = mj.target->vertical_rank(), n = mj.target->dim();
  const RealTensor R = values(curvature(src).bott);
  const RealTensor Rt = values(curvature(*mj.target).bott);
  auto f = [&](int T, int B) { return mj.df(T, B).value(); };
  double worst = 0.0;
  for (int a = pt; a < n; ++a)
    for (int b = p; b < m; ++b)
      for (int c = p; c < m; ++c)
        for (int d = p; d < m; ++d) {
          const double lhs = mj.dddf(a, b, c, d).value() - mj.dddf(a, b, d, c).value();
          double rhs = 0.0;
          for (int s = 0; s < m; ++s) rhs += f(a, s) * R(s, b, c, d);
          for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
              for (int z = 0; z < n; ++z) rhs -= Rt(a, x, y, z) * f(x, b) * f(y, c) * f(z, d);
          worst = std::max(worst, std::fabs(lhs - rhs));
        }
  return worst;
}

double chain_rule_residual(const FoliatedMap& inner, const FoliatedMap& outer, const FoliatedMap& composite,
                           const Point& point) {
  const MapJet fi = map_jet(inner, point, 1);
  const MapJet fo = map_jet(outer, fi.image, 1);
  const MapJet fc = map_jet(composite, point, 1);
  const int m = inner.source().dim(), k = inner.target().dim(), n = outer.target().dim();
  double worst = 0.0;
  for (int T = 0; T < n; ++T)
    for (int B = 0; B < m; ++B) {
      double s = 0.0;
      for (int C = 0; C < k; ++C) s += fo.df(T, C).value() * fi.df(C, B).value();
      worst = std::max(worst, std::fabs(fc.df(T, B).value() - s));
    }
  return worst;
}

}  // namespace folia
