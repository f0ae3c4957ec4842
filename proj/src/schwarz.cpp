#include "folia/schwarz.hpp"

#include <algorithm>
#include <cmath>

#include "folia/errors.hpp"

namespace folia {

namespace {

constexpr int kRandomPlanes = 16;
constexpr double kClamp = 1e-10;

double target_curvature_sup(const FoliatedChart& target, const std::vector<Point>& points, std::uint64_t seed,
                            CurvatureMode mode) {
  const int q = target.codim();
  double sup = -std::numeric_limits<double>::infinity();
  std::uint64_t counter = 0;
  auto next = [&] { return 2.0 * uniform01(seed ^ 0x9e3779b97f4a7c15ULL, counter++) - 1.0; };
  for (const auto& x : points) {
    const Geometry g(target, x, 2);
    const CurvatureTable c = curvature(g);
    if (mode == CurvatureMode::Sectional) {
      if (q < 2) throw AssumptionViolated("sectional curvature needs target codimension >= 2");
      for (int a = 0; a < q; ++a)
        for (int b = a + 1; b < q; ++b) {
          std::vector<double> z(q, 0.0), w(q, 0.0);
          z[a] = 1.0;
          w[b] = 1.0;
          sup = std::max(sup, transverse_sectional(c, z, w));
        }
      for (int k = 0; q > 2 && k < kRandomPlanes; ++k) {
        std::vector<double> z(q), w(q);
        for (auto& v : z) v = next();
        for (auto& v : w) v = next();
        try {
          sup = std::max(sup, transverse_sectional(c, z, w));
        } catch (const DegeneratePlane&) {
        }
      }
    } else {
      if (!target.has_complex_structure()) throw MissingJ("bisectional curvature needs a complex structure");
      const UnitaryFrame u = unitary_frame(g);
      const int n = u.complex_dim;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          std::vector<cplx> z(n, 0.0), w(n, 0.0);
          z[a] = 1.0;
          w[b] = 1.0;
          sup = std::max(sup, bisectional(c, u, z, w));
        }
      for (int k = 0; n > 1 && k < kRandomPlanes; ++k) {
        std::vector<cplx> z(n), w(n);
        for (auto& v : z) v = {next(), next()};
        for (auto& v : w) v = {next(), next()};
        try {
          sup = std::max(sup, bisectional(c, u, z, w));
        } catch (const ZeroVector&) {
        }
      }
    }
  }
  return sup;
}

}  // namespace

double ricci_lower_bound(const FoliatedChart& chart, const std::vector<Point>& points) {
  const int q = chart.codim();
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& x : points) {
    const CurvatureTable c = curvature(Geometry(chart, x, 2));
    Eigen::MatrixXd ric(q, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) ric(a, b) = c.ricci(a, b).value();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (ric + ric.transpose()), Eigen::EigenvaluesOnly);
    lowest = std::min(lowest, solver.eigenvalues()(0));
  }
  const double K1 = std::max(0.0, -lowest);
  return K1 < kClamp ? 0.0 : K1;
}

BoundEstimate estimate_bounds(const FoliatedChart& source, const FoliatedChart& target, std::size_t samples,
                              std::uint64_t seed, CurvatureMode mode) {
  BoundEstimate b;
  b.samples = samples;
  b.seed = seed;
  const auto src_points = sample_box(source.domain(), samples, seed);
  const auto tgt_points = sample_box(target.domain(), samples, seed + 1);
  b.K1 = ricci_lower_bound(source, src_points);
  b.K2 = -target_curvature_sup(target, tgt_points, seed, mode);
  if (std::fabs(b.K2) < kClamp) b.K2 = 0.0;
  b.assumption_ok = b.K2 > kClamp;
  b.source_norms = c1_norms(source, src_points);
  return b;
}

void require_assumptions(const BoundEstimate& b) {
  if (!b.assumption_ok)
    throw AssumptionViolated("target curvature is not bounded above by a negative constant (K2 = " +
                             std::to_string(b.K2) + ")");
}

bool SchwarzReport::passed(double tol) const {
  if (bounds.K1 == 0.0) return horizontally_constant;
  return max_ratio <= 1.0 + tol;
}

SchwarzReport schwarz_check(const FoliatedMap& map, const std::vector<Point>& points, SchwarzVariant variant,
                            std::optional<double> beta, const BoundEstimate& bounds) {
  require_assumptions(bounds);
  SchwarzReport r;
  r.variant = variant;
  r.bounds = bounds;
  std::vector<MapJet> jets;
  for (const auto& x : points) jets.push_back(map_jet(map, x, 1));

  double largest_df = 0.0;
  for (const auto& mj : jets) {
    const int p = mj.source->vertical_rank(), pt = mj.target->vertical_rank();
    for (int a = pt; a < mj.target->dim(); ++a)
      for (int b = p; b < mj.source->dim(); ++b) largest_df = std::max(largest_df, std::fabs(mj.df(a, b).value()));
  }
  r.horizontally_constant = largest_df < 1e-10;

  std::vector<double> values;
  if (variant == SchwarzVariant::Riemannian) {
    double auto_beta = 0.0;
    for (const auto& mj : jets) {
      const DilatationSpectrum s = dilatation(mj);
      if (s.unbounded()) {
        std::string where;
        for (double x : mj.point) where += (where.empty() ? "" : ", ") + std::to_string(x);
        throw UnboundedDilatation("no finite dilatation order at (" + where + ")");
      }
      auto_beta = std::max(auto_beta, *s.beta_min);
      values.push_back(s.eigenvalues.empty() ? 0.0 : s.eigenvalues[0]);
    }
    r.beta = beta.value_or(auto_beta);
  } else {
    if (!map.source().has_complex_structure() || !map.target().has_complex_structure())
      throw MissingJ("Kahler variant needs complex structures on both charts");
    for (const auto& mj : jets) values.push_back(energy_density(mj).value());
    r.beta = 1.0;
  }

  const double bound = (variant == SchwarzVariant::Riemannian ? r.beta * r.beta : 1.0) * bounds.K1 / bounds.K2;
  for (std::size_t k = 0; k < jets.size(); ++k) {
    SchwarzSample s;
    s.point = jets[k].point;
    s.value = values[k];
    s.bound = bound;
    if (bound > 0.0)
      s.ratio = s.value / bound;
    else
      s.ratio = s.value <= 1e-10 ? 0.0 : std::numeric_limits<double>::infinity();
    r.max_ratio = std::max(r.max_ratio, s.ratio);
    r.samples.push_back(std::move(s));
  }
  return r;
}

bool ComparisonReport::passed() const {
  return std::all_of(samples.begin(), samples.end(), [](const ComparisonSample& s) { return s.holds; });
}

ComparisonReport comparison_check(const FoliatedChart& chart, const std::vector<Point>& points, double C_candidate) {
  if (!chart.has_distance()) throw MissingDistance("chart has no distance expression");
  ComparisonReport rep;
  rep.C_candidate = C_candidate;
  rep.codim = chart.codim();
  rep.K1 = ricci_lower_bound(chart, points);
  const C1Norms norms = c1_norms(chart, points);
  rep.k1 = norms.A_c1();
  rep.k2 = norms.h_c1();
  const double S = rep.K1 + rep.k1 + rep.k2 + rep.k1 * rep.k2 + rep.k1 * rep.k1 + rep.k2 * rep.k2;
  const double q = rep.codim;
  double c_min = 0.0;
  for (const auto& x : points) {
    const Geometry g(chart, x, 2);
    const Jet r = eval_jet(chart.distance(), chart.coordinate_jets(x, 2));
    if (r.value() < kMinRadius) {
      ++rep.skipped;
      continue;
    }
    ComparisonSample s;
    s.point = x;
    s.r = r.value();
    double grad2 = 0.0;
    for (int A = 0; A < g.dim(); ++A) grad2 += std::pow(g.along(A, r).value(), 2);
    s.gradient_residual = std::fabs(std::sqrt(grad2) - 1.0);
    if (s.gradient_residual > kEikonalTolerance)
      throw EikonalViolation("|grad r| = " + std::to_string(std::sqrt(grad2)) + " at r = " + std::to_string(s.r));
    s.laplacian = g.sub_laplacian(r).value();
    s.bound = q * (1.0 / s.r + std::sqrt(C_candidate * S));
    s.holds = s.laplacian <= s.bound;
    const double excess = s.laplacian / q - 1.0 / s.r;
    if (excess > 0.0) c_min = S > 0.0 ? std::max(c_min, excess * excess / S) : std::numeric_limits<double>::infinity();
    rep.samples.push_back(std::move(s));
  }
  if (std::isfinite(c_min)) rep.C_min = c_min;
  return rep;
}

}  // namespace folia
