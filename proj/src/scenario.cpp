#include "folia/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "folia/errors.hpp"
#include "folia/kahler.hpp"
#include "folia/schwarz.hpp"

namespace folia {

using nlohmann::json;

namespace {

enum class Object { Chart, Map };

struct Loaded {
  std::map<std::string, std::shared_ptr<const FoliatedChart>> charts;
  std::map<std::string, FoliatedMap> maps;
};

struct Context {
  const Loaded& loaded;
  const CheckRequest& request;
  const FoliatedChart* chart = nullptr;
  const FoliatedMap* map = nullptr;
  std::vector<Point> points;
  int order = 0;
  double tolerance = 0.0;
  const json& params() const { return request.params; }
};

struct Outcome {
  double residual = 0.0;
  json details = json::object();
  std::optional<bool> passed;  // overrides residual <= tolerance
};

struct Kind {
  std::string name;
  Object object;
  int min_order;
  double tolerance;
  std::string anchor;
  std::function<Outcome(const Context&)> run;
};

double worst(double a, double b) { return std::isnan(b) ? std::numeric_limits<double>::infinity() : std::max(a, b); }

std::vector<double> unit(int n, int k) {
  std::vector<double> v(n, 0.0);
  v[k] = 1.0;
  return v;
}

double param(const Context& c, const char* key, double fallback) {
  return c.params().contains(key) ? c.params()[key].get<double>() : fallback;
}

std::optional<double> optional_param(const Context& c, const char* key) {
  if (!c.params().contains(key) || c.params()[key].is_null()) return std::nullopt;
  return c.params()[key].get<double>();
}

std::string string_param(const Context& c, const char* key, const std::string& fallback) {
  return c.params().contains(key) ? c.params()[key].get<std::string>() : fallback;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Outcome run_torsion(const Context& c) {
  Outcome o;
  const auto expected = optional_param(c, "expected_magnitude");
  double route = 0.0, anti = 0.0, mag_lo = std::numeric_limits<double>::infinity(), mag_hi = 0.0, mag_err = 0.0;
  for (const auto& x : c.points) {
    const TorsionCheck t = torsion_check(Geometry(*c.chart, x, c.order));
    route = worst(route, t.route_residual);
    anti = worst(anti, t.antisymmetry_residual);
    mag_lo = std::min(mag_lo, t.max_magnitude);
    mag_hi = std::max(mag_hi, t.max_magnitude);
    if (expected) mag_err = worst(mag_err, std::fabs(t.max_magnitude - *expected));
  }
  o.residual = std::max({route, anti, mag_err});
  o.details = {{"route", route}, {"antisymmetry", anti}, {"magnitude_min", mag_lo}, {"magnitude_max", mag_hi}};
  if (expected) o.details["expected_magnitude"] = *expected;
  return o;
}

Outcome run_oneill(const Context& c) {
  Outcome o;
  const auto expected_full = optional_param(c, "expected_sectional");
  const auto expected_transverse = optional_param(c, "expected_transverse_sectional");
  double identity = 0.0, corollary = 0.0, full_err = 0.0, tr_err = 0.0;
  double full_value = 0.0, tr_value = 0.0;
  for (const auto& x : c.points) {
    const Geometry g(*c.chart, x, c.order);
    const CurvatureTable ct = curvature(g);
    const ONeillCheck r = oneill_check(g, ct, oneill_tensors(g));
    identity = worst(identity, r.identity);
    corollary = worst(corollary, r.corollary);
    if (g.codim() >= 2) {
      const int m = g.dim(), p = g.vertical_rank(), q = g.codim();
      full_value = sectional(ct.riemann, unit(m, p), unit(m, p + 1));
      tr_value = transverse_sectional(ct, unit(q, 0), unit(q, 1));
      if (expected_full) full_err = worst(full_err, std::fabs(full_value - *expected_full));
      if (expected_transverse) tr_err = worst(tr_err, std::fabs(tr_value - *expected_transverse));
    }
  }
  o.residual = std::max({identity, corollary, full_err, tr_err});
  o.details = {{"identity", identity}, {"corollary", corollary}, {"sectional", full_value},
               {"transverse_sectional", tr_value}};
  return o;
}

Outcome run_nakagawa_takagi(const Context& c) {
  Outcome o;
  std::vector<IdentityResidual> total;
  for (const auto& x : c.points) {
    const Geometry g(*c.chart, x, c.order);
    const auto rs = nakagawa_takagi(g, curvature(g), oneill_tensors(g));
    if (total.empty()) total = rs;
    for (std::size_t k = 0; k < rs.size(); ++k) total[k].residual = worst(total[k].residual, rs[k].residual);
  }
  json list = json::array();
  for (const auto& r : total) {
    o.residual = std::max(o.residual, r.residual);
    list.push_back({{"identity", r.name}, {"residual", r.residual}});
  }
  o.details = {{"identities", list}};
  return o;
}

Outcome run_ricci_identity(const Context& c) {
  Outcome o;
  for (const auto& x : c.points) {
    const Geometry g(*c.chart, x, c.order);
    o.residual = worst(o.residual, ricci_identity_residual(curvature(g), oneill_tensors(g)));
  }
  return o;
}

Outcome run_symmetries(const Context& c) {
  Outcome o;
  const int m = c.chart->dim(), p = c.chart->vertical_rank();
  std::vector<int> all(m), horizontal;
  for (int a = 0; a < m; ++a) all[a] = a;
  for (int a = p; a < m; ++a) horizontal.push_back(a);
  double full = 0.0, transverse = 0.0, routes = 0.0;
  for (const auto& x : c.points) {
    const CurvatureTable ct = curvature(Geometry(*c.chart, x, c.order));
    full = worst(full, curvature_symmetries(ct.riemann, all).max());
    transverse = worst(transverse, curvature_symmetries(ct.bott, horizontal).max());
    for (std::size_t k = 0; k < ct.riemann.size(); ++k)
      routes = worst(routes, std::fabs(ct.riemann.flat(k).value() - ct.riemann_frame.flat(k).value()));
  }
  o.residual = std::max({full, transverse, routes});
  o.details = {{"riemann", full}, {"transverse", transverse}, {"coordinate_vs_frame", routes}};
  return o;
}

Outcome run_block(const Context& c) {
  Outcome o;
  for (const auto& x : c.points)
    o.residual = worst(o.residual, block_vanishing_residual(curvature(Geometry(*c.chart, x, c.order)),
                                                            c.chart->vertical_rank()));
  return o;
}

Outcome run_kahler(const Context& c) {
  Outcome o;
  double structure = 0.0, symmetry = 0.0;
  for (const auto& x : c.points) {
    const Geometry g(*c.chart, x, c.order);
    structure = worst(structure, validate_kahler(g).max());
    symmetry = worst(symmetry, complex_symmetries(curvature(g), unitary_frame(g)).max());
  }
  o.residual = std::max(structure, symmetry);
  o.details = {{"structure", structure}, {"curvature_symmetries", symmetry}};
  return o;
}

Outcome run_sectional(const Context& c) {
  Outcome o;
  const double expected = param(c, "expected", 0.0);
  const int q = c.chart->codim();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& x : c.points) {
    const CurvatureTable ct = curvature(Geometry(*c.chart, x, c.order));
    for (int a = 0; a < q; ++a)
      for (int b = a + 1; b < q; ++b) {
        const double k = transverse_sectional(ct, unit(q, a), unit(q, b));
        lo = std::min(lo, k);
        hi = std::max(hi, k);
        o.residual = worst(o.residual, std::fabs(k - expected));
      }
  }
  o.details = {{"expected", expected}, {"min", finite_or_null(lo)}, {"max", finite_or_null(hi)}};
  return o;
}

Outcome run_c1(const Context& c) {
  Outcome o;
  const C1Norms n = c1_norms(*c.chart, c.points);
  o.details = {{"A", n.A}, {"nabla_A", n.dA}, {"h", n.h}, {"nabla_h", n.dh}, {"A_c1", n.A_c1()}, {"h_c1", n.h_c1()}};
  if (auto e = optional_param(c, "expected_A_c1")) o.residual = worst(o.residual, std::fabs(n.A_c1() - *e));
  if (auto e = optional_param(c, "expected_h_c1")) o.residual = worst(o.residual, std::fabs(n.h_c1() - *e));
  if (!std::isfinite(n.A_c1()) || !std::isfinite(n.h_c1())) o.residual = std::numeric_limits<double>::infinity();
  return o;
}

Outcome run_comparison(const Context& c) {
  Outcome o;
  const double C = param(c, "C", 1.0);
  const ComparisonReport rep = comparison_check(*c.chart, c.points, C);
  std::optional<Expr> reference;
  if (c.params().contains("reference_laplacian"))
    reference = bind_variables(parse(c.params()["reference_laplacian"].get<std::string>()), c.chart->coords());
  double grad = 0.0, ref = 0.0, slack = -std::numeric_limits<double>::infinity();
  for (const auto& s : rep.samples) {
    grad = worst(grad, s.gradient_residual);
    if (reference) ref = worst(ref, std::fabs(s.laplacian - eval_real(*reference, s.point)));
    slack = std::max(slack, s.laplacian - s.bound);
  }
  o.residual = std::max(grad, ref);
  o.passed = o.residual <= c.tolerance && rep.passed() && !rep.samples.empty();
  o.details = {{"C", C},
               {"C_min", rep.C_min ? json(*rep.C_min) : json(nullptr)},
               {"K1", rep.K1},
               {"k1", rep.k1},
               {"k2", rep.k2},
               {"gradient_residual", grad},
               {"bound_holds", rep.passed()},
               {"max_laplacian_minus_bound", finite_or_null(slack)},
               {"evaluated", rep.samples.size()},
               {"skipped", rep.skipped}};
  if (reference) o.details["reference_residual"] = ref;
  return o;
}

Outcome run_foliated(const Context& c) {
  Outcome o;
  o.residual = check_foliated(*c.map, c.points);
  return o;
}

Outcome run_symmetry(const Context& c) {
  Outcome o;
  const SymmetryResidual r = second_fundamental_symmetry(*c.map, c.points);
  o.residual = r.max();
  o.details = {{"symmetric", r.symmetric}, {"mixed", r.mixed}};
  return o;
}

TensionConvention convention(const Context& c) {
  const std::string s = string_param(c, "convention", "bott");
  if (s == "bott") return TensionConvention::Bott;
  if (s == "barletta-dragomir") return TensionConvention::BarlettaDragomir;
  throw SchemaError("unknown tension convention '" + s + "'");
}

Outcome run_tension(const Context& c) {
  Outcome o;
  const TensionConvention conv = convention(c);
  for (const auto& x : c.points) o.residual = worst(o.residual, tension(map_jet(*c.map, x, c.order), conv).norm());
  o.details = {{"convention", string_param(c, "convention", "bott")}};
  return o;
}

Outcome run_tension_conventions(const Context& c) {
  Outcome o;
  double diff = 0.0;
  for (const auto& x : c.points) {
    const MapJet mj = map_jet(*c.map, x, c.order);
    const ONeillTensors on = oneill_tensors(*mj.source);
    const int p = mj.source->vertical_rank(), m = mj.source->dim();
    const int pt = mj.target->vertical_rank(), n = mj.target->dim();
    Eigen::VectorXd dk = Eigen::VectorXd::Zero(n - pt);
    for (int a = pt; a < n; ++a)
      for (int b = p; b < m; ++b) dk(a - pt) += mj.df(a, b).value() * on.kappa(b).value();
    const double d = (tension(mj, TensionConvention::Bott) - tension(mj, TensionConvention::BarlettaDragomir)).norm();
    diff = std::max(diff, d);
    o.residual = worst(o.residual, std::fabs(d - dk.norm()));
  }
  o.details = {{"max_difference", diff}};
  return o;
}

Outcome run_holomorphic(const Context& c) {
  Outcome o;
  o.residual = check_holomorphic(*c.map, c.points);
  return o;
}

Outcome run_bochner(const Context& c) {
  Outcome o;
  const std::string variant = string_param(c, "variant", "riemannian");
  if (variant != "riemannian" && variant != "kahler" && variant != "both")
    throw SchemaError("unknown Bochner variant '" + variant + "'");
  double riem = 0.0, kahl = 0.0, lap_gap = 0.0, gap = 0.0, dropped = 0.0;
  int general = 0;
  for (const auto& x : c.points) {
    const MapJet mj = map_jet(*c.map, x, c.order);
    std::optional<BochnerResult> r, k;
    if (variant != "kahler") r = bochner_residual(mj, BochnerVariant::Riemannian);
    if (variant != "riemannian") k = bochner_residual(mj, BochnerVariant::Kahler);
    for (const auto* b : {r ? &*r : nullptr, k ? &*k : nullptr}) {
      if (!b) continue;
      gap = worst(gap, std::fabs(b->index_form_gap));
      if (b->harmonic) dropped = worst(dropped, std::fabs(b->tension_term));
      general += b->harmonic ? 0 : 1;
    }
    if (r) riem = worst(riem, r->residual());
    if (k) kahl = worst(kahl, k->residual());
    if (r && k) lap_gap = worst(lap_gap, std::fabs(r->laplacian - k->laplacian));
  }
  o.residual = std::max({riem, kahl, lap_gap});
  o.details = {{"variant", variant}, {"index_form_gap", gap}, {"dropped_tension_term", dropped},
               {"general_form_points", general}};
  if (variant != "kahler") o.details["riemannian"] = riem;
  if (variant != "riemannian") o.details["kahler"] = kahl;
  if (variant == "both") o.details["laplacian_mismatch"] = lap_gap;
  return o;
}

Outcome run_commutation(const Context& c) {
  Outcome o;
  for (const auto& x : c.points) o.residual = worst(o.residual, commutation_residual(map_jet(*c.map, x, c.order)));
  return o;
}

Outcome run_dilatation(const Context& c) {
  Outcome o;
  std::vector<double> expected;
  if (c.params().contains("expect_eigenvalues")) expected = c.params()["expect_eigenvalues"].get<std::vector<double>>();
  const auto expected_beta = optional_param(c, "expect_beta_min");
  std::optional<bool> expect_unbounded;
  if (c.params().contains("expect_unbounded")) expect_unbounded = c.params()["expect_unbounded"].get<bool>();
  double top = 0.0, trace = 0.0, beta = 0.0;
  std::size_t unbounded = 0;
  for (const auto& x : c.points) {
    const MapJet mj = map_jet(*c.map, x, c.order);
    const DilatationSpectrum s = dilatation(mj);
    double sum = 0.0;
    for (double l : s.eigenvalues) sum += l;
    trace = worst(trace, std::fabs(sum - 2.0 * energy_density(mj).value()));
    top = std::max(top, s.eigenvalues.empty() ? 0.0 : s.eigenvalues[0]);
    for (std::size_t k = 0; k < expected.size() && k < s.eigenvalues.size(); ++k)
      o.residual = worst(o.residual, std::fabs(s.eigenvalues[k] - expected[k]));
    if (s.unbounded())
      ++unbounded;
    else {
      beta = std::max(beta, *s.beta_min);
      if (expected_beta) o.residual = worst(o.residual, std::fabs(*s.beta_min - *expected_beta));
    }
  }
  o.residual = std::max(o.residual, trace);
  bool ok = o.residual <= c.tolerance;
  if (expect_unbounded) ok = ok && (*expect_unbounded ? unbounded == c.points.size() : unbounded == 0);
  o.passed = ok;
  o.details = {{"max_lambda_1", top}, {"trace_residual", trace}, {"max_beta_min", beta}, {"unbounded_points", unbounded}};
  return o;
}

Outcome run_energy(const Context& c) {
  Outcome o;
  const auto expected = optional_param(c, "expected");
  const auto expected_lap = optional_param(c, "expected_laplacian");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& x : c.points) {
    const MapJet mj = map_jet(*c.map, x, c.order);
    const double e = energy_density(mj).value();
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    if (expected) o.residual = worst(o.residual, std::fabs(e - *expected));
    if (expected_lap) o.residual = worst(o.residual, std::fabs(energy_laplacian(mj) - *expected_lap));
  }
  o.details = {{"min", finite_or_null(lo)}, {"max", hi}};
  return o;
}

Outcome run_schwarz(const Context& c) {
  Outcome o;
  const std::string variant_name = string_param(c, "variant", "riemannian");
  if (variant_name != "riemannian" && variant_name != "kahler")
    throw SchemaError("unknown Schwarz variant '" + variant_name + "'");
  const SchwarzVariant variant = variant_name == "kahler" ? SchwarzVariant::Kahler : SchwarzVariant::Riemannian;
  const std::string mode_name =
      string_param(c, "mode", variant == SchwarzVariant::Kahler ? "bisectional" : "sectional");
  if (mode_name != "sectional" && mode_name != "bisectional") throw SchemaError("unknown curvature mode '" + mode_name + "'");
  std::optional<double> beta;
  if (c.params().contains("beta") && c.params()["beta"].is_number()) beta = c.params()["beta"].get<double>();
  const std::uint64_t seed = c.request.seed.value_or(kDefaultSeed);
  const BoundEstimate b =
      estimate_bounds(c.map->source(), c.map->target(), c.points.size(), seed,
                      mode_name == "bisectional" ? CurvatureMode::Bisectional : CurvatureMode::Sectional);
  const SchwarzReport r = schwarz_check(*c.map, c.points, variant, beta, b);
  const auto expect_ratio = optional_param(c, "expect_ratio");
  bool ok = r.passed(c.tolerance);
  if (expect_ratio) {
    o.residual = std::fabs(r.max_ratio - *expect_ratio);
    ok = ok && o.residual <= c.tolerance;
  } else {
    o.residual = b.K1 == 0.0 ? 0.0 : std::max(0.0, r.max_ratio - 1.0);
  }
  if (c.params().contains("expect_horizontally_constant"))
    ok = ok && r.horizontally_constant == c.params()["expect_horizontally_constant"].get<bool>();
  o.passed = ok;
  o.details = {{"variant", variant_name},
               {"mode", mode_name},
               {"K1", b.K1},
               {"K2", b.K2},
               {"beta", r.beta},
               {"max_ratio", finite_or_null(r.max_ratio)},
               {"horizontally_constant", r.horizontally_constant},
               {"A_c1", b.source_norms.A_c1()},
               {"h_c1", b.source_norms.h_c1()}};
  return o;
}

Outcome run_chain_rule(const Context& c) {
  Outcome o;
  const std::string outer = string_param(c, "outer", ""), composite = string_param(c, "composite", "");
  const FoliatedMap& g = c.loaded.maps.at(outer);
  const FoliatedMap& h = c.loaded.maps.at(composite);
  for (const auto& x : c.points) o.residual = worst(o.residual, chain_rule_residual(*c.map, g, h, x));
  o.details = {{"outer", outer}, {"composite", composite}};
  return o;
}

const std::vector<Kind>& kinds() {
  static const std::vector<Kind> table = {
      {"integrability", Object::Chart, 1, 1e-6, "pi_H [V, W] = 0 for vertical V, W",
       [](const Context& c) { return Outcome{check_integrability(*c.chart, c.points), json::object(), std::nullopt}; }},
      {"riemannian", Object::Chart, 1, 1e-6, "A(X, Y) = -A(Y, X) and (L_V g)(X, Y) = 0 on horizontal X, Y",
       [](const Context& c) {
         const RiemannianCheck r = check_riemannian(*c.chart, c.points);
         return Outcome{r.max(), {{"antisymmetry", r.antisymmetry}, {"lie_derivative", r.lie_derivative}}, std::nullopt};
       }},
      {"connection", Object::Chart, 1, 1e-6, "Bott connection: metric on each block, torsion -pi_V[pi_H X, pi_H Y]",
       [](const Context& c) {
         Outcome o;
         for (const auto& x : c.points)
           o.residual = worst(o.residual, connection_check(Geometry(*c.chart, x, c.order)).max());
         return o;
       }},
      {"torsion", Object::Chart, 1, 1e-6, "T(X, Y) = -pi_V [pi_H X, pi_H Y]", run_torsion},
      {"oneill-identity", Object::Chart, 2, 1e-6,
       "R^M(X,Y,Z,W) = R^T(X,Y,Z,W) + 2<A(X,Y),A(Z,W)> + <A(Y,W),A(X,Z)> - <A(Y,Z),A(X,W)>; "
       "Ric^M(X,Y) = Ric^T(X,Y) + 3<A(X,e_a),A(e_a,Y)>",
       run_oneill},
      {"nakagawa-takagi", Object::Chart, 2, 1e-6,
       "h_{ib;j} = h_{ik}h^b_{kj}, h_{ib;c} = h_{ik}A^k_{bc}, A^i_{aj;b} = -A^i_{ac}A^j_{cb}, "
       "h_{ij;k} - h_{ik;j} = R_{aijk}, mixed Codazzi equations",
       run_nakagawa_takagi},
      {"ricci-identity", Object::Chart, 4, 1e-5, "h_{ij;kl} - h_{ij;lk} = curvature contractions of h",
       run_ricci_identity},
      {"curvature-symmetries", Object::Chart, 2, 1e-6,
       "R_{abcd} = -R_{bacd} = -R_{abdc} = R_{cdab}, R_{abcd} + R_{acdb} + R_{adbc} = 0", run_symmetries},
      {"block-vanishing", Object::Chart, 2, 1e-6, "R^B(X, Y) preserves V and H; R^B(V, .) H = 0", run_block},
      {"kahler", Object::Chart, 2, 1e-6, "g(J., J.) = g, nabla^T J = 0, L_V J = 0", run_kahler},
      {"sectional", Object::Chart, 2, 1e-6, "K^T(e_a, e_b) = R^T(e_a, e_b, e_b, e_a)", run_sectional},
      {"c1-norms", Object::Chart, 2, 1e-6, "|A|_C1 = max(|A|, |nabla A|), |h|_C1 = max(|h|, |nabla h|)", run_c1},
      {"comparison", Object::Chart, 2, 1e-6,
       "Delta_H r <= q (1/r + sqrt(C (K1 + k1 + k2 + k1 k2 + k1^2 + k2^2))), |grad r| = 1", run_comparison},
      {"foliated", Object::Map, 1, 1e-6, "f^a_i = 0 (df(V) in V~)", run_foliated},
      {"second-fundamental-symmetry", Object::Map, 2, 1e-7, "f^c_{a,b} = f^c_{b,a}, f^c_{a,i} = 0", run_symmetry},
      {"tension", Object::Map, 2, 1e-6, "tau^a = f^a_{c,c} (optionally minus f^a_b kappa^b)", run_tension},
      {"tension-conventions", Object::Map, 2, 1e-6, "|tau - (tau - df(kappa))| = |df(kappa)|",
       run_tension_conventions},
      {"holomorphic", Object::Map, 1, 1e-6, "df o J = J~ o df on H", run_holomorphic},
      {"bochner", Object::Map, 3, 1e-5,
       "Delta_H e_H = |f^a_{b,c}|^2 + f^a_b f^a_d Ric^T_{bd} - <R~^T(f_b, f_c) f_c, f_b>; "
       "1/2 Delta_H e_H = |a^a_{bc}|^2 + conj(a^a_b) a^a_c Ric^T_{b conj c} - R~^T(df eta_b, df conj eta_b, df eta_c, df conj eta_c)",
       run_bochner},
      {"commutation", Object::Map, 3, 1e-5,
       "f^a_{b,cd} - f^a_{b,dc} = f^a_s R^s_{bcd} - R~(f_c, f_d) f_b", run_commutation},
      {"dilatation", Object::Map, 1, 1e-9, "lambda_1 <= beta^2 (lambda_2 + ... + lambda_q), trace = 2 e_H",
       run_dilatation},
      {"energy-density", Object::Map, 3, 1e-6, "e_H = 1/2 (f^a_b)^2", run_energy},
      {"schwarz", Object::Map, 1, 1e-6, "f* g~_H <= beta^2 (K1 / K2) g_H; Kahler: e_H <= K1 / K2", run_schwarz},
      {"chain-rule", Object::Map, 1, 1e-8, "d(g o f)^A_B = dg^A_C df^C_B", run_chain_rule},
  };
  return table;
}

const Kind& find_kind(const std::string& name) {
  for (const auto& k : kinds())
    if (k.name == name) return k;
  throw SchemaError("unknown check kind '" + name + "'");
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

std::vector<std::string> check_kinds() {
  std::vector<std::string> out;
  for (const auto& k : kinds()) out.push_back(k.name);
  return out;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario: expected an object");
  Scenario s;
  try {
    if (j.contains("schema_version") && j["schema_version"].get<int>() != kScenarioSchemaVersion)
      throw SchemaError("scenario: unsupported schema_version");
    s.name = j.value("name", std::string("scenario"));
    if (j.contains("charts")) {
      if (!j["charts"].is_object()) throw SchemaError("scenario: charts must be an object");
      for (const auto& [name, spec] : j["charts"].items()) s.charts[name] = chart_spec_from_json(spec);
    }
    if (j.contains("maps")) {
      if (!j["maps"].is_object()) throw SchemaError("scenario: maps must be an object");
      for (const auto& [name, m] : j["maps"].items()) {
        MapSpec ms;
        ms.source = m.at("source").get<std::string>();
        ms.target = m.at("target").get<std::string>();
        ms.components = m.at("components").get<std::vector<std::string>>();
        s.maps[name] = std::move(ms);
      }
    }
    if (!j.contains("checks") || !j["checks"].is_array()) throw SchemaError("scenario: checks must be an array");
    for (const auto& c : j["checks"]) {
      CheckRequest r;
      r.kind = c.at("kind").get<std::string>();
      if (c.contains("chart")) r.object = c["chart"].get<std::string>();
      if (c.contains("map")) r.object = c["map"].get<std::string>();
      r.name = c.value("name", r.kind + ":" + r.object);
      if (c.contains("params")) r.params = c["params"];
      if (!r.params.is_object()) throw SchemaError("check '" + r.name + "': params must be an object");
      r.tolerance = optional_field<double>(c, "tolerance");
      r.samples = optional_field<int>(c, "samples");
      r.seed = optional_field<std::uint64_t>(c, "seed");
      r.order = optional_field<int>(c, "order");
      r.expect_error = optional_field<std::string>(c, "expect_error");
      s.checks.push_back(std::move(r));
    }
    if (j.contains("output")) s.format = j["output"].value("format", std::string("json"));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario: ") + e.what());
  }
  if (s.format != "json" && s.format != "markdown") throw SchemaError("scenario: unknown output format '" + s.format + "'");
  return s;
}

json to_json(const Scenario& s) {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = s.name;
  j["charts"] = json::object();
  for (const auto& [name, spec] : s.charts) j["charts"][name] = to_json(spec);
  j["maps"] = json::object();
  for (const auto& [name, m] : s.maps)
    j["maps"][name] = json{{"source", m.source}, {"target", m.target}, {"components", m.components}};
  j["checks"] = json::array();
  for (const auto& c : s.checks) {
    json r;
    r["name"] = c.name;
    r["kind"] = c.kind;
    const bool on_map = s.maps.count(c.object) && !s.charts.count(c.object);
    r[on_map ? "map" : "chart"] = c.object;
    if (!c.params.empty()) r["params"] = c.params;
    if (c.tolerance) r["tolerance"] = *c.tolerance;
    if (c.samples) r["samples"] = *c.samples;
    if (c.seed) r["seed"] = *c.seed;
    if (c.order) r["order"] = *c.order;
    if (c.expect_error) r["expect_error"] = *c.expect_error;
    j["checks"].push_back(std::move(r));
  }
  j["output"] = {{"format", s.format}};
  return j;
}

bool Report::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

Report run_scenario(const Scenario& s, const RunOptions& options) {
  Loaded loaded;
  for (const auto& [name, spec] : s.charts) {
    try {
      loaded.charts[name] = std::make_shared<const FoliatedChart>(load_chart(spec));
    } catch (const Error& e) {
      throw SchemaError("chart '" + name + "': " + e.kind() + ": " + e.what());
    }
  }
  for (const auto& [name, m] : s.maps) {
    if (!loaded.charts.count(m.source)) throw SchemaError("map '" + name + "': unknown chart '" + m.source + "'");
    if (!loaded.charts.count(m.target)) throw SchemaError("map '" + name + "': unknown chart '" + m.target + "'");
    try {
      loaded.maps.emplace(name, load_map(loaded.charts[m.source], loaded.charts[m.target], m.components));
    } catch (const Error& e) {
      throw SchemaError("map '" + name + "': " + e.kind() + ": " + e.what());
    }
  }
  for (const auto& c : s.checks) {
    const Kind& k = find_kind(c.kind);
    if (k.object == Object::Chart && !loaded.charts.count(c.object))
      throw SchemaError("check '" + c.name + "': unknown chart '" + c.object + "'");
    if (k.object == Object::Map && !loaded.maps.count(c.object))
      throw SchemaError("check '" + c.name + "': unknown map '" + c.object + "'");
    if (c.kind == "chain-rule")
      for (const char* key : {"outer", "composite"})
        if (!c.params.contains(key) || !loaded.maps.count(c.params[key].get<std::string>()))
          throw SchemaError("check '" + c.name + "': chain-rule needs an existing '" + key + "' map");
  }

  Report rep;
  rep.scenario = s.name;
  rep.options = options;
  for (const auto& req : s.checks) {
    const Kind& k = find_kind(req.kind);
    CheckResult r;
    r.name = req.name;
    r.kind = req.kind;
    r.object = req.object;
    r.anchor = k.anchor;
    r.samples = options.samples.value_or(req.samples.value_or(kDefaultSamples));
    r.seed = options.seed.value_or(req.seed.value_or(kDefaultSeed));
    r.order = std::max(k.min_order, options.order.value_or(req.order.value_or(kDefaultOrder)));
    r.tolerance = options.tolerance.value_or(req.tolerance.value_or(k.tolerance));
    if (r.samples < 1) throw SchemaError("check '" + r.name + "': samples must be positive");
    if (r.order > kMaxJetOrder) throw SchemaError("check '" + r.name + "': order exceeds " + std::to_string(kMaxJetOrder));

    CheckRequest effective = req;
    effective.seed = r.seed;
    Context ctx{loaded, effective, nullptr, nullptr, {}, 0, 0.0};
    if (k.object == Object::Chart)
      ctx.chart = loaded.charts.at(req.object).get();
    else
      ctx.map = &loaded.maps.at(req.object);
    const DomainBox& box = ctx.chart ? ctx.chart->domain() : ctx.map->source().domain();
    ctx.points = sample_box(box, static_cast<std::size_t>(r.samples), r.seed);
    ctx.order = r.order;
    ctx.tolerance = r.tolerance;

    try {
      const Outcome o = k.run(ctx);
      r.residual = o.residual;
      r.details = o.details;
      r.passed = o.passed.value_or(o.residual <= r.tolerance);
      if (req.expect_error) {
        r.passed = false;
        r.details["expected_error"] = *req.expect_error;
      }
    } catch (const SchemaError& e) {
      throw SchemaError("check '" + r.name + "': " + e.what());
    } catch (const Error& e) {
      r.error_kind = e.kind();
      r.error_message = e.what();
      r.residual = std::numeric_limits<double>::infinity();
      r.passed = req.expect_error && *req.expect_error == e.kind();
      if (r.passed) r.residual = 0.0;
      if (req.expect_error) r.details["expected_error"] = *req.expect_error;
    }

    if (options.fd_check) {
      FdReport fd;
      if (ctx.chart) {
        fd = fd_check_chart(*ctx.chart, ctx.points);
      } else {
        fd = fd_check_chart(ctx.map->source(), ctx.points);
        fd.merge(fd_check_chart(ctx.map->target(), interior_points(ctx.map->target().domain(),
                                                                   sample_box(ctx.map->target().domain(), 8, r.seed))));
        fd.merge(fd_check_map(*ctx.map, ctx.points));
      }
      r.passed = r.passed && fd.passed();
      r.fd = std::move(fd);
    }
    rep.checks.push_back(std::move(r));
  }
  return rep;
}

json to_json(const Report& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["scenario"] = r.scenario;
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  j["settings"] = {{"seed", opt(r.options.seed)},
                   {"samples", opt(r.options.samples)},
                   {"tolerance", opt(r.options.tolerance)},
                   {"order", opt(r.options.order)},
                   {"fd_check", r.options.fd_check}};
  j["checks"] = json::array();
  std::size_t passed = 0;
  for (const auto& c : r.checks) {
    json row = {{"name", c.name},
                {"kind", c.kind},
                {"object", c.object},
                {"anchor", c.anchor},
                {"residual", finite_or_null(c.residual)},
                {"tolerance", c.tolerance},
                {"passed", c.passed},
                {"samples", c.samples},
                {"seed", c.seed},
                {"order", c.order},
                {"details", c.details}};
    if (c.error_kind) row["error"] = {{"kind", *c.error_kind}, {"message", *c.error_message}};
    if (c.fd)
      row["fd_check"] = {{"compared", c.fd->compared},
                         {"max_error", finite_or_null(c.fd->max_error)},
                         {"tolerance", kFdTolerance},
                         {"worst", c.fd->worst},
                         {"passed", c.fd->passed()}};
    passed += c.passed;
    j["checks"].push_back(std::move(row));
  }
  j["summary"] = {{"checks", r.checks.size()},
                  {"passed", passed},
                  {"failed", r.checks.size() - passed},
                  {"exit_status", r.exit_status()}};
  return j;
}

std::string render_markdown(const Report& r) {
  std::ostringstream os;
  os << "# Verification report: " << r.scenario << "\n\n";
  os << "| # | check | kind | object | residual | tolerance |" << (r.options.fd_check ? " fd error |" : "")
     << " status |\n";
  os << "|---|---|---|---|---|---|" << (r.options.fd_check ? "---|" : "") << "---|\n";
  std::size_t passed = 0;
  for (std::size_t k = 0; k < r.checks.size(); ++k) {
    const auto& c = r.checks[k];
    os << "| " << k + 1 << " | " << c.name << " | " << c.kind << " | " << c.object << " | "
       << (std::isfinite(c.residual) ? format_double(c.residual) : "-") << " | " << format_double(c.tolerance) << " |";
    if (r.options.fd_check) os << " " << (c.fd ? format_double(c.fd->max_error) : "-") << " |";
    os << " " << (c.passed ? "pass" : "FAIL");
    if (c.error_kind) os << " (" << *c.error_kind << ")";
    os << " |\n";
    passed += c.passed;
  }
  os << "\n" << passed << " of " << r.checks.size() << " checks passed; exit status " << r.exit_status() << ".\n\n";
  os << "## Anchors\n\n";
  for (const auto& c : r.checks) os << "- `" << c.name << "`: " << c.anchor << "\n";
  return os.str();
}

}  // namespace folia
