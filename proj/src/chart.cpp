#include "folia/chart.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "folia/errors.hpp"

namespace folia {

namespace {

constexpr std::uint64_t kValidationSeed = 0x5eed0f01a7e5ULL;
constexpr std::size_t kValidationSamples = 64;

std::string entry_string(const nlohmann::json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw SchemaError(where + ": expected an expression string or number");
}

std::vector<std::vector<std::string>> matrix_strings(const nlohmann::json& j, std::size_t rows,
                                                     std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows) throw SchemaError(where + ": expected " + std::to_string(rows) + " rows");
  std::vector<std::vector<std::string>> out;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw SchemaError(where + ": row " + std::to_string(r) + " needs " + std::to_string(cols) + " entries");
    std::vector<std::string> line;
    for (std::size_t c = 0; c < cols; ++c) line.push_back(entry_string(row[c], where));
    out.push_back(std::move(line));
  }
  return out;
}

Expr parse_field(const std::string& text, const std::vector<std::string>& coords, const std::string& where) {
  try {
    return bind_variables(parse(text), coords);
  } catch (const SyntaxError& e) {
    throw SchemaError(where + ": " + e.what());
  } catch (const UnknownIdentifier& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

std::string point_text(const Point& p) {
  std::string s = "(";
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (a) s += ", ";
    s += std::to_string(p[a]);
  }
  return s + ")";
}

}  // namespace

ChartSpec chart_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("chart: expected an object");
  ChartSpec s;
  try {
    s.dim = j.at("dim").get<int>();
    s.vertical_rank = j.value("vertical_rank", 0);
    s.coords = j.at("coords").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("chart: ") + e.what());
  }
  if (s.dim < 1 || s.dim > kMaxJetDim) throw SchemaError("chart: dim out of range");
  if (s.vertical_rank < 0 || s.vertical_rank >= s.dim) throw SchemaError("chart: vertical_rank must be in [0, dim)");
  if (static_cast<int>(s.coords.size()) != s.dim) throw SchemaError("chart: coords must have dim entries");
  if (std::set<std::string>(s.coords.begin(), s.coords.end()).size() != s.coords.size())
    throw SchemaError("chart: duplicate coordinate names");
  if (!j.contains("metric")) throw SchemaError("chart: missing metric");
  s.metric = matrix_strings(j["metric"], s.dim, s.dim, "metric");
  if (s.vertical_rank > 0) {
    if (!j.contains("vertical")) throw SchemaError("chart: missing vertical");
    s.vertical = matrix_strings(j["vertical"], s.vertical_rank, s.dim, "vertical");
  }
  const int q = s.dim - s.vertical_rank;
  if (j.contains("J") && !j["J"].is_null()) {
    if (q % 2 != 0) throw SchemaError("J: codimension must be even");
    s.complex_structure = matrix_strings(j["J"], q, q, "J");
  }
  if (j.contains("distance") && !j["distance"].is_null()) {
    const auto& d = j["distance"];
    if (!d.is_object() || !d.contains("expr")) throw SchemaError("distance: expected {expr, basepoint}");
    s.distance = entry_string(d["expr"], "distance");
    if (d.contains("basepoint")) {
      try {
        s.basepoint = d["basepoint"].get<std::vector<double>>();
      } catch (const nlohmann::json::exception&) {
        throw SchemaError("distance: basepoint must be numbers");
      }
      if (static_cast<int>(s.basepoint.size()) != s.dim) throw SchemaError("distance: basepoint needs dim entries");
    }
  }
  if (!j.contains("domain") || !j["domain"].is_array() || static_cast<int>(j["domain"].size()) != s.dim)
    throw SchemaError("chart: domain needs one [lo, hi] per coordinate");
  for (const auto& iv : j["domain"]) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw SchemaError("domain: expected [lo, hi]");
    const double lo = iv[0].get<double>(), hi = iv[1].get<double>();
    if (!(lo < hi)) throw SchemaError("domain: lo must be below hi");
    s.domain.bounds.emplace_back(lo, hi);
  }
  return s;
}

nlohmann::json to_json(const ChartSpec& s) {
  nlohmann::json j;
  j["dim"] = s.dim;
  j["vertical_rank"] = s.vertical_rank;
  j["coords"] = s.coords;
  j["metric"] = s.metric;
  if (s.vertical_rank > 0) j["vertical"] = s.vertical;
  if (s.complex_structure) j["J"] = *s.complex_structure;
  if (s.distance) j["distance"] = {{"expr", *s.distance}, {"basepoint", s.basepoint}};
  nlohmann::json dom = nlohmann::json::array();
  for (auto [lo, hi] : s.domain.bounds) dom.push_back({lo, hi});
  j["domain"] = dom;
  return j;
}

std::vector<Jet> FoliatedChart::coordinate_jets(const Point& point, int order) const {
  std::vector<Jet> xs;
  for (int a = 0; a < dim(); ++a) xs.push_back(jet_variable(a, point, order));
  return xs;
}

FoliatedChart load_chart(const nlohmann::json& j) { return load_chart(chart_spec_from_json(j)); }

FoliatedChart load_chart(const ChartSpec& spec) {
  FoliatedChart c;
  c.spec_ = spec;
  const int m = spec.dim, p = spec.vertical_rank, q = m - p;
  if (static_cast<int>(spec.metric.size()) != m) throw SchemaError("metric: wrong size");
  c.metric_.resize(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      c.metric_[a * m + b] = parse_field(spec.metric.at(a).at(b), spec.coords,
                                         "metric[" + std::to_string(a) + "][" + std::to_string(b) + "]");
  for (int i = 0; i < p; ++i)
    for (int a = 0; a < m; ++a)
      c.vertical_.push_back(parse_field(spec.vertical.at(i).at(a), spec.coords, "vertical"));
  if (spec.complex_structure)
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b)
        c.complex_.push_back(parse_field(spec.complex_structure->at(a).at(b), spec.coords, "J"));
  if (spec.distance) c.distance_ = parse_field(*spec.distance, spec.coords, "distance");

  for (const auto& pt : sample_box(spec.domain, kValidationSamples, kValidationSeed)) {
    Eigen::MatrixXd g(m, m);
    try {
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) g(a, b) = eval_real(c.metric_[a * m + b], pt);
    } catch (const DomainError& e) {
      throw SchemaError("metric not defined at " + point_text(pt) + ": " + e.what());
    }
    if (!g.allFinite()) throw SchemaError("metric not finite at " + point_text(pt));
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + g.cwiseAbs().maxCoeff()))
      throw SchemaError("metric not symmetric at " + point_text(pt));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) throw MetricNotSPD("metric not positive definite at " + point_text(pt));
    try {
      adapted_frame(c, pt, 0);
      if (c.has_complex_structure()) {
        Eigen::MatrixXd J(q, q);
        for (int a = 0; a < q; ++a)
          for (int b = 0; b < q; ++b) J(a, b) = eval_real(c.complex_structure(a, b), pt);
        if ((J * J + Eigen::MatrixXd::Identity(q, q)).cwiseAbs().maxCoeff() > 1e-9)
          throw SchemaError("J does not square to -1 at " + point_text(pt));
      }
      if (c.has_distance()) eval_real(c.distance(), pt);
    } catch (const DomainError& e) {
      throw SchemaError(std::string("chart field not defined at ") + point_text(pt) + ": " + e.what());
    }
  }
  return c;
}

AdaptedFrame adapted_frame(const FoliatedChart& chart, const Point& point, int order) {
  const int m = chart.dim(), p = chart.vertical_rank();
  if (static_cast<int>(point.size()) != m) throw std::invalid_argument("point has wrong dimension");
  auto xs = chart.coordinate_jets(point, order);
  AdaptedFrame f;
  f.point = point;
  f.order = order;
  f.dim = m;
  f.vertical_rank = p;
  f.metric = zeros({m, m}, m, order);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      f.metric(a, b) = eval_jet(chart.metric(a, b), xs);
      f.metric(b, a) = f.metric(a, b);
    }

  auto inner = [&](const std::vector<Jet>& u, const std::vector<Jet>& w) {
    Jet s(m, order);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) s += f.metric(a, b) * u[a] * w[b];
    return s;
  };

  std::vector<std::vector<Jet>> basis;
  auto absorb = [&](std::vector<Jet> v) {
    for (const auto& e : basis) {
      const Jet c = inner(v, e);
      for (int a = 0; a < m; ++a) v[a] -= c * e[a];
    }
    const Jet n2 = inner(v, v);
    if (!(n2.value() > 0.0) || std::sqrt(n2.value()) < kFrameDropTolerance) return false;
    const Jet n = sqrt(n2);
    for (auto& x : v) x = x / n;
    basis.push_back(std::move(v));
    return true;
  };

  for (int i = 0; i < p; ++i) {
    std::vector<Jet> v;
    for (int a = 0; a < m; ++a) v.push_back(eval_jet(chart.vertical(i, a), xs));
    if (!absorb(std::move(v)))
      throw DependentVerticalFrames("vertical fields dependent at " + point_text(point));
  }
  for (int a = 0; a < m && static_cast<int>(basis.size()) < m; ++a) {
    std::vector<Jet> v(m, Jet(m, order));
    v[a] += 1.0;
    absorb(std::move(v));
  }
  if (static_cast<int>(basis.size()) < m) throw DegenerateFrame("frame degenerate at " + point_text(point));

  f.frame = zeros({m, m}, m, order);
  f.coframe = zeros({m, m}, m, order);
  for (int A = 0; A < m; ++A)
    for (int a = 0; a < m; ++a) {
      f.frame(A, a) = basis[A][a];
      for (int b = 0; b < m; ++b) f.coframe(A, a) += f.metric(a, b) * basis[A][b];
    }
  return f;
}

JetTensor complex_structure_jets(const FoliatedChart& chart, const std::vector<Jet>& coords) {
  if (!chart.has_complex_structure()) throw MissingJ("chart has no complex structure");
  const int q = chart.codim();
  JetTensor J = zeros({q, q}, coords[0].dim(), coords[0].order());
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) J(a, b) = eval_jet(chart.complex_structure(a, b), coords);
  return J;
}

double integrability_residual(const FoliatedChart& chart, const Point& point) {
  const int m = chart.dim(), p = chart.vertical_rank();
  if (p < 2) return 0.0;
  auto xs = chart.coordinate_jets(point, 1);
  const AdaptedFrame f = adapted_frame(chart, point, 0);
  std::vector<std::vector<Jet>> V(p);
  for (int i = 0; i < p; ++i)
    for (int a = 0; a < m; ++a) V[i].push_back(eval_jet(chart.vertical(i, a), xs));
  double worst = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      std::vector<double> br(m, 0.0);
      for (int c = 0; c < m; ++c)
        for (int a = 0; a < m; ++a)
          br[c] += V[i][a].value() * V[j][c].derivative(a).value() -
                   V[j][a].value() * V[i][c].derivative(a).value();
      double n2 = 0.0;
      for (int B = p; B < m; ++B) {
        double comp = 0.0;
        for (int c = 0; c < m; ++c) comp += f.coframe(B, c).value() * br[c];
        n2 += comp * comp;
      }
      worst = std::max(worst, std::sqrt(n2));
    }
  return worst;
}

}  // namespace folia
