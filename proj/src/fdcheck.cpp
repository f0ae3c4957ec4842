#include "folia/fdcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace folia {

namespace {

using Field = std::function<std::vector<double>(const Point&)>;

// 1D central stencils for d^k, k = 1..3: (offset in steps, weight / h^k).
const std::vector<std::pair<int, double>>& stencil(int k) {
  static const std::vector<std::pair<int, double>> s[4] = {
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
  };
  return s[k];
}

std::vector<double> central(const Field& field, const Point& point, std::span<const int> alpha, double h) {
  const int dim = static_cast<int>(point.size());
  std::vector<std::size_t> pos(dim, 0);
  std::vector<double> out;
  int degree = 0;
  for (int a : alpha) degree += a;
  const double scale = std::pow(h, -degree);
  while (true) {
    Point x = point;
    double w = scale;
    for (int a = 0; a < dim; ++a) {
      const auto& [off, weight] = stencil(alpha[a])[pos[a]];
      x[a] += off * h;
      w *= weight;
    }
    const auto v = field(x);
    if (out.empty()) out.assign(v.size(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) out[k] += w * v[k];
    int a = 0;
    for (; a < dim; ++a) {
      if (++pos[a] < stencil(alpha[a]).size()) break;
      pos[a] = 0;
    }
    if (a == dim) break;
  }
  return out;
}

std::vector<std::vector<int>> multi_indices(int dim, int lo, int hi) {
  const auto& t = MultiIndexTable::get(dim, hi);
  std::vector<std::vector<int>> out;
  for (std::size_t k = t.prefix(lo - 1); k < t.size(); ++k) {
    const auto e = t.exponents(k);
    out.emplace_back(e.begin(), e.end());
  }
  return out;
}

std::string describe(const std::string& what, std::span<const int> alpha, const Point& x) {
  std::ostringstream os;
  os << what << " d^(";
  for (std::size_t a = 0; a < alpha.size(); ++a) os << (a ? "," : "") << alpha[a];
  os << ") at (";
  for (std::size_t a = 0; a < x.size(); ++a) os << (a ? "," : "") << x[a];
  os << ")";
  return os.str();
}

// Compares partials of degree 1..max_degree of jets(x) against differences of field.
void compare(FdReport& rep, const std::string& what, const Point& x, const std::vector<Jet>& jets,
             const Field& field, int max_degree) {
  if (jets.empty()) return;
  for (const auto& alpha : multi_indices(static_cast<int>(x.size()), 1, max_degree)) {
    int degree = 0;
    for (int a : alpha) degree += a;
    const auto fd = fd_partial(field, x, alpha, fd_step(degree));
    for (std::size_t k = 0; k < jets.size(); ++k) {
      const double v = jets[k].partial(alpha);
      const double err = std::fabs(v - fd[k]) / std::max(1.0, std::fabs(v));
      ++rep.compared;
      if (std::isnan(err) || err > rep.max_error || rep.worst.empty()) {
        rep.max_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : std::max(rep.max_error, err);
        rep.worst = describe(what, alpha, x);
      }
    }
  }
}

std::vector<Jet> flat(const JetTensor& t) { return {t.begin(), t.end()}; }

std::vector<double> flat_values(const JetTensor& t) {
  std::vector<double> v;
  for (const auto& j : t) v.push_back(j.value());
  return v;
}

void compare_expressions(FdReport& rep, const std::string& what, const std::vector<Expr>& exprs,
                         const std::vector<std::string>& coords, const Point& x) {
  if (exprs.empty()) return;
  std::vector<Jet> xs;
  for (std::size_t a = 0; a < coords.size(); ++a) xs.push_back(jet_variable(static_cast<int>(a), x, 3));
  std::vector<Jet> jets;
  for (const auto& e : exprs) jets.push_back(eval_jet(e, xs));
  compare(rep, what, x, jets, [&](const Point& y) {
    std::vector<double> v;
    for (const auto& e : exprs) v.push_back(eval_real(e, y));
    return v;
  }, 3);
}

}  // namespace

bool FdReport::passed() const { return max_error <= kFdTolerance; }

void FdReport::merge(const FdReport& other) {
  compared += other.compared;
  if (other.max_error > max_error || (worst.empty() && !other.worst.empty())) {
    max_error = std::max(max_error, other.max_error);
    worst = other.worst;
  }
}

double fd_step(int degree) {
  static const double steps[4] = {0.0, 1e-3, 2e-3, 4e-3};
  return steps[std::clamp(degree, 1, 3)];
}

std::vector<double> fd_partial(const Field& field, const Point& point, std::span<const int> alpha, double h) {
  const auto coarse = central(field, point, alpha, h);
  const auto fine = central(field, point, alpha, h / 2);
  std::vector<double> out(coarse.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
  return out;
}

std::vector<Point> interior_points(const DomainBox& box, const std::vector<Point>& points, std::size_t count,
                                   double margin) {
  std::vector<Point> out;
  for (const auto& x : points) {
    bool inside = true;
    for (int a = 0; a < box.dim(); ++a) {
      const auto [lo, hi] = box.bounds[a];
      const double pad = margin * (hi - lo);
      inside = inside && x[a] >= lo + pad && x[a] <= hi - pad;
    }
    if (inside) out.push_back(x);
    if (out.size() == count) break;
  }
  return out;
}

FdReport fd_check_chart(const FoliatedChart& chart, const std::vector<Point>& points) {
  FdReport rep;
  const int m = chart.dim(), p = chart.vertical_rank(), q = chart.codim();
  std::vector<Expr> metric, vertical, J, distance;
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) metric.push_back(chart.metric(a, b));
  for (int i = 0; i < p; ++i)
    for (int a = 0; a < m; ++a) vertical.push_back(chart.vertical(i, a));
  if (chart.has_complex_structure())
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) J.push_back(chart.complex_structure(a, b));
  if (chart.has_distance()) distance.push_back(chart.distance());

  for (const auto& x : interior_points(chart.domain(), points)) {
    compare_expressions(rep, "metric", metric, chart.coords(), x);
    compare_expressions(rep, "vertical", vertical, chart.coords(), x);
    compare_expressions(rep, "complex structure", J, chart.coords(), x);
    compare_expressions(rep, "distance", distance, chart.coords(), x);
    compare(rep, "frame", x, flat(adapted_frame(chart, x, 2).frame),
            [&](const Point& y) { return flat_values(adapted_frame(chart, y, 0).frame); }, 2);
    const ConnectionTable lc = levi_civita(chart, x, 2);
    compare(rep, "christoffel", x, flat(lc.christoffel),
            [&](const Point& y) { return flat_values(levi_civita(chart, y, 1).christoffel); }, 1);
    const ConnectionTable bott = bott_connection(chart, x, 2);
    compare(rep, "bott connection", x, flat(bott.bott),
            [&](const Point& y) { return flat_values(bott_connection(chart, y, 1).bott); }, 1);
  }
  return rep;
}

FdReport fd_check_map(const FoliatedMap& map, const std::vector<Point>& points) {
  FdReport rep;
  std::vector<Expr> comps;
  for (int mu = 0; mu < map.target().dim(); ++mu) comps.push_back(map.component(mu));
  for (const auto& x : interior_points(map.source().domain(), points)) {
    compare_expressions(rep, "map component", comps, map.source().coords(), x);
    const MapJet mj = map_jet(map, x, 3);
    compare(rep, "df", x, flat(mj.df), [&](const Point& y) { return flat_values(map_jet(map, y, 1).df); }, 2);
    compare(rep, "energy density", x, {energy_density(mj)},
            [&](const Point& y) { return std::vector<double>{energy_density(map_jet(map, y, 1)).value()}; }, 2);
  }
  return rep;
}

}  // namespace folia
