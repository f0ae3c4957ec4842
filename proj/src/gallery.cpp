#include "folia/gallery.hpp"

#include <charconv>
#include <sstream>

#include "folia/errors.hpp"
#include "folia/expr.hpp"

namespace folia {

using nlohmann::json;

namespace {

const std::vector<std::vector<std::string>> kRotation = {{"0", "-1"}, {"1", "0"}};

std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

DomainBox cube(int dim, double lo, double hi) {
  DomainBox b;
  b.bounds.assign(dim, {lo, hi});
  return b;
}

ChartSpec disc_chart(double K, double half_width) {
  ChartSpec s;
  s.dim = 2;
  s.coords = {"x", "y"};
  const std::string c = K == 1.0 ? "4/(1 - x^2 - y^2)^2" : "4/(" + number(K) + "*(1 - x^2 - y^2)^2)";
  s.metric = {{c, "0"}, {"0", c}};
  s.complex_structure = kRotation;
  s.domain = cube(2, -half_width, half_width);
  return s;
}

ChartSpec heisenberg_chart() {
  ChartSpec s;
  s.dim = 3;
  s.vertical_rank = 1;
  s.coords = {"x", "y", "t"};
  s.metric = {{"1 + y^2/4", "-x*y/4", "y/2"}, {"-x*y/4", "1 + x^2/4", "-x/2"}, {"y/2", "-x/2", "1"}};
  s.vertical = {{"0", "0", "1"}};
  s.complex_structure = kRotation;
  s.domain = cube(3, -1, 1);
  return s;
}

ChartSpec warped_chart() {
  ChartSpec s;
  s.dim = 2;
  s.vertical_rank = 1;
  s.coords = {"x", "y"};
  s.metric = {{"1", "0"}, {"0", "exp(2*x)"}};
  s.vertical = {{"0", "1"}};
  s.domain = cube(2, -1, 1);
  return s;
}

ChartSpec euclidean_chart() {
  ChartSpec s;
  s.dim = 2;
  s.coords = {"x", "y"};
  s.metric = {{"1", "0"}, {"0", "1"}};
  s.complex_structure = kRotation;
  s.distance = "sqrt(x^2 + y^2)";
  s.basepoint = {0.0, 0.0};
  s.domain = cube(2, -2, 2);
  return s;
}

// Polar coordinates on the hyperbolic plane; sinh written through exp.
ChartSpec hyperbolic_chart() {
  ChartSpec s;
  s.dim = 2;
  s.coords = {"r", "th"};
  s.metric = {{"1", "0"}, {"0", "((exp(r) - exp(-r))/2)^2"}};
  s.distance = "r";
  s.basepoint = {0.0, 0.0};
  s.domain.bounds = {{0.1, 5.0}, {0.0, 6.283}};
  return s;
}

CheckRequest check(std::string kind, std::string object, json params = json::object(),
                   std::optional<double> tolerance = std::nullopt) {
  CheckRequest c;
  c.name = kind + ":" + object;
  c.kind = std::move(kind);
  c.object = std::move(object);
  c.params = std::move(params);
  c.tolerance = tolerance;
  return c;
}

CheckRequest named(std::string name, CheckRequest c) {
  c.name = std::move(name);
  return c;
}

// Symmetry and block-vanishing suites, run on every chart in the gallery.
void add_curvature_suite(Scenario& s, const std::string& chart) {
  s.checks.push_back(check("curvature-symmetries", chart, {}, 1e-8));
  s.checks.push_back(check("block-vanishing", chart, {}, 1e-8));
}

Scenario euclidean_trivial() {
  Scenario s;
  s.name = "euclidean-trivial";
  s.charts["plane"] = euclidean_chart();
  s.checks.push_back(check("riemannian", "plane"));
  s.checks.push_back(check("connection", "plane"));
  add_curvature_suite(s, "plane");
  s.checks.push_back(check("kahler", "plane"));
  s.checks.push_back(check("sectional", "plane", {{"expected", 0.0}}, 1e-8));
  s.checks.push_back(named("comparison-C0:plane", check("comparison", "plane", {{"C", 0.0}}, 1e-7)));
  s.checks.push_back(named("comparison-C1:plane", check("comparison", "plane", {{"C", 1.0}}, 1e-7)));
  return s;
}

Scenario poincare_disc(double K) {
  Scenario s;
  s.name = "poincare-disc(" + number(K) + ")";
  s.charts["disc"] = disc_chart(K, 0.6);
  s.checks.push_back(check("riemannian", "disc"));
  s.checks.push_back(check("connection", "disc"));
  add_curvature_suite(s, "disc");
  s.checks.push_back(check("kahler", "disc"));
  s.checks.push_back(check("sectional", "disc", {{"expected", -K}}, 1e-8));
  return s;
}

Scenario hyperbolic_distance() {
  Scenario s;
  s.name = "hyperbolic-distance";
  s.charts["hyperbolic"] = hyperbolic_chart();
  s.checks.push_back(check("connection", "hyperbolic"));
  add_curvature_suite(s, "hyperbolic");
  s.checks.push_back(check("sectional", "hyperbolic", {{"expected", -1.0}}, 1e-8));
  s.checks.push_back(check("comparison", "hyperbolic",
                           {{"C", 1.0}, {"reference_laplacian", "(exp(r) + exp(-r))/(exp(r) - exp(-r))"}}, 1e-7));
  return s;
}

Scenario heisenberg_3() {
  Scenario s;
  s.name = "heisenberg-3";
  s.charts["heisenberg"] = heisenberg_chart();
  s.checks.push_back(check("integrability", "heisenberg"));
  s.checks.push_back(check("riemannian", "heisenberg"));
  s.checks.push_back(check("connection", "heisenberg"));
  s.checks.push_back(check("torsion", "heisenberg", {{"expected_magnitude", 1.0}}, 1e-8));
  s.checks.push_back(check("oneill-identity", "heisenberg",
                           {{"expected_sectional", -0.75}, {"expected_transverse_sectional", 0.0}}, 1e-8));
  s.checks.push_back(check("nakagawa-takagi", "heisenberg", {}, 1e-6));
  CheckRequest ricci = check("ricci-identity", "heisenberg", {}, 1e-5);
  ricci.order = 4;
  s.checks.push_back(ricci);
  add_curvature_suite(s, "heisenberg");
  s.checks.push_back(check("kahler", "heisenberg"));
  s.checks.push_back(check("c1-norms", "heisenberg"));
  return s;
}

Scenario warped_product() {
  Scenario s;
  s.name = "warped-product";
  s.charts["warped"] = warped_chart();
  s.maps["identity"] = {"warped", "warped", {"x", "y"}};
  s.checks.push_back(check("integrability", "warped"));
  s.checks.push_back(check("riemannian", "warped"));
  s.checks.push_back(check("connection", "warped"));
  s.checks.push_back(check("torsion", "warped", {{"expected_magnitude", 0.0}}, 1e-8));
  s.checks.push_back(check("oneill-identity", "warped", {}, 1e-8));
  s.checks.push_back(check("nakagawa-takagi", "warped", {}, 1e-6));
  CheckRequest ricci = check("ricci-identity", "warped", {}, 1e-5);
  ricci.order = 4;
  s.checks.push_back(ricci);
  add_curvature_suite(s, "warped");
  s.checks.push_back(check("c1-norms", "warped"));
  s.checks.push_back(check("foliated", "identity"));
  s.checks.push_back(check("tension", "identity", {{"convention", "bott"}}));
  s.checks.push_back(check("tension-conventions", "identity"));
  return s;
}

Scenario disc_holomorphic_square() {
  Scenario s;
  s.name = "disc-holomorphic-square";
  s.charts["source"] = disc_chart(1.0, 0.5);
  s.charts["target"] = disc_chart(1.0, 0.6);
  s.maps["square"] = {"source", "target", {"x^2 - y^2", "2*x*y"}};
  for (const char* chart : {"source", "target"}) add_curvature_suite(s, chart);
  s.checks.push_back(check("foliated", "square"));
  s.checks.push_back(check("second-fundamental-symmetry", "square"));
  s.checks.push_back(check("holomorphic", "square"));
  s.checks.push_back(check("tension", "square"));
  CheckRequest bochner = check("bochner", "square", {{"variant", "both"}}, 1e-5);
  bochner.samples = 20;
  s.checks.push_back(bochner);
  s.checks.push_back(check("commutation", "square", {}, 1e-5));
  s.checks.push_back(check("dilatation", "square"));
  s.checks.push_back(check("schwarz", "square", {{"variant", "kahler"}}));
  return s;
}

std::string disc_name(double K) { return "disc-" + number(K); }

void add_sharpness_pair(Scenario& s, double K1, double K2) {
  const std::string src = disc_name(K1), tgt = disc_name(K2);
  for (const auto& [name, K] : {std::pair{src, K1}, std::pair{tgt, K2}})
    if (!s.charts.count(name)) {
      s.charts[name] = disc_chart(K, 0.6);
      add_curvature_suite(s, name);
    }
  const std::string map = "identity-" + number(K1) + "-" + number(K2);
  s.maps[map] = {src, tgt, {"x", "y"}};
  s.checks.push_back(check("dilatation", map,
                           {{"expect_eigenvalues", {K1 / K2, K1 / K2}}, {"expect_beta_min", 1.0}}, 1e-9));
  s.checks.push_back(named("schwarz-riemannian:" + map,
                           check("schwarz", map, {{"variant", "riemannian"}, {"beta", 1.0}, {"expect_ratio", 1.0}})));
  s.checks.push_back(
      named("schwarz-kahler:" + map, check("schwarz", map, {{"variant", "kahler"}, {"expect_ratio", 1.0}})));
  CheckRequest bochner = check("bochner", map, {{"variant", "both"}}, 1e-5);
  bochner.samples = 20;
  s.checks.push_back(bochner);
}

Scenario sharpness_discs(const std::vector<std::pair<double, double>>& pairs) {
  Scenario s;
  s.name = "sharpness-discs";
  if (pairs.size() == 1) s.name += "(" + number(pairs[0].first) + "," + number(pairs[0].second) + ")";
  for (const auto& [K1, K2] : pairs) add_sharpness_pair(s, K1, K2);
  return s;
}

Scenario heisenberg_geodesic_map() {
  Scenario s;
  s.name = "heisenberg-geodesic-map";
  s.charts["heisenberg"] = heisenberg_chart();
  s.charts["disc"] = disc_chart(1.0, 0.6);
  s.maps["geodesic"] = {"heisenberg", "disc", {"tanh(x/2)", "0"}};
  s.maps["constant"] = {"heisenberg", "disc", {"0.1", "0.2"}};
  s.checks.push_back(check("foliated", "geodesic"));
  s.checks.push_back(check("energy-density", "geodesic", {{"expected", 0.5}, {"expected_laplacian", 0.0}}));
  s.checks.push_back(check("commutation", "geodesic", {}, 1e-5));
  s.checks.push_back(check("dilatation", "geodesic", {{"expect_eigenvalues", {1.0, 0.0}}, {"expect_unbounded", true}},
                           1e-9));
  CheckRequest unbounded = check("schwarz", "geodesic", {{"variant", "riemannian"}});
  unbounded.expect_error = "UnboundedDilatation";
  s.checks.push_back(unbounded);
  s.checks.push_back(check("foliated", "constant"));
  s.checks.push_back(check("schwarz", "constant", {{"variant", "riemannian"}, {"expect_horizontally_constant", true}}));
  return s;
}

Scenario composite_map() {
  Scenario s;
  s.name = "composite-map";
  s.charts["source"] = disc_chart(1.0, 0.5);
  s.charts["middle"] = disc_chart(1.0, 0.6);
  s.charts["target"] = disc_chart(1.0, 0.6);
  const std::vector<std::string> inner = {"x^2 - y^2", "2*x*y"};
  const std::vector<std::string> outer = {"x/2 + (x^2 - y^2)/8", "y/2 + x*y/4"};
  const std::map<std::string, Expr> by_inner = {{"x", parse(inner[0])}, {"y", parse(inner[1])}};
  std::vector<std::string> composite;
  for (const auto& c : outer) composite.push_back(to_string(substitute(parse(c), by_inner)));
  s.maps["inner"] = {"source", "middle", inner};
  s.maps["outer"] = {"middle", "target", outer};
  s.maps["composite"] = {"source", "target", composite};
  s.checks.push_back(check("chain-rule", "inner", {{"outer", "outer"}, {"composite", "composite"}}));
  for (const char* m : {"inner", "outer", "composite"}) s.checks.push_back(check("holomorphic", m));
  s.checks.push_back(check("second-fundamental-symmetry", "composite"));
  return s;
}

// "name(a,b)" -> ("name", {a, b}); plain names give no arguments.
std::pair<std::string, std::vector<double>> split_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return {text, {}};
  if (text.back() != ')') throw UnknownGallery("malformed gallery name '" + text + "'");
  std::vector<double> args;
  std::stringstream ss(text.substr(open + 1, text.size() - open - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* first = item.data();
    while (*first == ' ') ++first;
    const auto res = std::from_chars(first, item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !(v > 0.0))
      throw UnknownGallery("gallery argument '" + item + "' is not a positive number");
    args.push_back(v);
  }
  return {text.substr(0, open), args};
}

}  // namespace

std::vector<GalleryEntry> gallery_list() {
  return {
      {"euclidean-trivial", "flat plane: curvature suites vanish, comparison bound with C = 0 and C = 1"},
      {"poincare-disc(K)", "disc of curvature -K: symmetries, Kahler structure, sectional curvature -K"},
      {"hyperbolic-distance", "polar hyperbolic plane: |grad r| = 1, Delta r = coth r, Laplacian comparison bound"},
      {"heisenberg-3", "Heisenberg group: torsion of the Bott connection, O'Neill identities, Nakagawa-Takagi formulas, "
                       "Ricci identity"},
      {"warped-product", "leaves with mean curvature: Nakagawa-Takagi formulas, tension conventions"},
      {"disc-holomorphic-square", "z -> z^2 between discs: Bochner formulas, Ricci commutation, Kahler Schwarz bound"},
      {"sharpness-discs(K1,K2)", "identity between discs of curvature -K1 and -K2: Schwarz bounds attained"},
      {"heisenberg-geodesic-map", "K1 = 0: unbounded dilatation, horizontally constant maps"},
      {"composite-map", "composition of holomorphic disc maps: chain rule for the horizontal differential"},
  };
}

Scenario gallery(const std::string& name) {
  const auto [base, args] = split_call(name);
  auto want = [&, &base = base, &args = args](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw UnknownGallery("gallery entry '" + base + "' takes " + std::to_string(hi) + " argument(s)");
  };
  if (base == "euclidean-trivial") return want(0, 0), euclidean_trivial();
  if (base == "poincare-disc") return want(0, 1), poincare_disc(args.empty() ? 1.0 : args[0]);
  if (base == "hyperbolic-distance") return want(0, 0), hyperbolic_distance();
  if (base == "heisenberg-3") return want(0, 0), heisenberg_3();
  if (base == "warped-product") return want(0, 0), warped_product();
  if (base == "disc-holomorphic-square") return want(0, 0), disc_holomorphic_square();
  if (base == "sharpness-discs") {
    if (args.size() == 2) return sharpness_discs({{args[0], args[1]}});
    want(0, 0);
    return sharpness_discs({{2, 1}, {1, 1}, {1, 2}, {4, 1}});
  }
  if (base == "heisenberg-geodesic-map") return want(0, 0), heisenberg_geodesic_map();
  if (base == "composite-map") return want(0, 0), composite_map();
  throw UnknownGallery("no gallery entry named '" + name + "'");
}

std::vector<Scenario> full_gallery() {
  std::vector<Scenario> out;
  for (const auto& e : gallery_list()) out.push_back(gallery(e.name.substr(0, e.name.find('('))));
  return out;
}

}  // namespace folia
