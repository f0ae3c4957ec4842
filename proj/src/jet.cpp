#include "folia/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "folia/errors.hpp"

namespace folia {

namespace {

// Graded-lex enumeration: by degree, then lexicographically descending.
void enumerate(int dim, int degree, int var, std::vector<std::uint8_t>& cur,
               std::vector<std::uint8_t>& out) {
  if (var == dim - 1) {
    cur[var] = static_cast<std::uint8_t>(degree);
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate(dim, degree - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

double factorial_of(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

MultiIndexTable::MultiIndexTable(int dim, int order) : dim_(dim), order_(order) {
  std::vector<std::uint8_t> cur(dim, 0);
  prefix_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate(dim, d, 0, cur, exponents_);
    prefix_[d] = exponents_.size() / dim;
  }
  const std::size_t n = exponents_.size() / dim;
  degrees_.resize(n);
  factorials_.resize(n);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto e = exponents(k);
    int deg = 0;
    double f = 1.0;
    for (auto x : e) {
      deg += x;
      f *= factorial_of(x);
    }
    degrees_[k] = deg;
    factorials_[k] = f;
    keyed[k] = {encode(e), static_cast<std::uint32_t>(k)};
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [key, pos] : keyed) {
    keys_.push_back(key);
    key_pos_.push_back(pos);
  }

  std::vector<std::uint8_t> sum(dim);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      auto ea = exponents(a);
      auto eb = exponents(b);
      for (int v = 0; v < dim; ++v) sum[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
      auto it = std::lower_bound(keys_.begin(), keys_.end(), encode(sum));
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           key_pos_[it - keys_.begin()]});
    }
  }
  std::stable_sort(products_.begin(), products_.end(),
                   [](const Product& x, const Product& y) { return x.out < y.out; });

  derivative_.resize(dim);
  if (order > 0) {
    for (int v = 0; v < dim; ++v) {
      for (std::size_t k = 0; k < prefix_[order - 1]; ++k) {
        auto e = exponents(k);
        for (int w = 0; w < dim; ++w) sum[w] = e[w];
        sum[v] += 1;
        auto it = std::lower_bound(keys_.begin(), keys_.end(), encode(sum));
        derivative_[v].push_back({key_pos_[it - keys_.begin()], static_cast<std::uint32_t>(k),
                                  static_cast<double>(sum[v])});
      }
    }
  }
}

std::uint64_t MultiIndexTable::encode(std::span<const std::uint8_t> alpha) const {
  std::uint64_t key = 0;
  for (auto x : alpha) key = key * (kMaxJetOrder + 1) + x;
  return key;
}

std::size_t MultiIndexTable::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) throw std::invalid_argument("multi-index size mismatch");
  std::vector<std::uint8_t> e(dim_);
  int deg = 0;
  for (int v = 0; v < dim_; ++v) {
    if (alpha[v] < 0) throw std::invalid_argument("negative multi-index entry");
    deg += alpha[v];
    if (deg > order_) throw std::out_of_range("multi-index degree exceeds jet order");
    e[v] = static_cast<std::uint8_t>(alpha[v]);
  }
  auto it = std::lower_bound(keys_.begin(), keys_.end(), encode(e));
  return key_pos_[it - keys_.begin()];
}

const MultiIndexTable& MultiIndexTable::get(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim) throw std::invalid_argument("jet dimension out of range");
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order out of range");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MultiIndexTable>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[{dim, order}];
  if (!slot) slot.reset(new MultiIndexTable(dim, order));
  return *slot;
}

// ---------------------------------------------------------------------------

Jet::Jet(int dim, int order) : table_(&MultiIndexTable::get(dim, order)), c_(table_->size(), 0.0) {}

Jet Jet::constant(double c, int dim, int order) {
  Jet j(dim, order);
  j.c_[0] = c;
  return j;
}

Jet jet_variable(int index, std::span<const double> point, int order) {
  const int dim = static_cast<int>(point.size());
  if (index < 0 || index >= dim) throw std::invalid_argument("variable index out of range");
  Jet j = Jet::constant(point[index], dim, order);
  if (order > 0) j.coefficients()[1 + index] = 1.0;
  return j;
}

double Jet::coefficient(std::span<const int> alpha) const { return c_[table_->index_of(alpha)]; }

double Jet::partial(std::span<const int> alpha) const {
  const auto k = table_->index_of(alpha);
  return c_[k] * table_->factorial(k);
}

Jet Jet::derivative(int var) const {
  if (order() == 0) throw std::invalid_argument("cannot differentiate an order-0 jet");
  if (var < 0 || var >= dim()) throw std::invalid_argument("variable index out of range");
  Jet d(dim(), order() - 1);
  for (const auto& t : table_->derivative(var)) d.c_[t.dst] = t.factor * c_[t.src];
  return d;
}

Jet Jet::truncated(int k) const {
  if (k > order()) throw std::invalid_argument("cannot raise jet order by truncation");
  if (k == order()) return *this;
  Jet t(dim(), k);
  std::copy_n(c_.begin(), t.c_.size(), t.c_.begin());
  return t;
}

bool Jet::is_constant() const {
  return std::all_of(c_.begin() + 1, c_.end(), [](double x) { return x == 0.0; });
}

void Jet::require_compatible(const Jet& o) const {
  if (table_ != o.table_) throw std::invalid_argument("jet arithmetic needs equal dim and order");
}

Jet& Jet::operator+=(const Jet& o) {
  require_compatible(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_compatible(o);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  *this = *this / o;
  return *this;
}

Jet& Jet::operator+=(double c) {
  c_[0] += c;
  return *this;
}

Jet& Jet::operator-=(double c) {
  c_[0] -= c;
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (auto& x : c_) x *= c;
  return *this;
}

Jet& Jet::operator/=(double c) {
  for (auto& x : c_) x /= c;
  return *this;
}

Jet operator-(Jet a) {
  a *= -1.0;
  return a;
}
Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double c) { return a += c; }
Jet operator+(double c, Jet a) { return a += c; }
Jet operator-(Jet a, double c) { return a -= c; }
Jet operator-(double c, const Jet& a) { return -a + c; }
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }
Jet operator/(Jet a, double c) { return a /= c; }
Jet operator/(double c, const Jet& a) { return Jet::constant(c, a.dim(), a.order()) / a; }

Jet operator*(const Jet& a, const Jet& b) {
  if (&a.table() != &b.table()) throw std::invalid_argument("jet arithmetic needs equal dim and order");
  Jet r(a.dim(), a.order());
  auto ra = a.coefficients();
  auto rb = b.coefficients();
  auto out = r.coefficients();
  for (const auto& t : a.table().products()) out[t.out] += ra[t.lhs] * rb[t.rhs];
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  if (&a.table() != &b.table()) throw std::invalid_argument("jet arithmetic needs equal dim and order");
  const double b0 = b.value();
  if (b0 == 0.0) throw DomainError("division by a jet with zero value");
  Jet q(a.dim(), a.order());
  auto qa = a.coefficients();
  auto qb = b.coefficients();
  auto qq = q.coefficients();
  // Solve q * b = a coefficient by coefficient; products are sorted by output.
  const auto& prods = a.table().products();
  std::size_t t = 0;
  for (std::size_t k = 0; k < qq.size(); ++k) {
    double acc = qa[k];
    for (; t < prods.size() && prods[t].out == k; ++t)
      if (prods[t].rhs != 0) acc -= qq[prods[t].lhs] * qb[prods[t].rhs];
    qq[k] = acc / b0;
  }
  return q;
}

Jet compose_series(const Jet& u, std::span<const double> derivs) {
  if (static_cast<int>(derivs.size()) != u.order() + 1)
    throw std::invalid_argument("series needs order + 1 derivatives");
  Jet delta = u;
  delta.coefficients()[0] = 0.0;
  const int K = u.order();
  Jet r = Jet::constant(derivs[K] / factorial_of(K), u.dim(), K);
  for (int k = K - 1; k >= 0; --k) {
    r = r * delta;
    r.coefficients()[0] = derivs[k] / factorial_of(k);
  }
  r.coefficients()[0] = derivs[0];
  return r;
}

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " produced a non-finite value");
}

// Derivatives of t -> P(t) along t' = s0 + s2 t^2, used for tan and tanh.
std::vector<double> riccati_derivs(double t, double s2, int order) {
  std::vector<double> poly = {0.0, 1.0};  // P_0(t) = t
  std::vector<double> out;
  for (int k = 0; k <= order; ++k) {
    double v = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) v = v * t + poly[i];
    out.push_back(v);
    std::vector<double> dp(poly.size() > 1 ? poly.size() - 1 : 1, 0.0);
    for (std::size_t i = 1; i < poly.size(); ++i) dp[i - 1] = i * poly[i];
    std::vector<double> next(dp.size() + 2, 0.0);
    for (std::size_t i = 0; i < dp.size(); ++i) {
      next[i] += dp[i];
      next[i + 2] += s2 * dp[i];
    }
    poly = std::move(next);
  }
  return out;
}

}  // namespace

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  require_finite(e, "exp");
  std::vector<double> d(u.order() + 1, e);
  return compose_series(u, d);
}

Jet log(const Jet& u) {
  const double x = u.value();
  if (!(x > 0.0)) throw DomainError("log of a non-positive value");
  std::vector<double> d(u.order() + 1);
  d[0] = std::log(x);
  double fact = 1.0;
  for (int k = 1; k <= u.order(); ++k) {
    d[k] = ((k % 2) ? 1.0 : -1.0) * fact / std::pow(x, k);
    fact *= k;
  }
  return compose_series(u, d);
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const double cycle[4] = {s, c, -s, -c};
  std::vector<double> d(u.order() + 1);
  for (int k = 0; k <= u.order(); ++k) d[k] = cycle[k % 4];
  return compose_series(u, d);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  const double cycle[4] = {c, -s, -c, s};
  std::vector<double> d(u.order() + 1);
  for (int k = 0; k <= u.order(); ++k) d[k] = cycle[k % 4];
  return compose_series(u, d);
}

Jet tan(const Jet& u) {
  if (std::cos(u.value()) == 0.0) throw DomainError("tan at a pole");
  auto d = riccati_derivs(std::tan(u.value()), 1.0, u.order());
  d[0] = std::tan(u.value());
  require_finite(d[0], "tan");
  return compose_series(u, d);
}

Jet tanh(const Jet& u) {
  auto d = riccati_derivs(std::tanh(u.value()), -1.0, u.order());
  d[0] = std::tanh(u.value());
  return compose_series(u, d);
}

Jet pow(const Jet& u, double c) {
  const double x = u.value();
  const int K = u.order();
  const bool integral = std::floor(c) == c;
  if (!std::isfinite(c)) throw DomainError("non-finite exponent");
  if (x < 0.0 && !integral) throw DomainError("negative base with non-integer exponent");
  std::vector<double> d(K + 1);
  double ff = 1.0;  // c (c-1) ... (c-k+1)
  for (int k = 0; k <= K; ++k) {
    if (ff == 0.0) {
      d[k] = 0.0;
    } else {
      if (x == 0.0 && c - k < 0.0) throw DomainError("power not differentiable at zero");
      d[k] = ff * std::pow(x, c - k);
    }
    ff *= (c - k);
  }
  d[0] = std::pow(x, c);
  require_finite(d[0], "pow");
  return compose_series(u, d);
}

Jet sqrt(const Jet& u) {
  if (u.value() < 0.0) throw DomainError("sqrt of a negative value");
  Jet r = pow(u, 0.5);
  r.coefficients()[0] = std::sqrt(u.value());
  return r;
}

Jet arccosh(const Jet& u) {
  const double x = u.value();
  if (x < 1.0) throw DomainError("arccosh argument below 1");
  const int K = u.order();
  std::vector<double> d(K + 1);
  d[0] = std::acosh(x);
  if (K > 0) {
    if (x == 1.0) throw DomainError("arccosh not differentiable at 1");
    // Derivative is (s^2 - 1)^(-1/2); expand it univariately to order K-1.
    const double base[1] = {x};
    Jet s = jet_variable(0, base, K - 1);
    Jet g = pow(s * s - 1.0, -0.5);
    for (int k = 1; k <= K; ++k) d[k] = g.coefficients()[k - 1] * factorial_of(k - 1);
  }
  return compose_series(u, d);
}

Jet abs(const Jet& u) {
  if (u.value() > 0.0) return u;
  if (u.value() < 0.0) return -u;
  if (u.order() > 0) throw DomainError("abs not differentiable at zero");
  return Jet::constant(0.0, u.dim(), 0);
}

Jet jet_apply(JetFn fn, std::span<const Jet> args) {
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw std::invalid_argument("wrong number of jet arguments");
  };
  switch (fn) {
    case JetFn::Add: need(2); return args[0] + args[1];
    case JetFn::Sub: need(2); return args[0] - args[1];
    case JetFn::Mul: need(2); return args[0] * args[1];
    case JetFn::Div: need(2); return args[0] / args[1];
    case JetFn::Pow:
      need(2);
      if (!args[1].is_constant()) throw DomainError("pow needs a constant exponent");
      return pow(args[0], args[1].value());
    case JetFn::Exp: need(1); return exp(args[0]);
    case JetFn::Log: need(1); return log(args[0]);
    case JetFn::Sin: need(1); return sin(args[0]);
    case JetFn::Cos: need(1); return cos(args[0]);
    case JetFn::Tan: need(1); return tan(args[0]);
    case JetFn::Sqrt: need(1); return sqrt(args[0]);
    case JetFn::Tanh: need(1); return tanh(args[0]);
    case JetFn::Arccosh: need(1); return arccosh(args[0]);
    case JetFn::Abs: need(1); return abs(args[0]);
  }
  throw std::invalid_argument("unknown jet function");
}

Jet compose(const Jet& outer, std::span<const Jet> inner) {
  if (static_cast<int>(inner.size()) != outer.dim())
    throw std::invalid_argument("compose needs one inner jet per outer variable");
  const int dim = inner[0].dim();
  const int K = std::min(outer.order(), inner[0].order());
  // powers[v][e] = (inner_v - value)^e truncated to K
  std::vector<std::vector<Jet>> powers(inner.size());
  for (std::size_t v = 0; v < inner.size(); ++v) {
    if (inner[v].dim() != dim || inner[v].order() != inner[0].order())
      throw std::invalid_argument("inner jets must share dim and order");
    Jet delta = inner[v].truncated(K);
    delta.coefficients()[0] = 0.0;
    powers[v].push_back(Jet::constant(1.0, dim, K));
    for (int e = 1; e <= K; ++e) powers[v].push_back(powers[v].back() * delta);
  }
  const auto& table = outer.table();
  Jet r(dim, K);
  for (std::size_t k = 0; k < table.prefix(K); ++k) {
    const double c = outer.coefficients()[k];
    if (c == 0.0) continue;
    auto e = table.exponents(k);
    Jet term = Jet::constant(c, dim, K);
    for (std::size_t v = 0; v < inner.size(); ++v)
      if (e[v] > 0) term = term * powers[v][e[v]];
    r += term;
  }
  r.coefficients()[0] = outer.value();
  return r;
}

double fd_derivative(const ScalarField& field, std::span<const double> point,
                     std::span<const int> alpha, double step) {
  if (alpha.size() != point.size()) throw std::invalid_argument("multi-index size mismatch");
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("negative multi-index entry");
    total += a;
  }
  if (total > 3) throw std::invalid_argument("finite differences support degree <= 3");

  struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;
  };
  static const Stencil stencils[4] = {
      {{0}, {1.0}},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
  };
  const std::size_t n = point.size();
  std::vector<double> x(point.begin(), point.end());
  std::vector<std::size_t> idx(n, 0);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t v = 0; v < n; ++v) {
      const auto& s = stencils[alpha[v]];
      x[v] = point[v] + s.offsets[idx[v]] * step;
      w *= s.weights[idx[v]];
    }
    sum += w * field(x);
    std::size_t v = 0;
    for (; v < n; ++v) {
      if (++idx[v] < stencils[alpha[v]].offsets.size()) break;
      idx[v] = 0;
    }
    if (v == n) break;
  }
  return sum / std::pow(step, total);
}

}  // namespace folia
