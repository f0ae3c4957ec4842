#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace folia {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetDim = 16;

/// Multi-indices of total degree <= order in `dim` variables, graded-lex order.
/// Tables are interned; references stay valid for the program lifetime.
class MultiIndexTable {
 public:
  struct Product {
    std::uint32_t lhs, rhs, out;
  };
  struct DerivativeTerm {
    std::uint32_t src, dst;
    double factor;
  };

  static const MultiIndexTable& get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return degrees_.size(); }
  int degree(std::size_t k) const { return degrees_[k]; }
  std::span<const std::uint8_t> exponents(std::size_t k) const {
    return {exponents_.data() + k * dim_, static_cast<std::size_t>(dim_)};
  }
  /// Position of `alpha`; throws std::out_of_range when its degree exceeds order.
  std::size_t index_of(std::span<const int> alpha) const;
  /// Number of multi-indices of degree <= k (a prefix of this table).
  std::size_t prefix(int k) const { return prefix_[k]; }
  /// Pairs whose sum stays within the table, sorted by `out`.
  const std::vector<Product>& products() const { return products_; }
  /// Maps coefficients of u to coefficients of du/dx_var (table of order-1).
  const std::vector<DerivativeTerm>& derivative(int var) const { return derivative_[var]; }
  /// Product of factorials of the exponents.
  double factorial(std::size_t k) const { return factorials_[k]; }

 private:
  MultiIndexTable(int dim, int order);
  std::uint64_t encode(std::span<const std::uint8_t> alpha) const;

  int dim_;
  int order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degrees_;
  std::vector<std::size_t> prefix_;
  std::vector<double> factorials_;
  std::vector<std::uint64_t> keys_;  // sorted encodings
  std::vector<std::uint32_t> key_pos_;
  std::vector<Product> products_;
  std::vector<std::vector<DerivativeTerm>> derivative_;
};

/// Truncated multivariate Taylor polynomial around a base point.
/// Coefficient k is d^alpha u / alpha! for the k-th multi-index alpha.
class Jet {
 public:
  Jet(int dim, int order);
  static Jet constant(double c, int dim, int order);

  int dim() const { return table_->dim(); }
  int order() const { return table_->order(); }
  const MultiIndexTable& table() const { return *table_; }

  double value() const { return c_[0]; }
  std::span<const double> coefficients() const { return c_; }
  std::span<double> coefficients() { return c_; }
  double coefficient(std::span<const int> alpha) const;
  /// Partial derivative d^alpha u at the base point.
  double partial(std::span<const int> alpha) const;

  /// d/dx_var; the result has order - 1.
  Jet derivative(int var) const;
  Jet truncated(int order) const;
  bool is_constant() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

 private:
  void require_compatible(const Jet& o) const;

  const MultiIndexTable* table_;
  std::vector<double> c_;
};

Jet jet_variable(int index, std::span<const double> point, int order);

Jet operator-(Jet a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);
Jet operator/(Jet a, double c);
Jet operator/(double c, const Jet& a);

Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet tan(const Jet& u);
Jet sqrt(const Jet& u);
Jet tanh(const Jet& u);
Jet arccosh(const Jet& u);
Jet abs(const Jet& u);
Jet pow(const Jet& u, double exponent);

enum class JetFn { Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Tan, Sqrt, Tanh, Arccosh, Abs };

/// Dispatches on `fn`. Pow takes (base, exponent) and needs a constant exponent.
Jet jet_apply(JetFn fn, std::span<const Jet> args);

/// outer(inner_1 - v_1, ..., inner_n - v_n) where v_k are the inner base values.
/// outer is a jet in n variables; the result lives in the inner variables and has
/// order min(outer.order(), inner order).
Jet compose(const Jet& outer, std::span<const Jet> inner);

/// Sum_k derivs[k] / k! * (u - u(0))^k. Requires derivs.size() == u.order() + 1.
Jet compose_series(const Jet& u, std::span<const double> derivs);

using ScalarField = std::function<double(std::span<const double>)>;

/// Central finite difference of d^alpha field at point. Total degree <= 3.
double fd_derivative(const ScalarField& field, std::span<const double> point,
                     std::span<const int> alpha, double step);

}  // namespace folia
