#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "folia/jet.hpp"

namespace folia {

enum class Function { Exp, Log, Sin, Cos, Tan, Sqrt, Tanh, Arccosh, Abs };

const char* function_name(Function f);

/// Immutable expression tree; copies share nodes.
class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

  struct Node {
    Kind kind = Kind::Number;
    double number = 0.0;     // Number literal, or the exponent of Pow
    std::string name;        // Variable
    int slot = -1;           // Variable position once bound
    Function fn = Function::Exp;
    std::shared_ptr<const Node> lhs, rhs;
  };

  Expr() : Expr(number(0.0)) {}
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr number(double v);
  static Expr variable(std::string name, int slot = -1);
  static Expr negate(Expr e);
  static Expr binary(Kind k, Expr a, Expr b);
  static Expr power(Expr base, double exponent);
  static Expr call(Function f, Expr arg);

  const Node& node() const { return *node_; }
  Kind kind() const { return node_->kind; }
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }

 private:
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);

Expr parse(std::string_view source);
/// Round-trips through parse() to a structurally equal tree.
std::string to_string(const Expr& e);
bool operator==(const Expr& a, const Expr& b);

std::set<std::string> variables(const Expr& e);
/// Resolves variables to positions in `coords`; throws UnknownIdentifier.
Expr bind_variables(const Expr& e, std::span<const std::string> coords);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements);

/// Bound evaluation; vars[slot] supplies each variable.
Jet eval_jet(const Expr& e, std::span<const Jet> vars);
double eval_real(const Expr& e, std::span<const double> vars);
/// Unbound evaluation by name.
Jet eval_jet(const Expr& e, const std::map<std::string, Jet>& env);
double eval_real(const Expr& e, const std::map<std::string, double>& env);

/// Central finite difference of a bound expression.
double fd_derivative(const Expr& field, std::span<const double> point, std::span<const int> alpha,
                     double step);

}  // namespace folia
