#include "folia/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "folia/errors.hpp"

namespace folia {

namespace {

struct FnEntry {
  const char* name;
  Function fn;
};
constexpr FnEntry kFunctions[] = {
    {"exp", Function::Exp},   {"log", Function::Log},   {"sin", Function::Sin},
    {"cos", Function::Cos},   {"tan", Function::Tan},   {"sqrt", Function::Sqrt},
    {"tanh", Function::Tanh}, {"arccosh", Function::Arccosh}, {"abs", Function::Abs},
};

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Node n) { return std::make_shared<const Expr::Node>(std::move(n)); }

}  // namespace

const char* function_name(Function f) {
  for (const auto& e : kFunctions)
    if (e.fn == f) return e.name;
  return "?";
}

Expr Expr::number(double v) {
  Node n;
  n.kind = Kind::Number;
  n.number = v;
  return Expr(make(std::move(n)));
}

Expr Expr::variable(std::string name, int slot) {
  Node n;
  n.kind = Kind::Variable;
  n.name = std::move(name);
  n.slot = slot;
  return Expr(make(std::move(n)));
}

Expr Expr::negate(Expr e) {
  Node n;
  n.kind = Kind::Negate;
  n.lhs = e.node_;
  return Expr(make(std::move(n)));
}

Expr Expr::binary(Kind k, Expr a, Expr b) {
  Node n;
  n.kind = k;
  n.lhs = a.node_;
  n.rhs = b.node_;
  return Expr(make(std::move(n)));
}

Expr Expr::power(Expr base, double exponent) {
  Node n;
  n.kind = Kind::Pow;
  n.number = exponent;
  n.lhs = base.node_;
  return Expr(make(std::move(n)));
}

Expr Expr::call(Function f, Expr arg) {
  Node n;
  n.kind = Kind::Call;
  n.fn = f;
  n.lhs = arg.node_;
  return Expr(make(std::move(n)));
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Kind::Add, a, b); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Kind::Sub, a, b); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Kind::Mul, a, b); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Kind::Div, a, b); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected token");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(pos_ >= s_.size() ? "unexpected end of input" : msg + " '" + s_[pos_] + "'",
                      pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr e = parse_product();
    while (true) {
      if (accept('+'))
        e = e + parse_product();
      else if (accept('-'))
        e = e - parse_product();
      else
        return e;
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    while (true) {
      if (accept('*'))
        e = e * parse_unary();
      else if (accept('/'))
        e = e / parse_unary();
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::power(base, parse_exponent());
    return base;
  }

  // Exponents must fold to a constant.
  double parse_exponent() {
    skip();
    const std::size_t start = pos_;
    double sign = 1.0;
    if (accept('-')) sign = -1.0;
    Expr e = parse_primary();
    double v = sign * fold(e, start);
    if (accept('^')) v = std::pow(v, parse_exponent());
    return v;
  }

  double fold(const Expr& e, std::size_t at) const {
    if (!variables(e).empty()) throw SyntaxError("exponent must be constant", at);
    try {
      return eval_real(e, std::span<const double>{});
    } catch (const DomainError&) {
      throw SyntaxError("exponent does not evaluate", at);
    }
  }

  Expr parse_primary() {
    skip();
    if (pos_ >= s_.size()) fail("");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        for (const auto& f : kFunctions) {
          if (name == f.name) {
            ++pos_;
            Expr arg = parse_sum();
            if (!accept(')')) fail("expected ')'");
            return Expr::call(f.fn, arg);
          }
        }
        throw SyntaxError("unknown function '" + name + "'", start);
      }
      return Expr::variable(std::move(name));
    }
    fail("unexpected token");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [end, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || end != s_.data() + pos_) throw SyntaxError("malformed number", start);
    return Expr::number(v);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

// ---------------------------------------------------------------------------
// Printing and structure

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0 || s.find_first_of("ni") != std::string::npos) return "(" + s + ")";
  return s;
}

void print(const Expr::Node& n, std::string& out) {
  using K = Expr::Kind;
  auto sub = [&](const NodePtr& p) {
    out += '(';
    print(*p, out);
    out += ')';
  };
  switch (n.kind) {
    case K::Number: out += format_number(n.number); return;
    case K::Variable: out += n.name; return;
    case K::Negate: out += '-'; sub(n.lhs); return;
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div: {
      const char op = n.kind == K::Add ? '+' : n.kind == K::Sub ? '-' : n.kind == K::Mul ? '*' : '/';
      sub(n.lhs);
      out += ' ';
      out += op;
      out += ' ';
      sub(n.rhs);
      return;
    }
    case K::Pow:
      sub(n.lhs);
      out += '^';
      out += '(' + format_number(n.number) + ')';
      return;
    case K::Call:
      out += function_name(n.fn);
      sub(n.lhs);
      return;
  }
}

bool equal(const Expr::Node& a, const Expr::Node& b) {
  if (a.kind != b.kind) return false;
  using K = Expr::Kind;
  switch (a.kind) {
    case K::Number: return a.number == b.number;
    case K::Variable: return a.name == b.name;
    case K::Negate: return equal(*a.lhs, *b.lhs);
    case K::Pow: return a.number == b.number && equal(*a.lhs, *b.lhs);
    case K::Call: return a.fn == b.fn && equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

void collect(const Expr::Node& n, std::set<std::string>& out) {
  if (n.kind == Expr::Kind::Variable) out.insert(n.name);
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

template <class Leaf>
NodePtr rebuild(const NodePtr& n, const Leaf& leaf) {
  if (n->kind == Expr::Kind::Variable) return leaf(*n);
  if (!n->lhs) return n;
  Expr::Node copy = *n;
  copy.lhs = rebuild(n->lhs, leaf);
  if (n->rhs) copy.rhs = rebuild(n->rhs, leaf);
  return make(std::move(copy));
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e.node(), out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return equal(a.node(), b.node()); }

std::set<std::string> variables(const Expr& e) {
  std::set<std::string> out;
  collect(e.node(), out);
  return out;
}

Expr bind_variables(const Expr& e, std::span<const std::string> coords) {
  auto root = std::make_shared<const Expr::Node>(e.node());
  return Expr(rebuild(root, [&](const Expr::Node& v) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] == v.name) {
        Expr::Node copy = v;
        copy.slot = static_cast<int>(i);
        return make(std::move(copy));
      }
    }
    throw UnknownIdentifier("unknown identifier '" + v.name + "'");
  }));
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements) {
  auto root = std::make_shared<const Expr::Node>(e.node());
  return Expr(rebuild(root, [&](const Expr::Node& v) -> NodePtr {
    auto it = replacements.find(v.name);
    if (it == replacements.end()) return make(v);
    return std::make_shared<const Expr::Node>(it->second.node());
  }));
}

// ---------------------------------------------------------------------------
// Evaluation. The real and jet paths share value formulas so that an order-0
// jet reproduces the real result bit for bit.

namespace {

double apply_real(Function f, double x) {
  switch (f) {
    case Function::Exp: return std::exp(x);
    case Function::Log:
      if (!(x > 0.0)) throw DomainError("log of a non-positive value");
      return std::log(x);
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Tan:
      if (std::cos(x) == 0.0) throw DomainError("tan at a pole");
      return std::tan(x);
    case Function::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(x);
    case Function::Tanh: return std::tanh(x);
    case Function::Arccosh:
      if (x < 1.0) throw DomainError("arccosh argument below 1");
      return std::acosh(x);
    case Function::Abs: return std::fabs(x);
  }
  throw std::logic_error("unknown function");
}

double pow_real(double x, double c) {
  if (x < 0.0 && std::floor(c) != c) throw DomainError("negative base with non-integer exponent");
  if (x == 0.0 && c < 0.0) throw DomainError("power not differentiable at zero");
  return std::pow(x, c);
}

Jet apply_jet(Function f, const Jet& x) {
  switch (f) {
    case Function::Exp: return exp(x);
    case Function::Log: return log(x);
    case Function::Sin: return sin(x);
    case Function::Cos: return cos(x);
    case Function::Tan: return tan(x);
    case Function::Sqrt: return sqrt(x);
    case Function::Tanh: return tanh(x);
    case Function::Arccosh: return arccosh(x);
    case Function::Abs: return abs(x);
  }
  throw std::logic_error("unknown function");
}

template <class T, class Lookup, class Constant>
T evaluate(const Expr::Node& n, const Lookup& lookup, const Constant& constant) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::Number: return constant(n.number);
    case K::Variable: return lookup(n);
    case K::Negate: return -evaluate<T>(*n.lhs, lookup, constant);
    case K::Add: return evaluate<T>(*n.lhs, lookup, constant) + evaluate<T>(*n.rhs, lookup, constant);
    case K::Sub: return evaluate<T>(*n.lhs, lookup, constant) - evaluate<T>(*n.rhs, lookup, constant);
    case K::Mul: return evaluate<T>(*n.lhs, lookup, constant) * evaluate<T>(*n.rhs, lookup, constant);
    case K::Div: {
      T a = evaluate<T>(*n.lhs, lookup, constant);
      T b = evaluate<T>(*n.rhs, lookup, constant);
      if constexpr (std::is_same_v<T, double>) {
        if (b == 0.0) throw DomainError("division by a jet with zero value");
      }
      return a / b;
    }
    case K::Pow: {
      T base = evaluate<T>(*n.lhs, lookup, constant);
      if constexpr (std::is_same_v<T, double>)
        return pow_real(base, n.number);
      else
        return pow(base, n.number);
    }
    case K::Call: {
      T arg = evaluate<T>(*n.lhs, lookup, constant);
      if constexpr (std::is_same_v<T, double>)
        return apply_real(n.fn, arg);
      else
        return apply_jet(n.fn, arg);
    }
  }
  throw std::logic_error("unknown node kind");
}

[[noreturn]] void unbound(const Expr::Node& v) {
  throw UnknownIdentifier("unknown identifier '" + v.name + "'");
}

}  // namespace

Jet eval_jet(const Expr& e, std::span<const Jet> vars) {
  if (vars.empty()) {
    auto vs = variables(e);
    if (!vs.empty()) throw UnknownIdentifier("unknown identifier '" + *vs.begin() + "'");
    return eval_jet(e, std::map<std::string, Jet>{});
  }
  const int dim = vars[0].dim(), order = vars[0].order();
  return evaluate<Jet>(
      e.node(),
      [&](const Expr::Node& v) -> Jet {
        if (v.slot < 0 || v.slot >= static_cast<int>(vars.size())) unbound(v);
        return vars[v.slot];
      },
      [&](double c) { return Jet::constant(c, dim, order); });
}

double eval_real(const Expr& e, std::span<const double> vars) {
  return evaluate<double>(
      e.node(),
      [&](const Expr::Node& v) -> double {
        if (v.slot < 0 || v.slot >= static_cast<int>(vars.size())) unbound(v);
        return vars[v.slot];
      },
      [](double c) { return c; });
}

Jet eval_jet(const Expr& e, const std::map<std::string, Jet>& env) {
  int dim = 1, order = 0;
  if (!env.empty()) {
    dim = env.begin()->second.dim();
    order = env.begin()->second.order();
  }
  return evaluate<Jet>(
      e.node(),
      [&](const Expr::Node& v) -> Jet {
        auto it = env.find(v.name);
        if (it == env.end()) unbound(v);
        return it->second;
      },
      [&](double c) { return Jet::constant(c, dim, order); });
}

double eval_real(const Expr& e, const std::map<std::string, double>& env) {
  return evaluate<double>(
      e.node(),
      [&](const Expr::Node& v) -> double {
        auto it = env.find(v.name);
        if (it == env.end()) unbound(v);
        return it->second;
      },
      [](double c) { return c; });
}

double fd_derivative(const Expr& field, std::span<const double> point, std::span<const int> alpha,
                     double step) {
  return fd_derivative([&](std::span<const double> x) { return eval_real(field, x); }, point, alpha,
                       step);
}

}  // namespace folia
