#include "cliffop/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "cliffop/errors.hpp"

namespace cliffop {

struct ScalarExpr::Node {
  Kind kind = Kind::number;
  double number = 0.0;
  int index = 0;  // variable index, or exponent for power
  Function function = Function::exp;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  int max_variable = 0;
  std::optional<Complex> constant;
};

namespace {

using Kind = ScalarExpr::Kind;
using NodePtr = std::shared_ptr<const ScalarExpr::Node>;

std::array<Complex, kMaxJetOrder + 1> function_taylor(Function f, Complex u0, int order);

std::optional<Complex> apply_function(Function f, Complex u) {
  const bool on_cut = u.imag() == 0.0 && u.real() <= 0.0;
  switch (f) {
    case Function::exp:
      return std::exp(u);
    case Function::log:
      return on_cut ? std::nullopt : std::optional(std::log(u));
    case Function::sin:
      return std::sin(u);
    case Function::cos:
      return std::cos(u);
    case Function::sqrt:
      return on_cut ? std::nullopt : std::optional(std::sqrt(u));
  }
  return std::nullopt;
}

std::optional<Complex> fold(const ScalarExpr::Node& n) {
  auto l = n.lhs ? n.lhs->constant : std::nullopt;
  auto r = n.rhs ? n.rhs->constant : std::nullopt;
  switch (n.kind) {
    case Kind::number:
      return Complex(n.number);
    case Kind::imaginary_unit:
      return Complex(0.0, 1.0);
    case Kind::variable:
      return std::nullopt;
    case Kind::negate:
      return l ? std::optional(-*l) : std::nullopt;
    case Kind::add:
      return l && r ? std::optional(*l + *r) : std::nullopt;
    case Kind::subtract:
      return l && r ? std::optional(*l - *r) : std::nullopt;
    case Kind::multiply:
      return l && r ? std::optional(*l * *r) : std::nullopt;
    case Kind::divide:
      return l && r && *r != Complex{} ? std::optional(*l / *r) : std::nullopt;
    case Kind::power: {
      if (!l || (*l == Complex{} && n.index < 0)) return std::nullopt;
      Complex acc = 1.0;
      for (int i = 0; i < std::abs(n.index); ++i) acc *= *l;
      return n.index < 0 ? Complex(1.0) / acc : acc;
    }
    case Kind::call:
      return l ? apply_function(n.function, *l) : std::nullopt;
  }
  return std::nullopt;
}

NodePtr make_node(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->max_variable = std::max(n->lhs ? n->lhs->max_variable : 0, n->rhs ? n->rhs->max_variable : 0);
  n->constant = fold(*n);
  return n;
}

NodePtr number_node(double v) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = Kind::number;
  n->number = v;
  n->constant = Complex(v);
  return n;
}

NodePtr variable_node(int j) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = Kind::variable;
  n->index = j;
  n->max_variable = j;
  return n;
}

NodePtr power_node(NodePtr base, int exponent) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = Kind::power;
  n->index = exponent;
  n->max_variable = base->max_variable;
  n->lhs = std::move(base);
  n->constant = fold(*n);
  return n;
}

NodePtr call_node(Function f, NodePtr arg) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = Kind::call;
  n->function = f;
  n->max_variable = arg->max_variable;
  n->lhs = std::move(arg);
  n->constant = fold(*n);
  return n;
}

bool equal_nodes(const ScalarExpr::Node& a, const ScalarExpr::Node& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::number:
      if (a.number != b.number) return false;
      break;
    case Kind::variable:
    case Kind::power:
      if (a.index != b.index) return false;
      break;
    case Kind::call:
      if (a.function != b.function) return false;
      break;
    default:
      break;
  }
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !equal_nodes(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal_nodes(*a.rhs, *b.rhs)) return false;
  return true;
}

void collect_variables(const ScalarExpr::Node& n, std::vector<int>& out) {
  if (n.kind == Kind::variable) out.push_back(n.index);
  if (n.lhs) collect_variables(*n.lhs, out);
  if (n.rhs) collect_variables(*n.rhs, out);
}

}  // namespace

std::string_view function_name(Function f) {
  switch (f) {
    case Function::exp:
      return "exp";
    case Function::log:
      return "log";
    case Function::sin:
      return "sin";
    case Function::cos:
      return "cos";
    case Function::sqrt:
      return "sqrt";
  }
  return "?";
}

ScalarExpr::ScalarExpr() : node_(number_node(0.0)) {}

ScalarExpr::Kind ScalarExpr::kind() const noexcept { return node_->kind; }

double ScalarExpr::number() const {
  if (kind() != Kind::number) throw InvalidArgument("expression is not a number literal");
  return node_->number;
}

int ScalarExpr::variable() const {
  if (kind() != Kind::variable) throw InvalidArgument("expression is not a variable");
  return node_->index;
}

int ScalarExpr::exponent() const {
  if (kind() != Kind::power) throw InvalidArgument("expression is not a power");
  return node_->index;
}

Function ScalarExpr::function() const {
  if (kind() != Kind::call) throw InvalidArgument("expression is not a function call");
  return node_->function;
}

ScalarExpr ScalarExpr::lhs() const {
  if (!node_->lhs) throw InvalidArgument("expression has no operand");
  return ScalarExpr(node_->lhs);
}

ScalarExpr ScalarExpr::rhs() const {
  if (!node_->rhs) throw InvalidArgument("expression has no right operand");
  return ScalarExpr(node_->rhs);
}

int ScalarExpr::max_variable() const noexcept { return node_->max_variable; }

std::vector<int> ScalarExpr::variables() const {
  std::vector<int> v;
  collect_variables(*node_, v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::optional<Complex> ScalarExpr::constant_value() const { return node_->constant; }

bool ScalarExpr::is_constant(Complex c) const { return node_->constant && *node_->constant == c; }

bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return equal_nodes(*a.node_, *b.node_); }

// ---- folding builders -----------------------------------------------------

ScalarExpr make_constant(Complex value) {
  double re = value.real() == 0.0 ? 0.0 : value.real();
  double im = value.imag() == 0.0 ? 0.0 : value.imag();
  auto real_part = [](double r) { return r >= 0.0 ? number_node(r) : make_node(Kind::negate, number_node(-r)); };
  if (im == 0.0) return ScalarExpr(real_part(re));
  NodePtr imag = std::abs(im) == 1.0
                     ? make_node(Kind::imaginary_unit)
                     : make_node(Kind::multiply, number_node(std::abs(im)), make_node(Kind::imaginary_unit));
  if (re == 0.0) return ScalarExpr(im > 0.0 ? imag : make_node(Kind::negate, imag));
  return ScalarExpr(make_node(im > 0.0 ? Kind::add : Kind::subtract, real_part(re), imag));
}

ScalarExpr make_variable(int j) {
  if (j < 1) throw InvalidArgument("variable index must be >= 1");
  return ScalarExpr(variable_node(j));
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb) return make_constant(*ca + *cb);
  if (ca && *ca == Complex{}) return b;
  if (cb && *cb == Complex{}) return a;
  return ScalarExpr(make_node(Kind::add, a.node_, b.node_));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb) return make_constant(*ca - *cb);
  if (cb && *cb == Complex{}) return a;
  if (ca && *ca == Complex{}) return -b;
  return ScalarExpr(make_node(Kind::subtract, a.node_, b.node_));
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb) return make_constant(*ca * *cb);
  if ((ca && *ca == Complex{}) || (cb && *cb == Complex{})) return make_constant(0.0);
  if (ca && *ca == Complex(1.0)) return b;
  if (cb && *cb == Complex(1.0)) return a;
  if (ca && *ca == Complex(-1.0)) return -b;
  if (cb && *cb == Complex(-1.0)) return -a;
  return ScalarExpr(make_node(Kind::multiply, a.node_, b.node_));
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  auto ca = a.constant_value();
  auto cb = b.constant_value();
  if (ca && cb && *cb != Complex{}) return make_constant(*ca / *cb);
  if (ca && *ca == Complex{}) return make_constant(0.0);
  if (cb && *cb == Complex(1.0)) return a;
  return ScalarExpr(make_node(Kind::divide, a.node_, b.node_));
}

ScalarExpr operator-(const ScalarExpr& a) {
  if (auto c = a.constant_value()) return make_constant(-*c);
  if (a.kind() == Kind::negate) return a.lhs();
  return ScalarExpr(make_node(Kind::negate, a.node_));
}

ScalarExpr make_power(const ScalarExpr& base, int exponent) {
  if (exponent == 0) return make_constant(1.0);
  if (exponent == 1) return base;
  auto folded = power_node(std::make_shared<ScalarExpr::Node>(base.node()), exponent);
  if (folded->constant) return make_constant(*folded->constant);
  return ScalarExpr(folded);
}

ScalarExpr make_call(Function f, const ScalarExpr& arg) {
  if (auto c = arg.constant_value()) {
    if (auto v = apply_function(f, *c)) return make_constant(*v);
  }
  return ScalarExpr(call_node(f, std::make_shared<ScalarExpr::Node>(arg.node())));
}

// ---- parser ---------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(std::string_view src, int n) : src_(src), n_(n) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  NodePtr expr() {
    NodePtr left = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        left = make_node(Kind::add, left, term());
      } else if (peek('-')) {
        ++pos_;
        left = make_node(Kind::subtract, left, term());
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        left = make_node(Kind::multiply, left, factor());
      } else if (peek('/')) {
        ++pos_;
        left = make_node(Kind::divide, left, factor());
      } else {
        return left;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = atom();
    if (!peek('^')) return base;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    int k = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), k);
    if (ec != std::errc{}) throw ParseError("expected integer exponent", start);
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return power_node(std::move(base), k);
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return make_node(Kind::negate, atom());
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (ec != std::errc{}) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return number_node(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    if (src_[pos_] == 'x' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      int j = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), j);
      if (ec != std::errc{}) throw ParseError("malformed variable index", start);
      pos_ = static_cast<std::size_t>(ptr - src_.data());
      if (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
        throw ParseError("malformed identifier", start);
      }
      if (j < 1 || j > n_) {
        throw ParseError("variable x" + std::to_string(j) + " out of range (n = " + std::to_string(n_) + ")", start);
      }
      return variable_node(j);
    }
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "i") return make_node(Kind::imaginary_unit);
    for (Function f : {Function::exp, Function::log, Function::sin, Function::cos, Function::sqrt}) {
      if (name == function_name(f)) {
        expect('(');
        NodePtr arg = expr();
        expect(')');
        return call_node(f, std::move(arg));
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  int n_;
  std::size_t pos_ = 0;
};

int precedence(Kind k) {
  switch (k) {
    case Kind::add:
    case Kind::subtract:
      return 1;
    case Kind::multiply:
    case Kind::divide:
      return 2;
    case Kind::power:
      return 3;
    default:
      return 4;
  }
}

void render_into(const ScalarExpr::Node& n, int min_prec, std::string& out) {
  const bool parens = precedence(n.kind) < min_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case Kind::number:
      out += format_double(n.number);
      break;
    case Kind::imaginary_unit:
      out += 'i';
      break;
    case Kind::variable:
      out += 'x' + std::to_string(n.index);
      break;
    case Kind::negate:
      out += '-';
      render_into(*n.lhs, 4, out);
      break;
    case Kind::add:
    case Kind::subtract:
      render_into(*n.lhs, 1, out);
      out += n.kind == Kind::add ? " + " : " - ";
      render_into(*n.rhs, 2, out);
      break;
    case Kind::multiply:
    case Kind::divide:
      render_into(*n.lhs, 2, out);
      out += n.kind == Kind::multiply ? '*' : '/';
      render_into(*n.rhs, 3, out);
      break;
    case Kind::power:
      render_into(*n.lhs, 4, out);
      out += '^';
      out += std::to_string(n.index);
      break;
    case Kind::call:
      out += function_name(n.function);
      out += '(';
      render_into(*n.lhs, 1, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

std::string render_node(const ScalarExpr::Node& n) {
  std::string s;
  render_into(n, 1, s);
  return s;
}

// ---- evaluation -----------------------------------------------------------

std::array<Complex, kMaxJetOrder + 1> function_taylor(Function f, Complex u0, int order) {
  std::array<Complex, kMaxJetOrder + 1> d{};
  double factorial = 1.0;
  switch (f) {
    case Function::exp: {
      const Complex e = std::exp(u0);
      for (int m = 0; m <= order; ++m) {
        if (m > 0) factorial *= m;
        d[m] = e / factorial;
      }
      break;
    }
    case Function::log: {
      d[0] = std::log(u0);
      Complex power = 1.0;
      for (int m = 1; m <= order; ++m) {
        power *= u0;
        d[m] = ((m % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(m) * power);
      }
      break;
    }
    case Function::sin:
    case Function::cos: {
      const Complex s = std::sin(u0);
      const Complex c = std::cos(u0);
      // derivative cycle of sin: s, c, -s, -c; cos starts one step later
      const Complex cycle[4] = {s, c, -s, -c};
      const int shift = f == Function::sin ? 0 : 1;
      for (int m = 0; m <= order; ++m) {
        if (m > 0) factorial *= m;
        d[m] = cycle[(m + shift) % 4] / factorial;
      }
      break;
    }
    case Function::sqrt: {
      const Complex s = std::sqrt(u0);
      double binom = 1.0;  // binom(1/2, m)
      Complex power = 1.0;
      for (int m = 0; m <= order; ++m) {
        if (m > 0) {
          binom *= (0.5 - (m - 1)) / m;
          power *= u0;
        }
        d[m] = binom * s / power;
      }
      break;
    }
  }
  return d;
}

class Evaluator {
 public:
  Evaluator(std::span<const double> p, int order) : p_(p), n_(static_cast<int>(p.size())), order_(order) {}

  Jet eval(const ScalarExpr::Node& node) const {
    switch (node.kind) {
      case Kind::number:
        return Jet::constant(n_, order_, node.number);
      case Kind::imaginary_unit:
        return Jet::constant(n_, order_, Complex(0.0, 1.0));
      case Kind::variable:
        if (node.index > n_) {
          throw DomainError("point has only " + std::to_string(n_) + " coordinates", render_node(node));
        }
        return Jet::variable(n_, order_, node.index, p_[node.index - 1]);
      case Kind::negate:
        return -eval(*node.lhs);
      case Kind::add:
        return eval(*node.lhs) + eval(*node.rhs);
      case Kind::subtract:
        return eval(*node.lhs) - eval(*node.rhs);
      case Kind::multiply:
        return eval(*node.lhs) * eval(*node.rhs);
      case Kind::divide: {
        Jet num = eval(*node.lhs);
        Jet den = eval(*node.rhs);
        if (den.value() == Complex{}) throw DomainError("division by zero", render_node(node));
        return num / den;
      }
      case Kind::power: {
        Jet base = eval(*node.lhs);
        if (node.index < 0 && base.value() == Complex{}) {
          throw DomainError("negative power of zero", render_node(node));
        }
        return base.pow(node.index);
      }
      case Kind::call: {
        Jet arg = eval(*node.lhs);
        try {
          return apply_function(node.function, arg);
        } catch (const DomainError& e) {
          throw DomainError(e.detail(), render_node(node));
        }
      }
    }
    throw InvalidArgument("corrupt expression node");
  }

 private:
  std::span<const double> p_;
  int n_;
  int order_;
};

}  // namespace

Jet apply_function(Function f, const Jet& u) {
  const Complex u0 = u.value();
  const bool on_cut = u0.imag() == 0.0 && u0.real() <= 0.0;
  if (on_cut && (f == Function::log || f == Function::sqrt)) {
    throw DomainError(std::string(function_name(f)) + " of non-positive real " + format_double(u0.real()),
                      std::string(function_name(f)) + "(" + format_double(u0.real()) + ")");
  }
  auto taylor = function_taylor(f, u0, u.order());
  return u.compose(std::span(taylor).first(static_cast<std::size_t>(u.order()) + 1));
}

ScalarExpr parse_expression(std::string_view source, int n) { return ScalarExpr(Parser(source, n).parse()); }

std::string render(const ScalarExpr& e) { return render_node(e.node()); }

Jet evaluate(const ScalarExpr& e, std::span<const double> p, int order) {
  if (p.empty()) throw InvalidArgument("evaluation point has no coordinates");
  return Evaluator(p, order).eval(e.node());
}

Complex evaluate_value(const ScalarExpr& e, std::span<const double> p) { return evaluate(e, p, 0).value(); }

Jet2 eval_jet(const ScalarExpr& e, std::span<const double> p) { return Jet2::from_jet(evaluate(e, p, 2)); }

ScalarExpr differentiate(const ScalarExpr& e, int j) {
  switch (e.kind()) {
    case Kind::number:
    case Kind::imaginary_unit:
      return make_constant(0.0);
    case Kind::variable:
      return make_constant(e.variable() == j ? 1.0 : 0.0);
    case Kind::negate:
      return -differentiate(e.lhs(), j);
    case Kind::add:
      return differentiate(e.lhs(), j) + differentiate(e.rhs(), j);
    case Kind::subtract:
      return differentiate(e.lhs(), j) - differentiate(e.rhs(), j);
    case Kind::multiply:
      return differentiate(e.lhs(), j) * e.rhs() + e.lhs() * differentiate(e.rhs(), j);
    case Kind::divide: {
      const ScalarExpr a = e.lhs();
      const ScalarExpr b = e.rhs();
      return (differentiate(a, j) * b - a * differentiate(b, j)) / make_power(b, 2);
    }
    case Kind::power: {
      const int k = e.exponent();
      return make_constant(static_cast<double>(k)) * make_power(e.lhs(), k - 1) * differentiate(e.lhs(), j);
    }
    case Kind::call: {
      const ScalarExpr u = e.lhs();
      const ScalarExpr du = differentiate(u, j);
      if (du.is_constant(0.0)) return make_constant(0.0);
      switch (e.function()) {
        case Function::exp:
          return e * du;
        case Function::log:
          return du / u;
        case Function::sin:
          return make_call(Function::cos, u) * du;
        case Function::cos:
          return -(make_call(Function::sin, u) * du);
        case Function::sqrt:
          return du / (make_constant(2.0) * e);
      }
    }
  }
  throw InvalidArgument("corrupt expression node");
}

}  // namespace cliffop
