#include "solwave/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace solwave {

namespace detail {

struct ExprNode {
  enum class Kind { number, xi, negate, add, sub, mul, div, pow, japanese, abs, exp };
  Kind kind = Kind::number;
  double value = 0.0;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;

  double eval(double xi) const {
    switch (kind) {
      case Kind::number: return value;
      case Kind::xi: return xi;
      case Kind::negate: return -lhs->eval(xi);
      case Kind::add: return lhs->eval(xi) + rhs->eval(xi);
      case Kind::sub: return lhs->eval(xi) - rhs->eval(xi);
      case Kind::mul: return lhs->eval(xi) * rhs->eval(xi);
      case Kind::div: return lhs->eval(xi) / rhs->eval(xi);
      case Kind::pow: return std::pow(lhs->eval(xi), rhs->eval(xi));
      case Kind::japanese: {
        const double a = lhs->eval(xi);
        return std::sqrt(1.0 + a * a);
      }
      case Kind::abs: return std::abs(lhs->eval(xi));
      case Kind::exp: return std::exp(lhs->eval(xi));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprNode::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr,
             double value = 0.0) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->value = value;
  return n;
}

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
// atom   := number | 'xi' | '<xi>' | func '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "symbol expression '" << s_ << "': " << what << " at column " << pos_ + 1;
    throw std::invalid_argument(os.str());
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

  bool accept_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    const std::size_t end = pos_ + w.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(ExprNode::Kind::add, lhs, term());
      else if (accept('-')) lhs = make(ExprNode::Kind::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(ExprNode::Kind::mul, lhs, unary());
      else if (accept('/')) lhs = make(ExprNode::Kind::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(ExprNode::Kind::negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(ExprNode::Kind::pow, base, unary());
    return base;
  }

  NodePtr call(ExprNode::Kind kind) {
    if (!accept('(')) fail("expected '('");
    NodePtr arg = expr();
    if (!accept(')')) fail("expected ')'");
    return make(kind, arg);
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (accept('<')) {
      if (!accept_word("xi") || !accept('>')) fail("expected '<xi>'");
      return make(ExprNode::Kind::japanese, make(ExprNode::Kind::xi));
    }
    if (accept_word("xi")) return make(ExprNode::Kind::xi);
    if (accept_word("jb")) return call(ExprNode::Kind::japanese);
    if (accept_word("abs")) return call(ExprNode::Kind::abs);
    if (accept_word("exp")) return call(ExprNode::Kind::exp);
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(ExprNode::Kind::number, nullptr, nullptr, v);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::vector<double> sample_points(double lo, double hi, int count) {
  std::vector<double> xs(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) xs[i] = std::exp(a + (b - a) * i / (count - 1));
  return xs;
}

}  // namespace
}  // namespace detail

Symbol Symbol::bessel(double order) {
  if (!std::isfinite(order)) throw std::invalid_argument("Bessel order must be finite");
  Symbol s;
  s.order_ = order;
  s.low_order_ = 2.0;
  return s;
}

Symbol Symbol::general(const std::string& expression, double order,
                       std::optional<double> low_order) {
  Symbol s;
  s.order_ = order;
  s.low_order_ = low_order;
  s.text_ = expression;
  s.expr_ = detail::Parser(expression).parse();

  // Even parity and finiteness are required of every symbol.
  std::vector<double> probe = detail::sample_points(1e-3, 1e3, 61);
  probe.push_back(0.0);
  for (double xi : probe) {
    const double a = s.expr_->eval(xi);
    const double b = s.expr_->eval(-xi);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw std::invalid_argument("symbol '" + expression + "' is not finite at xi = " +
                                  std::to_string(xi));
    }
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
      throw std::invalid_argument("symbol '" + expression + "' is not even");
    }
  }
  return s;
}

Symbol Symbol::zero() { return general("0", 0.0); }

double Symbol::operator()(double xi) const {
  if (expr_) return expr_->eval(xi);
  if (order_ == 0.0) return 1.0;
  const double base = 1.0 + xi * xi;
  if (order_ == 2.0) return base;
  return std::pow(base, 0.5 * order_);
}

std::vector<double> Symbol::weights(const Grid& grid) const {
  std::vector<double> w(grid.modes());
  for (int k = 0; k < grid.modes(); ++k) w[k] = (*this)(grid.wavenumber(k));
  return w;
}

double Symbol::min_on(const Grid& grid) const {
  const auto w = weights(grid);
  return *std::min_element(w.begin(), w.end());
}

std::string Symbol::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_bessel()) os << "<xi>^" << order_;
  else os << text_;
  return os.str();
}

SymbolReport check_symbol_assumptions(const Symbol& sym, double s, double s_prime,
                                      double bound) {
  SymbolReport rep;
  rep.bound = bound;
  const double m0 = sym(0.0);
  auto high = detail::sample_points(1.0, 1e3, 200);
  auto low = detail::sample_points(1e-3, 1.0, 200);
  low.pop_back();

  rep.high_ratio_min = rep.low_ratio_min = std::numeric_limits<double>::infinity();
  rep.high_ratio_max = rep.low_ratio_max = -std::numeric_limits<double>::infinity();

  auto visit = [&](double xi, double expo, double& lo, double& hi) {
    const double a = sym(xi), b = sym(-xi);
    if (!std::isfinite(a) || !std::isfinite(b)) rep.finite = false;
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) rep.even = false;
    if (!(a > 0.0)) rep.positive = false;
    const double ratio = (a - m0) / std::pow(xi, expo);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  };
  if (!(m0 > 0.0)) rep.positive = false;
  for (double xi : high) visit(xi, s, rep.high_ratio_min, rep.high_ratio_max);
  for (double xi : low) visit(xi, s_prime, rep.low_ratio_min, rep.low_ratio_max);

  rep.high_ok = rep.high_ratio_min >= 1.0 / bound && rep.high_ratio_max <= bound;
  rep.low_ok = rep.low_ratio_min >= 1.0 / bound && rep.low_ratio_max <= bound;

  if (!rep.finite) rep.failures.emplace_back("symbol is not finite on the sample set");
  if (!rep.even) rep.failures.emplace_back("symbol is not even");
  if (!rep.positive) rep.failures.emplace_back("symbol is not positive");
  if (!rep.high_ok) rep.failures.emplace_back("growth (m - m(0))/|xi|^s leaves bounds on |xi| >= 1");
  if (!rep.low_ok) rep.failures.emplace_back("growth (m - m(0))/|xi|^s' leaves bounds on |xi| < 1");
  return rep;
}

SymbolReport check_nonlinear_symbol(const Symbol& sym, double r, double bound) {
  SymbolReport rep;
  rep.bound = bound;
  auto xs = detail::sample_points(1e-3, 1e3, 400);
  xs.insert(xs.begin(), 0.0);
  rep.high_ratio_min = std::numeric_limits<double>::infinity();
  rep.high_ratio_max = -std::numeric_limits<double>::infinity();
  rep.low_ratio_min = 0.0;
  rep.low_ratio_max = 0.0;
  for (double xi : xs) {
    const double a = sym(xi), b = sym(-xi);
    if (!std::isfinite(a) || !std::isfinite(b)) rep.finite = false;
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) rep.even = false;
    const double jb = std::sqrt(1.0 + xi * xi);
    const double ratio = a / std::pow(jb, r);
    rep.high_ratio_min = std::min(rep.high_ratio_min, ratio);
    rep.high_ratio_max = std::max(rep.high_ratio_max, ratio);
    const double h = 1e-6 * std::max(1.0, xi);
    const double slope = std::abs(sym(xi + h) - sym(xi - h)) / (2.0 * h);
    rep.low_ratio_max = std::max(rep.low_ratio_max, slope / std::pow(jb, r - 1.0));
  }
  rep.positive = rep.high_ratio_min > 0.0;
  rep.high_ok = rep.high_ratio_min >= 1.0 / bound && rep.high_ratio_max <= bound;
  rep.low_ok = rep.low_ratio_max <= bound;
  if (!rep.finite) rep.failures.emplace_back("symbol is not finite on the sample set");
  if (!rep.even) rep.failures.emplace_back("symbol is not even");
  if (!rep.high_ok) rep.failures.emplace_back("n(xi)/<xi>^r leaves bounds");
  if (!rep.low_ok) rep.failures.emplace_back("|n'(xi)|/<xi>^(r-1) exceeds bound");
  return rep;
}

}  // namespace solwave
