#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemotaxis {

/// Scalar expression in x, y, z and r = |(x,y,z)|, e.g. "500*exp(-35*r^2)".
/// Supports + - * / ^, parentheses, pi, e and the functions exp, log, sqrt, abs,
/// sin, cos, tanh, pow, min, max.
class Expression {
 public:
  explicit Expression(std::string text) : text_(std::move(text)) {
    pos_ = 0;
    root_ = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  double operator()(double x, double y, double z) const {
    const double vars[4] = {x, y, z, std::sqrt(x * x + y * y + z * z)};
    return eval(*root_, vars);
  }

  const std::string& text() const { return text_; }

 private:
  struct Node {
    enum class Op { number, variable, add, sub, mul, div, pow, neg, call } op;
    double value = 0.0;
    int var = 0;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;
  };
  using Ptr = std::shared_ptr<const Node>;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + text_ + "': " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  static Ptr make(Node::Op op, std::vector<Ptr> args) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->args = std::move(args);
    return n;
  }

  Ptr parse_sum() {
    Ptr lhs = parse_product();
    for (;;) {
      if (accept('+')) lhs = make(Node::Op::add, {lhs, parse_product()});
      else if (accept('-')) lhs = make(Node::Op::sub, {lhs, parse_product()});
      else return lhs;
    }
  }

  Ptr parse_product() {
    Ptr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = make(Node::Op::mul, {lhs, parse_unary()});
      else if (accept('/')) lhs = make(Node::Op::div, {lhs, parse_unary()});
      else return lhs;
    }
  }

  Ptr parse_unary() {
    if (accept('-')) return make(Node::Op::neg, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Ptr parse_power() {
    Ptr base = parse_primary();
    if (accept('^')) return make(Node::Op::pow, {base, parse_unary()});
    return base;
  }

  Ptr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      Ptr inner = parse_sum();
      if (!accept(')')) fail("missing ')'");
      return inner;
    }
    const char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->op = Node::Op::number;
      n->value = value;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::string name;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        name += text_[pos_++];
      if (accept('(')) {
        std::vector<Ptr> args;
        if (!accept(')')) {
          do args.push_back(parse_sum());
          while (accept(','));
          if (!accept(')')) fail("missing ')' after arguments of " + name);
        }
        const bool binary = name == "pow" || name == "min" || name == "max";
        const bool unary = name == "exp" || name == "log" || name == "sqrt" || name == "abs" || name == "sin" ||
                           name == "cos" || name == "tanh";
        if (!binary && !unary) fail("unknown function " + name);
        if (args.size() != (binary ? 2u : 1u)) fail("wrong number of arguments to " + name);
        auto n = std::make_shared<Node>();
        n->op = Node::Op::call;
        n->fn = name;
        n->args = std::move(args);
        return n;
      }
      auto n = std::make_shared<Node>();
      static const char* vars[] = {"x", "y", "z", "r"};
      for (int v = 0; v < 4; ++v)
        if (name == vars[v]) {
          n->op = Node::Op::variable;
          n->var = v;
          return n;
        }
      n->op = Node::Op::number;
      if (name == "pi") n->value = std::numbers::pi;
      else if (name == "e") n->value = std::numbers::e;
      else fail("unknown identifier " + name);
      return n;
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  static double eval(const Node& n, const double* vars) {
    switch (n.op) {
      case Node::Op::number: return n.value;
      case Node::Op::variable: return vars[n.var];
      case Node::Op::add: return eval(*n.args[0], vars) + eval(*n.args[1], vars);
      case Node::Op::sub: return eval(*n.args[0], vars) - eval(*n.args[1], vars);
      case Node::Op::mul: return eval(*n.args[0], vars) * eval(*n.args[1], vars);
      case Node::Op::div: return eval(*n.args[0], vars) / eval(*n.args[1], vars);
      case Node::Op::pow: return std::pow(eval(*n.args[0], vars), eval(*n.args[1], vars));
      case Node::Op::neg: return -eval(*n.args[0], vars);
      case Node::Op::call: break;
    }
    const double a = eval(*n.args[0], vars);
    if (n.fn == "exp") return std::exp(a);
    if (n.fn == "log") return std::log(a);
    if (n.fn == "sqrt") return std::sqrt(a);
    if (n.fn == "abs") return std::abs(a);
    if (n.fn == "sin") return std::sin(a);
    if (n.fn == "cos") return std::cos(a);
    if (n.fn == "tanh") return std::tanh(a);
    const double b = eval(*n.args[1], vars);
    if (n.fn == "pow") return std::pow(a, b);
    if (n.fn == "min") return std::min(a, b);
    return std::max(a, b);
  }

  std::string text_;
  std::size_t pos_ = 0;
  Ptr root_;
};

}  // namespace chemotaxis
