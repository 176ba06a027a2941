#pragma once

/// \file
/// A small expression language for potentials, maps and parametrizations in
/// manifold spec files.  Expressions evaluate to complex jets, so every
/// derivative the pipeline needs is exact.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Names are bound variables (z1.., t1.., x1..) or the constants i and pi.
/// Functions: log exp sqrt pow abs2 conj re im sin cos.

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kreal/core/jet.hpp"

namespace kreal {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

class Expression {
 public:
  /// Variable bindings, looked up by name.
  using Bindings = std::vector<std::pair<std::string, CJet>>;

  static Expression parse(std::string_view source) {
    Parser p(source);
    Expression e;
    e.root_ = p.parse_all();
    e.source_ = std::string(source);
    return e;
  }

  const std::string& source() const { return source_; }

  /// Names referenced by the expression, excluding constants.
  std::set<std::string> variables() const {
    std::set<std::string> out;
    collect(*root_, out);
    return out;
  }

  CJet evaluate(const Bindings& vars) const {
    if (vars.empty()) throw std::invalid_argument("expression evaluation needs at least one binding");
    return eval(*root_, vars);
  }

 private:
  enum class Kind { Number, Imaginary, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

  struct Node {
    Kind kind;
    double number = 0.0;
    std::string name;
    std::vector<std::shared_ptr<const Node>> args;
    int line = 1, column = 1;
  };
  using NodePtr = std::shared_ptr<const Node>;

  class Parser {
   public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse_all() {
      NodePtr e = expr();
      skip();
      if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
      return e;
    }

   private:
    static bool known_function(const std::string& f, std::size_t& arity) {
      static const std::pair<const char*, std::size_t> table[] = {
          {"log", 1}, {"exp", 1}, {"sqrt", 1}, {"pow", 2}, {"abs2", 1},
          {"conj", 1}, {"re", 1}, {"im", 1}, {"sin", 1}, {"cos", 1}};
      for (const auto& [name, a] : table)
        if (f == name) {
          arity = a;
          return true;
        }
      return false;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
      int line = 1, col = 1;
      for (std::size_t k = 0; k < at && k < s_.size(); ++k) {
        if (s_[k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw ParseError(msg, line, col);
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
    NodePtr make(Kind k, std::vector<NodePtr> args, std::size_t at, double num = 0.0, std::string name = {}) {
      auto n = std::make_shared<Node>();
      n->kind = k;
      n->number = num;
      n->name = std::move(name);
      n->args = std::move(args);
      int line = 1, col = 1;
      for (std::size_t k2 = 0; k2 < at && k2 < s_.size(); ++k2) {
        if (s_[k2] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      n->line = line;
      n->column = col;
      return n;
    }

    NodePtr expr() {
      NodePtr lhs = term();
      for (;;) {
        skip();
        const std::size_t at = pos_;
        if (accept('+'))
          lhs = make(Kind::Add, {lhs, term()}, at);
        else if (accept('-'))
          lhs = make(Kind::Sub, {lhs, term()}, at);
        else
          return lhs;
      }
    }
    NodePtr term() {
      NodePtr lhs = unary();
      for (;;) {
        skip();
        const std::size_t at = pos_;
        if (accept('*'))
          lhs = make(Kind::Mul, {lhs, unary()}, at);
        else if (accept('/'))
          lhs = make(Kind::Div, {lhs, unary()}, at);
        else
          return lhs;
      }
    }
    NodePtr unary() {
      skip();
      const std::size_t at = pos_;
      if (accept('-')) return make(Kind::Negate, {unary()}, at);
      if (accept('+')) return unary();
      return power();
    }
    NodePtr power() {
      NodePtr base = primary();
      skip();
      const std::size_t at = pos_;
      if (accept('^')) return make(Kind::Pow, {base, unary()}, at);
      return base;
    }
    NodePtr primary() {
      skip();
      const std::size_t at = pos_;
      if (pos_ >= s_.size()) fail("unexpected end of expression");
      const char c = s_[pos_];
      if (accept('(')) {
        NodePtr e = expr();
        if (!accept(')')) fail("expected ')'");
        return e;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t end = pos_;
        while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) ++end;
        if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
          std::size_t e2 = end + 1;
          if (e2 < s_.size() && (s_[e2] == '+' || s_[e2] == '-')) ++e2;
          if (e2 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[e2]))) {
            end = e2;
            while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
          }
        }
        const std::string text(s_.substr(pos_, end - pos_));
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(text, &used);
        } catch (const std::exception&) {
          fail("malformed number '" + text + "'");
        }
        if (used != text.size()) fail("malformed number '" + text + "'");
        pos_ = end;
        return make(Kind::Number, {}, at, v);
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t end = pos_;
        while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
        std::string name(s_.substr(pos_, end - pos_));
        pos_ = end;
        if (accept('(')) {
          std::size_t arity = 0;
          if (name == "abs") fail_at("'abs' is not analytic; use abs2", at);
          if (!known_function(name, arity)) fail_at("unknown primitive '" + name + "'", at);
          std::vector<NodePtr> args{expr()};
          while (accept(',')) args.push_back(expr());
          if (!accept(')')) fail("expected ')'");
          if (args.size() != arity)
            fail_at("'" + name + "' takes " + std::to_string(arity) + " argument(s)", at);
          return make(Kind::Call, std::move(args), at, 0.0, name);
        }
        if (name == "i") return make(Kind::Imaginary, {}, at);
        if (name == "pi") return make(Kind::Number, {}, at, std::numbers::pi);
        return make(Kind::Variable, {}, at, 0.0, name);
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
  };

  static void collect(const Node& n, std::set<std::string>& out) {
    if (n.kind == Kind::Variable) out.insert(n.name);
    for (const auto& a : n.args) collect(*a, out);
  }

  static std::optional<double> literal(const Node& n) {
    if (n.kind == Kind::Number) return n.number;
    if (n.kind == Kind::Negate) {
      if (auto v = literal(*n.args[0])) return -*v;
    }
    return std::nullopt;
  }

  static CJet power(const CJet& base, const Node& exponent, const Bindings& vars) {
    if (auto p = literal(exponent)) {
      if (*p == std::round(*p) && std::abs(*p) <= 16) return ipow(base, static_cast<int>(*p));
      return pow(base, cplx{*p});
    }
    return exp(eval(exponent, vars) * log(base));
  }

  static CJet eval(const Node& n, const Bindings& vars) {
    const auto& space = vars.front().second.space_ptr();
    switch (n.kind) {
      case Kind::Number:
        return CJet(space, n.number);
      case Kind::Imaginary:
        return CJet(space, cplx{0.0, 1.0});
      case Kind::Variable:
        for (const auto& [name, v] : vars)
          if (name == n.name) return v;
        throw ParseError("unbound variable '" + n.name + "'", n.line, n.column);
      case Kind::Negate:
        return -eval(*n.args[0], vars);
      case Kind::Add:
        return eval(*n.args[0], vars) + eval(*n.args[1], vars);
      case Kind::Sub:
        return eval(*n.args[0], vars) - eval(*n.args[1], vars);
      case Kind::Mul: {
        if (auto c = literal(*n.args[0])) return eval(*n.args[1], vars) * cplx{*c};
        if (auto c = literal(*n.args[1])) return eval(*n.args[0], vars) * cplx{*c};
        return eval(*n.args[0], vars) * eval(*n.args[1], vars);
      }
      case Kind::Div: {
        if (auto c = literal(*n.args[1])) return eval(*n.args[0], vars) / cplx{*c};
        return eval(*n.args[0], vars) / eval(*n.args[1], vars);
      }
      case Kind::Pow:
        return power(eval(*n.args[0], vars), *n.args[1], vars);
      case Kind::Call: {
        const CJet a = eval(*n.args[0], vars);
        if (n.name == "log") return log(a);
        if (n.name == "exp") return exp(a);
        if (n.name == "sqrt") return sqrt(a);
        if (n.name == "pow") return power(a, *n.args[1], vars);
        if (n.name == "abs2") return abs2(a);
        if (n.name == "conj") return conj(a);
        if (n.name == "re") return to_complex(real_part(a));
        if (n.name == "im") return to_complex(imag_part(a));
        if (n.name == "sin") return sin(a);
        if (n.name == "cos") return cos(a);
        break;
      }
    }
    throw ParseError("unsupported expression node", n.line, n.column);
  }

  NodePtr root_;
  std::string source_;
};

}  // namespace kreal
