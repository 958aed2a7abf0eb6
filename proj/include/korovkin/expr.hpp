#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "korovkin/errors.hpp"
#include "korovkin/growth.hpp"
#include "korovkin/vec.hpp"

namespace korovkin {

// Small arithmetic language over the variables u1..um:
//   + - * / ^ (right associative), unary minus, parentheses,
//   functions exp, sin, cos, abs, sqrt (one argument) and norm (variadic).
// A vector expression is a top-level tuple "(e1, e2, ...)".
struct Expr {
  enum class Kind { number, variable, neg, binary, call };
  Kind kind = Kind::number;
  double value = 0.0;          // number
  std::size_t var = 0;         // variable index (0-based)
  char op = 0;                 // binary
  std::string name;            // call
  std::vector<Expr> children;
  std::size_t offset = 0;      // byte offset in the source, for diagnostics
};

struct Expression {
  std::vector<Expr> components;
  std::string source;

  int codim() const { return static_cast<int>(components.size()); }
};

namespace detail {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
};

class Parser {
public:
  explicit Parser(const std::string& text) : lex_{text} {}

  Expression parse_toplevel() {
    Expression out;
    out.source = lex_.text;
    if (lex_.peek() == '(') {
      // look ahead for a top-level comma: that makes it a tuple
      std::size_t save = lex_.pos;
      ++lex_.pos;
      int depth = 1;
      bool tuple = false;
      for (std::size_t i = lex_.pos; i < lex_.text.size() && depth > 0; ++i) {
        char c = lex_.text[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 1) tuple = true;
      }
      if (tuple) {
        out.components.push_back(parse_expr());
        while (lex_.peek() == ',') {
          ++lex_.pos;
          out.components.push_back(parse_expr());
        }
        expect(')');
        finish();
        return out;
      }
      lex_.pos = save;
    }
    out.components.push_back(parse_expr());
    finish();
    return out;
  }

private:
  [[noreturn]] void fail(std::size_t offset, const std::string& expected) {
    throw error(errc::parse, "syntax error at offset " + std::to_string(offset) + ": expected " +
                                 expected);
  }

  void expect(char c) {
    if (lex_.peek() != c) fail(lex_.pos, std::string("'") + c + "'");
    ++lex_.pos;
  }

  void finish() {
    if (lex_.peek() != '\0') fail(lex_.pos, "end of input");
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (true) {
      char c = lex_.peek();
      if (c != '+' && c != '-') return lhs;
      std::size_t at = lex_.pos;
      ++lex_.pos;
      Expr node;
      node.kind = Expr::Kind::binary;
      node.op = c;
      node.offset = at;
      node.children = {std::move(lhs), parse_term()};
      lhs = std::move(node);
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (true) {
      char c = lex_.peek();
      if (c != '*' && c != '/') return lhs;
      std::size_t at = lex_.pos;
      ++lex_.pos;
      Expr node;
      node.kind = Expr::Kind::binary;
      node.op = c;
      node.offset = at;
      node.children = {std::move(lhs), parse_unary()};
      lhs = std::move(node);
    }
  }

  Expr parse_unary() {
    if (lex_.peek() == '-') {
      std::size_t at = lex_.pos;
      ++lex_.pos;
      Expr node;
      node.kind = Expr::Kind::neg;
      node.offset = at;
      node.children.push_back(parse_unary());
      return node;
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (lex_.peek() == '^') {
      std::size_t at = lex_.pos;
      ++lex_.pos;
      Expr node;
      node.kind = Expr::Kind::binary;
      node.op = '^';
      node.offset = at;
      node.children = {std::move(base), parse_unary()};  // right associative
      return node;
    }
    return base;
  }

  Expr parse_atom() {
    char c = lex_.peek();
    std::size_t at = lex_.pos;
    if (c == '(') {
      ++lex_.pos;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = lex_.text.c_str() + lex_.pos;
      char* end = nullptr;
      double v = std::strtod(start, &end);
      if (end == start) fail(at, "a number");
      lex_.pos += static_cast<std::size_t>(end - start);
      Expr node;
      node.kind = Expr::Kind::number;
      node.value = v;
      node.offset = at;
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (lex_.pos < lex_.text.size() &&
             (std::isalnum(static_cast<unsigned char>(lex_.text[lex_.pos])) ||
              lex_.text[lex_.pos] == '_'))
        name += lex_.text[lex_.pos++];
      if (name.size() >= 2 && name[0] == 'u' &&
          name.find_first_not_of("0123456789", 1) == std::string::npos) {
        std::size_t idx = std::stoul(name.substr(1));
        if (idx == 0) fail(at, "a variable u1..um (indices start at 1)");
        Expr node;
        node.kind = Expr::Kind::variable;
        node.var = idx - 1;
        node.offset = at;
        return node;
      }
      if (lex_.peek() != '(') fail(lex_.pos, "'(' after function name '" + name + "'");
      bool known = name == "exp" || name == "sin" || name == "cos" || name == "abs" ||
                   name == "sqrt" || name == "norm";
      if (!known) fail(at, "a known function (exp, sin, cos, abs, sqrt, norm)");
      ++lex_.pos;
      Expr node;
      node.kind = Expr::Kind::call;
      node.name = name;
      node.offset = at;
      node.children.push_back(parse_expr());
      while (lex_.peek() == ',') {
        ++lex_.pos;
        node.children.push_back(parse_expr());
      }
      expect(')');
      if (name != "norm" && node.children.size() != 1)
        fail(at, "exactly one argument for '" + name + "'");
      return node;
    }
    fail(at, "a number, variable, function, or '('");
  }

  Lexer lex_;
};

inline double eval_node(const Expr& e, const Vec& u) {
  auto located = [&e](const std::string& what) {
    return error(errc::evaluation,
                 what + " at offset " + std::to_string(e.offset));
  };
  double v = 0.0;
  switch (e.kind) {
    case Expr::Kind::number:
      v = e.value;
      break;
    case Expr::Kind::variable:
      if (e.var >= u.size())
        throw located("variable u" + std::to_string(e.var + 1) + " exceeds the point dimension");
      v = u[e.var];
      break;
    case Expr::Kind::neg:
      v = -eval_node(e.children[0], u);
      break;
    case Expr::Kind::binary: {
      double a = eval_node(e.children[0], u);
      double b = eval_node(e.children[1], u);
      switch (e.op) {
        case '+': v = a + b; break;
        case '-': v = a - b; break;
        case '*': v = a * b; break;
        case '/':
          if (b == 0.0) throw located("division by zero");
          v = a / b;
          break;
        case '^': v = std::pow(a, b); break;
      }
      break;
    }
    case Expr::Kind::call: {
      if (e.name == "norm") {
        double s = 0.0;
        for (const Expr& c : e.children) {
          double x = eval_node(c, u);
          s += x * x;
        }
        v = std::sqrt(s);
        break;
      }
      double a = eval_node(e.children[0], u);
      if (e.name == "exp") v = std::exp(a);
      else if (e.name == "sin") v = std::sin(a);
      else if (e.name == "cos") v = std::cos(a);
      else if (e.name == "abs") v = std::abs(a);
      else {
        if (a < 0.0) throw located("sqrt of a negative argument");
        v = std::sqrt(a);
      }
      break;
    }
  }
  if (!std::isfinite(v)) throw located("non-finite value");
  return v;
}

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::binary:
      return e.op == '^' ? 3 : (e.op == '*' || e.op == '/') ? 2 : 1;
    case Expr::Kind::neg:
      return 2;
    case Expr::Kind::number:
      // a negative literal prints with a leading '-', which reparses as a
      // negation; give it the same binding so parens land where needed
      return std::signbit(e.value) ? 2 : 4;
    default:
      return 4;
  }
}

inline void print_node(const Expr& e, std::string& out) {
  auto child = [&](const Expr& c, bool parens) {
    if (parens) out += '(';
    print_node(c, out);
    if (parens) out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      out += buf;
      break;
    }
    case Expr::Kind::variable:
      out += "u" + std::to_string(e.var + 1);
      break;
    case Expr::Kind::neg:
      // the parsed unary minus binds tighter than * and /, so any child at
      // or below that level keeps its parens
      out += '-';
      child(e.children[0], precedence(e.children[0]) <= 2);
      break;
    case Expr::Kind::binary: {
      // ^ is right associative: parenthesize an equal-precedence child on
      // the left; the left-associative operators need it on the right
      int p = precedence(e);
      const Expr& l = e.children[0];
      const Expr& r = e.children[1];
      child(l, e.op == '^' ? precedence(l) <= p : precedence(l) < p);
      out += e.op;
      child(r, e.op == '^' ? precedence(r) < p : precedence(r) <= p);
      break;
    }
    case Expr::Kind::call:
      out += e.name + "(";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += ", ";
        print_node(e.children[i], out);
      }
      out += ')';
      break;
  }
}

}  // namespace detail

inline Expression parse_expression(const std::string& text) {
  return detail::Parser(text).parse_toplevel();
}

inline Vec eval_expression(const Expression& e, const Vec& u) {
  Vec out;
  out.reserve(e.components.size());
  for (const Expr& c : e.components) out.push_back(detail::eval_node(c, u));
  return out;
}

inline std::string print_expression(const Expression& e) {
  std::string out;
  if (e.components.size() > 1) {
    out += '(';
    for (std::size_t i = 0; i < e.components.size(); ++i) {
      if (i) out += ", ";
      detail::print_node(e.components[i], out);
    }
    out += ')';
    return out;
  }
  detail::print_node(e.components[0], out);
  return out;
}

inline VectorFunction expression_function(const Expression& e, std::string label) {
  return VectorFunction{e.codim(), [e](const Vec& u) { return eval_expression(e, u); },
                        std::move(label)};
}

inline GrowthFunction growth_from_expression(const Expression& e, std::string label) {
  if (e.codim() != 1)
    throw error(errc::config, "a growth function must be a scalar expression");
  return growth_from_scalar([e](const Vec& u) { return eval_expression(e, u)[0]; },
                            std::move(label));
}

}  // namespace korovkin
