#ifndef MINIMAX_DSL_HPP
#define MINIMAX_DSL_HPP

// Plain-text problem definitions (.mmx):
//
//   file       := decl+
//   decl       := name "=" expr ";"        name in {x_domain, phi_A, phi_B, f}
//   expr       := or
//   or         := and ("or" and)*
//   and        := cmp ("and" cmp)*
//   cmp        := add (("<" | "<=" | ">" | ">=") add)?
//   add        := mul (("+" | "-") mul)*
//   mul        := unary (("*" | "/") unary)*
//   unary      := "-" unary | primary
//   primary    := number | x | a | b | "(" expr ")" | piecewise | setcons
//   piecewise  := "piecewise" "{" (expr "->" expr ";")+ "}"
//   setcons    := "halfline(" expr ")" | "interval(" expr "," expr ")" | "union(" expr ("," expr)* ")"
//
// `#` starts a line comment. Guards are tried top-down and the first match
// wins. Variable scope: x_domain none, phi_A x, phi_B x and a, f x, a and b.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "minimax/errors.hpp"
#include "minimax/ext_real.hpp"
#include "minimax/problem.hpp"
#include "minimax/set_desc.hpp"

namespace minimax::dsl {

enum class Kind { Literal, Variable, Neg, Binary, Compare, Logic, Piecewise, HalfLine, Interval, Union };
enum class Op { None, Add, Sub, Mul, Div, Lt, Le, Gt, Ge, And, Or };
enum class Type { Number, Bool, Set };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::Literal;
  Op op = Op::None;
  double value = 0.0;  // Literal
  char var = 0;        // Variable: 'x', 'a' or 'b'
  Type type = Type::Number;
  std::vector<NodePtr> children;  // Piecewise: guard0, expr0, guard1, expr1, ...
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Structural equality, ignoring source positions.
inline bool equal(const Node& l, const Node& r) {
  if (l.kind != r.kind || l.op != r.op || l.var != r.var || l.type != r.type) return false;
  if (l.kind == Kind::Literal && l.value != r.value) return false;
  if (l.children.size() != r.children.size()) return false;
  for (std::size_t i = 0; i < l.children.size(); ++i)
    if (!equal(*l.children[i], *r.children[i])) return false;
  return true;
}

inline constexpr std::array<std::string_view, 4> kDeclarations{"x_domain", "phi_A", "phi_B", "f"};

struct ProblemAST {
  std::array<NodePtr, 4> decls;  // indexed like kDeclarations

  const Node& x_domain() const { return *decls[0]; }
  const Node& phi_A() const { return *decls[1]; }
  const Node& phi_B() const { return *decls[2]; }
  const Node& f() const { return *decls[3]; }

  friend bool operator==(const ProblemAST& l, const ProblemAST& r) {
    for (std::size_t i = 0; i < l.decls.size(); ++i)
      if (!equal(*l.decls[i], *r.decls[i])) return false;
    return true;
  }
};

namespace detail {

enum class Tok { Number, Ident, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') { ++line; col = 1; }
      else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) ++col;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { advance(1); continue; }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      const auto res = std::from_chars(src.data() + i, src.data() + j, t.number);
      if (res.ec != std::errc() || res.ptr != src.data() + j)
        throw ParseError(line, col, fmt::format("malformed number '{}'", src.substr(i, j - i)), "number");
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      static constexpr std::array<std::pair<std::string_view, std::string_view>, 2> unicode{
          {{"\xE2\x89\xA4", "<="}, {"\xE2\x89\xA5", ">="}}};
      bool matched = false;
      for (const auto& [u, ascii] : unicode) {
        if (src.substr(i, u.size()) == u) {
          t.kind = Tok::Symbol;
          t.text = std::string(ascii);
          advance(u.size());
          matched = true;
          break;
        }
      }
      if (!matched) {
        for (std::string_view two : {"<=", ">=", "->"}) {
          if (src.substr(i, 2) == two) {
            t.kind = Tok::Symbol;
            t.text = std::string(two);
            advance(2);
            matched = true;
            break;
          }
        }
      }
      if (!matched) {
        if (std::string_view("=;{}(),+-*/<>").find(c) == std::string_view::npos)
          throw ParseError(line, col, fmt::format("unexpected character '{}'", c), "symbol");
        t.kind = Tok::Symbol;
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  ProblemAST parse_file() {
    ProblemAST ast;
    std::array<bool, 4> seen{};
    while (peek().kind != Tok::End) {
      const Token& name = peek();
      std::size_t slot = kDeclarations.size();
      for (std::size_t k = 0; k < kDeclarations.size(); ++k)
        if (name.kind == Tok::Ident && name.text == kDeclarations[k]) slot = k;
      if (slot == kDeclarations.size())
        throw ParseError(name.line, name.column, fmt::format("unknown declaration '{}'", name.text),
                         "x_domain, phi_A, phi_B or f");
      if (seen[slot]) throw ParseError(name.line, name.column, fmt::format("duplicate declaration '{}'", name.text));
      ++pos_;
      expect("=");
      scope_ = slot == 0 ? "" : slot == 1 ? "x" : slot == 2 ? "xa" : "xab";
      NodePtr e = expr();
      const Type want = slot == 3 ? Type::Number : Type::Set;
      if (e->type != want)
        throw ParseError(name.line, name.column,
                         fmt::format("'{}' must be {}", name.text, want == Type::Set ? "a set" : "a number"));
      expect(";");
      ast.decls[slot] = std::move(e);
      seen[slot] = true;
    }
    std::string missing;
    for (std::size_t k = 0; k < seen.size(); ++k)
      if (!seen[k]) missing += (missing.empty() ? "" : ", ") + std::string(kDeclarations[k]);
    if (!missing.empty())
      throw ParseError(peek().line, peek().column, "missing declarations: " + missing, "declaration");
    return ast;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(std::string_view sym) const { return peek().kind != Tok::Number && peek().text == sym && peek().kind != Tok::End; }

  [[noreturn]] void fail(const std::string& msg, const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, msg, expected);
  }

  const Token& expect(std::string_view sym) {
    if (!at(sym)) fail(fmt::format("expected '{}' but found '{}'", sym, peek().kind == Tok::End ? "end of input" : peek().text), std::string(sym));
    return toks_[pos_++];
  }

  static NodePtr make(Kind k, Op op, Type type, std::vector<NodePtr> ch, const Token& at) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->op = op;
    n->type = type;
    n->children = std::move(ch);
    n->line = at.line;
    n->column = at.column;
    return n;
  }

  void require(const NodePtr& n, Type t, const char* what) const {
    if (n->type == t) return;
    throw ParseError(n->line, n->column, fmt::format("{} must be {}", what,
                                                     t == Type::Number ? "numeric" : t == Type::Bool ? "a condition" : "a set"));
  }

  NodePtr expr() { return logic_or(); }

  NodePtr logic_or() {
    NodePtr l = logic_and();
    while (peek().kind == Tok::Ident && peek().text == "or") {
      const Token op = toks_[pos_++];
      NodePtr r = logic_and();
      require(l, Type::Bool, "operand of 'or'");
      require(r, Type::Bool, "operand of 'or'");
      l = make(Kind::Logic, Op::Or, Type::Bool, {l, r}, op);
    }
    return l;
  }

  NodePtr logic_and() {
    NodePtr l = compare();
    while (peek().kind == Tok::Ident && peek().text == "and") {
      const Token op = toks_[pos_++];
      NodePtr r = compare();
      require(l, Type::Bool, "operand of 'and'");
      require(r, Type::Bool, "operand of 'and'");
      l = make(Kind::Logic, Op::And, Type::Bool, {l, r}, op);
    }
    return l;
  }

  NodePtr compare() {
    NodePtr l = additive();
    static constexpr std::array<std::pair<std::string_view, Op>, 4> ops{
        {{"<", Op::Lt}, {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}}};
    for (const auto& [sym, op] : ops) {
      if (peek().kind == Tok::Symbol && peek().text == sym) {
        const Token tok = toks_[pos_++];
        NodePtr r = additive();
        require(l, Type::Number, "comparison operand");
        require(r, Type::Number, "comparison operand");
        return make(Kind::Compare, op, Type::Bool, {l, r}, tok);
      }
    }
    return l;
  }

  NodePtr additive() {
    NodePtr l = multiplicative();
    while (peek().kind == Tok::Symbol && (peek().text == "+" || peek().text == "-")) {
      const Token tok = toks_[pos_++];
      NodePtr r = multiplicative();
      require(l, Type::Number, "arithmetic operand");
      require(r, Type::Number, "arithmetic operand");
      l = make(Kind::Binary, tok.text == "+" ? Op::Add : Op::Sub, Type::Number, {l, r}, tok);
    }
    return l;
  }

  NodePtr multiplicative() {
    NodePtr l = unary();
    while (peek().kind == Tok::Symbol && (peek().text == "*" || peek().text == "/")) {
      const Token tok = toks_[pos_++];
      NodePtr r = unary();
      require(l, Type::Number, "arithmetic operand");
      require(r, Type::Number, "arithmetic operand");
      l = make(Kind::Binary, tok.text == "*" ? Op::Mul : Op::Div, Type::Number, {l, r}, tok);
    }
    return l;
  }

  NodePtr unary() {
    if (peek().kind == Tok::Symbol && peek().text == "-") {
      const Token tok = toks_[pos_++];
      NodePtr operand = unary();
      require(operand, Type::Number, "operand of unary minus");
      return make(Kind::Neg, Op::None, Type::Number, {operand}, tok);
    }
    return primary();
  }

  NodePtr primary() {
    const Token tok = peek();
    if (tok.kind == Tok::Number) {
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Kind::Literal;
      n->value = tok.number;
      n->line = tok.line;
      n->column = tok.column;
      return n;
    }
    if (tok.kind == Tok::Symbol && tok.text == "(") {
      ++pos_;
      NodePtr e = expr();
      expect(")");
      return e;
    }
    if (tok.kind != Tok::Ident) fail(fmt::format("unexpected '{}'", tok.kind == Tok::End ? "end of input" : tok.text), "expression");

    if (tok.text == "x" || tok.text == "a" || tok.text == "b") {
      if (scope_.find(tok.text[0]) == std::string::npos)
        throw ParseError(tok.line, tok.column, fmt::format("variable '{}' is not in scope here", tok.text), "variable in scope");
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Kind::Variable;
      n->var = tok.text[0];
      n->line = tok.line;
      n->column = tok.column;
      return n;
    }
    if (tok.text == "piecewise") {
      ++pos_;
      expect("{");
      std::vector<NodePtr> ch;
      std::optional<Type> branch_type;
      do {
        NodePtr guard = expr();
        require(guard, Type::Bool, "piecewise guard");
        expect("->");
        NodePtr value = expr();
        if (value->type == Type::Bool) require(value, Type::Number, "piecewise branch");
        if (branch_type && *branch_type != value->type)
          throw ParseError(value->line, value->column, "piecewise branches mix numbers and sets");
        branch_type = value->type;
        expect(";");
        ch.push_back(std::move(guard));
        ch.push_back(std::move(value));
      } while (!at("}"));
      expect("}");
      return make(Kind::Piecewise, Op::None, *branch_type, std::move(ch), tok);
    }
    if (tok.text == "halfline" || tok.text == "interval" || tok.text == "union") {
      ++pos_;
      expect("(");
      std::vector<NodePtr> args{expr()};
      while (at(",")) {
        ++pos_;
        args.push_back(expr());
      }
      expect(")");
      if (tok.text == "union") {
        for (const auto& a : args) require(a, Type::Set, "union argument");
        return make(Kind::Union, Op::None, Type::Set, std::move(args), tok);
      }
      const std::size_t arity = tok.text == "halfline" ? 1 : 2;
      if (args.size() != arity)
        throw ParseError(tok.line, tok.column, fmt::format("{} takes {} argument(s)", tok.text, arity));
      for (const auto& a : args) require(a, Type::Number, "set bound");
      return make(tok.text == "halfline" ? Kind::HalfLine : Kind::Interval, Op::None, Type::Set, std::move(args), tok);
    }
    fail(fmt::format("unknown identifier '{}'", tok.text), "expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string scope_;
};

}  // namespace detail

inline ProblemAST parse(std::string_view source) { return detail::Parser(source).parse_file(); }

inline ProblemAST parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

// ---- evaluation -----------------------------------------------------------

struct Env {
  double x = 0.0;
  double a = 0.0;
  double b = 0.0;
};

namespace detail {

inline bool eval_bool(const Node& n, const Env& env);
inline SetDesc eval_set(const Node& n, const Env& env);

inline const Node& select_branch(const Node& n, const Env& env) {
  for (std::size_t i = 0; i + 1 < n.children.size(); i += 2)
    if (eval_bool(*n.children[i], env)) return *n.children[i + 1];
  throw EvalError(EvalError::Kind::NoGuardMatched, n.line, n.column, "no piecewise guard matched");
}

inline double eval_number(const Node& n, const Env& env) {
  switch (n.kind) {
    case Kind::Literal: return n.value;
    case Kind::Variable: return n.var == 'x' ? env.x : n.var == 'a' ? env.a : env.b;
    case Kind::Neg: return -eval_number(*n.children[0], env);
    case Kind::Binary: {
      const double l = eval_number(*n.children[0], env);
      const double r = eval_number(*n.children[1], env);
      switch (n.op) {
        case Op::Add: return l + r;
        case Op::Sub: return l - r;
        case Op::Mul: return l * r;
        case Op::Div:
          if (r == 0.0) throw EvalError(EvalError::Kind::DivisionByZero, n.line, n.column, "division by zero");
          return l / r;
        default: break;
      }
      break;
    }
    case Kind::Piecewise: return eval_number(select_branch(n, env), env);
    default: break;
  }
  throw EvalError(EvalError::Kind::TypeMismatch, n.line, n.column, "expression is not numeric");
}

inline bool eval_bool(const Node& n, const Env& env) {
  if (n.kind == Kind::Compare) {
    const double l = eval_number(*n.children[0], env);
    const double r = eval_number(*n.children[1], env);
    switch (n.op) {
      case Op::Lt: return l < r;
      case Op::Le: return l <= r;
      case Op::Gt: return l > r;
      case Op::Ge: return l >= r;
      default: break;
    }
  } else if (n.kind == Kind::Logic) {
    if (n.op == Op::And) return eval_bool(*n.children[0], env) && eval_bool(*n.children[1], env);
    return eval_bool(*n.children[0], env) || eval_bool(*n.children[1], env);
  }
  throw EvalError(EvalError::Kind::TypeMismatch, n.line, n.column, "expression is not a condition");
}

inline SetDesc eval_set(const Node& n, const Env& env) {
  switch (n.kind) {
    case Kind::HalfLine: return SetDesc::half_line(eval_number(*n.children[0], env));
    case Kind::Interval:
      return SetDesc::interval(eval_number(*n.children[0], env), eval_number(*n.children[1], env));
    case Kind::Union: {
      SetDesc s;
      for (const auto& c : n.children) s = SetDesc::unite(s, eval_set(*c, env));
      return s;
    }
    case Kind::Piecewise: return eval_set(select_branch(n, env), env);
    default: break;
  }
  throw EvalError(EvalError::Kind::TypeMismatch, n.line, n.column, "expression is not a set");
}

}  // namespace detail

using Value = std::variant<ExtReal, bool, SetDesc>;

/// Evaluates any node: numbers as ExtReal, conditions as bool, sets as SetDesc.
inline Value eval_expr(const Node& n, const Env& env) {
  switch (n.type) {
    case Type::Number: return ExtReal(detail::eval_number(n, env));
    case Type::Bool: return detail::eval_bool(n, env);
    case Type::Set: return detail::eval_set(n, env);
  }
  return false;
}

inline double eval_number(const Node& n, const Env& env) { return detail::eval_number(n, env); }
inline SetDesc eval_set(const Node& n, const Env& env) { return detail::eval_set(n, env); }

/// Problem whose multifunctions and payoff evaluate the AST.
inline Problem to_problem(const ProblemAST& ast, std::string id) {
  auto holder = std::make_shared<const ProblemAST>(ast);
  Problem p;
  p.id = std::move(id);
  p.x_domain = eval_set(holder->x_domain(), {});
  p.phi_A = Multifunction(p.x_domain, [holder](double x) { return eval_set(holder->phi_A(), {x, 0, 0}); });
  p.phi_B = GraphMultifunction(p.phi_A, [holder](double x, double a) { return eval_set(holder->phi_B(), {x, a, 0}); });
  p.f = [holder](double x, double a, double b) { return eval_number(holder->f(), {x, a, b}); };
  return p;
}

// ---- formatting -----------------------------------------------------------

namespace detail {

inline int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Logic: return n.op == Op::Or ? 1 : 2;
    case Kind::Compare: return 3;
    case Kind::Binary: return (n.op == Op::Add || n.op == Op::Sub) ? 4 : 5;
    case Kind::Neg: return 6;
    default: return 7;
  }
}

inline std::string_view op_text(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "and";
    case Op::Or: return "or";
    default: return "?";
  }
}

inline void emit(const Node& n, std::string& out, int indent);

inline void emit_child(const Node& child, int parent_prec, bool right, std::string& out, int indent) {
  const int p = precedence(child);
  const bool parens = p < parent_prec || (right && p == parent_prec);
  if (parens) out += '(';
  emit(child, out, indent);
  if (parens) out += ')';
}

inline void emit(const Node& n, std::string& out, int indent) {
  switch (n.kind) {
    case Kind::Literal: out += fmt::format("{}", n.value); return;
    case Kind::Variable: out += n.var; return;
    case Kind::Neg:
      out += '-';
      emit_child(*n.children[0], 6, false, out, indent);
      return;
    case Kind::Binary:
    case Kind::Compare:
    case Kind::Logic: {
      const int p = precedence(n);
      emit_child(*n.children[0], n.kind == Kind::Compare ? p + 1 : p, false, out, indent);
      out += fmt::format(" {} ", op_text(n.op));
      emit_child(*n.children[1], p, true, out, indent);
      return;
    }
    case Kind::Piecewise: {
      const std::string pad(static_cast<std::size_t>(indent + 1) * 2, ' ');
      out += "piecewise {\n";
      for (std::size_t i = 0; i + 1 < n.children.size(); i += 2) {
        out += pad;
        emit(*n.children[i], out, indent + 1);
        out += " -> ";
        emit(*n.children[i + 1], out, indent + 1);
        out += ";\n";
      }
      out += std::string(static_cast<std::size_t>(indent) * 2, ' ') + "}";
      return;
    }
    case Kind::HalfLine:
    case Kind::Interval:
    case Kind::Union: {
      out += n.kind == Kind::HalfLine ? "halfline(" : n.kind == Kind::Interval ? "interval(" : "union(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ", ";
        emit(*n.children[i], out, indent);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace detail

/// Canonical text of a single expression.
inline std::string format(const Node& n) {
  std::string out;
  detail::emit(n, out, 0);
  return out;
}

/// Canonical text of a problem file; parse(format(ast)) == ast.
inline std::string format(const ProblemAST& ast) {
  std::string out;
  for (std::size_t k = 0; k < kDeclarations.size(); ++k) {
    out += fmt::format("{} = ", kDeclarations[k]);
    detail::emit(*ast.decls[k], out, 0);
    out += ";\n";
  }
  return out;
}

}  // namespace minimax::dsl

#endif  // MINIMAX_DSL_HPP
