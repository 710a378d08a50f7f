#include "jlab/exprparse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace jlab::expr {
namespace detail {

enum class Kind { number, variable, constant_pi, unary_minus, binary, call };
enum class Fn { sin, cos, log, exp, sqrt, abs };

struct Node {
  Kind kind;
  double number = 0.0;
  char var = 0;       // 'r', 't', 'x'
  char op = 0;        // '+', '-', '*', '/', '^'
  Fn fn = Fn::sin;
  std::shared_ptr<const Node> lhs, rhs;  // unary/call use lhs only
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::number;
  n->number = v;
  return n;
}

NodePtr make_var(char c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->var = c;
  return n;
}

NodePtr make_pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant_pi;
  return n;
}

NodePtr make_unary(NodePtr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::unary_minus;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_binary(char op, NodePtr l, NodePtr r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::binary;
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr make_call(Fn fn, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::call;
  n->fn = fn;
  n->lhs = std::move(arg);
  return n;
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::log: return "log";
    case Fn::exp: return "exp";
    case Fn::sqrt: return "sqrt";
    case Fn::abs: return "abs";
  }
  return "?";
}

// ------------------------------------------------------------------ lexer --

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  double number = 0.0;
  std::string_view text;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  Token next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos >= src.size()) return {Tok::end, src.size(), 0.0, {}};
    const std::size_t start = pos;
    const char c = src[pos];
    switch (c) {
      case '+': ++pos; return {Tok::plus, start, 0.0, {}};
      case '-': ++pos; return {Tok::minus, start, 0.0, {}};
      case '*': ++pos; return {Tok::star, start, 0.0, {}};
      case '/': ++pos; return {Tok::slash, start, 0.0, {}};
      case '^': ++pos; return {Tok::caret, start, 0.0, {}};
      case '(': ++pos; return {Tok::lparen, start, 0.0, {}};
      case ')': ++pos; return {Tok::rparen, start, 0.0, {}};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos < src.size() && std::isalnum(static_cast<unsigned char>(src[pos]))) ++pos;
      return {Tok::ident, start, 0.0, src.substr(start, pos - start)};
    }
    throw ParseError("unexpected character at offset " + std::to_string(start), start);
  }

  Token lex_number(std::size_t start) {
    std::size_t p = start;
    bool any_digit = false;
    while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) { ++p; any_digit = true; }
    if (p < src.size() && src[p] == '.') {
      ++p;
      while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) { ++p; any_digit = true; }
    }
    if (!any_digit) throw ParseError("malformed number at offset " + std::to_string(start), start);
    if (p < src.size() && (src[p] == 'e' || src[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src.size() && (src[q] == '+' || src[q] == '-')) ++q;
      if (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) {
        ++q;
        while (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) ++q;
        p = q;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src.data() + start, src.data() + p, value);
    if (res.ec != std::errc{}) throw ParseError("malformed number at offset " + std::to_string(start), start);
    pos = p;
    return {Tok::number, start, value, src.substr(start, p - start)};
  }
};

// ----------------------------------------------------------------- parser --
// Precedence climbing. Levels: + - (1), * / (2), unary - (3), ^ (4).

struct Parser {
  Lexer lex;
  Token cur;

  explicit Parser(std::string_view src) : lex{src} { cur = lex.next(); }

  void advance() { cur = lex.next(); }

  [[noreturn]] void fail(const std::string& what, std::size_t offset) {
    throw ParseError(what + " at offset " + std::to_string(offset), offset);
  }

  NodePtr parse_expression() {
    NodePtr node = parse_term();
    while (cur.kind == Tok::plus || cur.kind == Tok::minus) {
      const char op = cur.kind == Tok::plus ? '+' : '-';
      advance();
      node = make_binary(op, node, parse_term());
    }
    return node;
  }

  NodePtr parse_term() {
    NodePtr node = parse_unary();
    while (cur.kind == Tok::star || cur.kind == Tok::slash) {
      const char op = cur.kind == Tok::star ? '*' : '/';
      advance();
      node = make_binary(op, node, parse_unary());
    }
    return node;
  }

  NodePtr parse_unary() {
    if (cur.kind == Tok::minus) {
      advance();
      return make_unary(parse_unary());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (cur.kind == Tok::caret) {
      advance();
      // Right associative; the exponent may itself start with unary minus.
      return make_binary('^', base, parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    switch (cur.kind) {
      case Tok::number: {
        const double v = cur.number;
        advance();
        return make_number(v);
      }
      case Tok::lparen: {
        const std::size_t open = cur.offset;
        advance();
        NodePtr inner = parse_expression();
        if (cur.kind != Tok::rparen) fail("unbalanced parenthesis", open);
        advance();
        return inner;
      }
      case Tok::ident:
        return parse_ident();
      case Tok::end:
        fail("unexpected end of input", cur.offset);
      default:
        fail("unexpected token", cur.offset);
    }
  }

  NodePtr parse_ident() {
    const Token tok = cur;
    advance();
    if (cur.kind == Tok::lparen) {
      Fn fn;
      if (tok.text == "sin") fn = Fn::sin;
      else if (tok.text == "cos") fn = Fn::cos;
      else if (tok.text == "log") fn = Fn::log;
      else if (tok.text == "exp") fn = Fn::exp;
      else if (tok.text == "sqrt") fn = Fn::sqrt;
      else if (tok.text == "abs") fn = Fn::abs;
      else fail("unknown identifier", tok.offset);
      const std::size_t open = cur.offset;
      advance();
      NodePtr arg = parse_expression();
      if (cur.kind != Tok::rparen) fail("unbalanced parenthesis", open);
      advance();
      return make_call(fn, std::move(arg));
    }
    if (tok.text == "pi") return make_pi();
    if (tok.text == "r" || tok.text == "t" || tok.text == "x") return make_var(tok.text[0]);
    fail("unknown identifier", tok.offset);
  }
};

// ------------------------------------------------------------- evaluation --

std::string pretty_node(const Node& n);

double eval_node(const Node& n, const Bindings& b) {
  switch (n.kind) {
    case Kind::number: return n.number;
    case Kind::constant_pi: return M_PI;
    case Kind::variable: {
      const std::optional<double>* slot = nullptr;
      switch (n.var) {
        case 'r': slot = &b.r; break;
        case 't': slot = &b.t; break;
        case 'x': slot = &b.x; break;
      }
      if (slot == nullptr || !slot->has_value())
        throw EvalError(std::string("unbound variable ") + n.var);
      return **slot;
    }
    case Kind::unary_minus: return -eval_node(*n.lhs, b);
    case Kind::binary: {
      const double l = eval_node(*n.lhs, b);
      const double r = eval_node(*n.rhs, b);
      double v = 0.0;
      switch (n.op) {
        case '+': v = l + r; break;
        case '-': v = l - r; break;
        case '*': v = l * r; break;
        case '/':
          if (r == 0.0) throw EvalError("division by zero in " + pretty_node(n));
          v = l / r;
          break;
        case '^': v = std::pow(l, r); break;
      }
      if (!std::isfinite(v)) throw EvalError("non-finite result in " + pretty_node(n));
      return v;
    }
    case Kind::call: {
      const double a = eval_node(*n.lhs, b);
      double v = 0.0;
      switch (n.fn) {
        case Fn::sin: v = std::sin(a); break;
        case Fn::cos: v = std::cos(a); break;
        case Fn::log:
          if (a <= 0.0) throw EvalError("log of non-positive value in " + pretty_node(n));
          v = std::log(a);
          break;
        case Fn::exp: v = std::exp(a); break;
        case Fn::sqrt:
          if (a < 0.0) throw EvalError("sqrt of negative value in " + pretty_node(n));
          v = std::sqrt(a);
          break;
        case Fn::abs: v = std::fabs(a); break;
      }
      if (!std::isfinite(v)) throw EvalError("non-finite result in " + pretty_node(n));
      return v;
    }
  }
  throw EvalError("corrupt expression node");
}

// --------------------------------------------------------- pretty printer --
// Precedence levels mirror the parser; a child is parenthesized when its
// level is too low to re-parse into the same tree position.

int node_level(const Node& n) {
  switch (n.kind) {
    case Kind::binary:
      if (n.op == '^') return 4;
      if (n.op == '*' || n.op == '/') return 2;
      return 1;
    case Kind::unary_minus: return 3;
    default: return 5;
  }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_level, std::string& out) {
  if (node_level(child) < min_level) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::number: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", n.number);
      out += buf;
      return;
    }
    case Kind::constant_pi: out += "pi"; return;
    case Kind::variable: out += n.var; return;
    case Kind::unary_minus:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case Kind::call:
      out += fn_name(n.fn);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::binary: {
      const int lvl = node_level(n);
      if (n.op == '^') {
        // Right associative: the left operand must bind strictly tighter,
        // the right operand may be another power or a unary minus.
        print_child(*n.lhs, 5, out);
        out += '^';
        print_child(*n.rhs, 3, out);
      } else {
        print_child(*n.lhs, lvl, out);
        out += n.op;
        print_child(*n.rhs, lvl + 1, out);
      }
      return;
    }
  }
}

std::string pretty_node(const Node& n) {
  std::string out;
  print_node(n, out);
  return out;
}

}  // namespace
}  // namespace detail

Expr Expr::parse(std::string_view source) {
  if (source.empty()) throw ParseError("empty input", 0);
  detail::Parser parser(source);
  auto root = parser.parse_expression();
  if (parser.cur.kind != detail::Tok::end)
    parser.fail("unexpected token", parser.cur.offset);
  return Expr(std::move(root));
}

double Expr::evaluate(const Bindings& bindings) const {
  if (!root_) throw EvalError("empty expression");
  return detail::eval_node(*root_, bindings);
}

std::string Expr::pretty() const {
  if (!root_) return {};
  return detail::pretty_node(*root_);
}

}  // namespace jlab::expr
