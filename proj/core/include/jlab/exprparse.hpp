// Minimal arithmetic expression language for coefficient and boundary data.
// Grammar: literals, variables r/t/x, constant pi, + - * / ^ (right
// associative), unary minus, and the functions sin cos log exp sqrt abs.
// Precedence: ^  >  unary -  >  * /  >  + -.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jlab::expr {

// Parse failure; offset is the byte position in the source text.
struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t offset_)
      : std::runtime_error(message), offset(offset_) {}
  std::size_t offset;
};

// Evaluation failure: unbound variable or a domain violation (log of a
// non-positive value, sqrt of a negative, division by zero, non-finite
// result). The message names the offending sub-expression.
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& message) : std::runtime_error(message) {}
};

// Values for the free variables. A variable left unset is unbound and
// evaluating it raises EvalError.
struct Bindings {
  std::optional<double> r;
  std::optional<double> t;
  std::optional<double> x;
};

namespace detail {
struct Node;
}

// Immutable expression tree; cheap to copy and safe to share across threads.
class Expr {
 public:
  Expr() = default;

  static Expr parse(std::string_view source);

  double evaluate(const Bindings& bindings) const;

  // Canonical rendering with minimal parentheses; parsing the result and
  // printing again reproduces it byte for byte.
  std::string pretty() const;

  bool valid() const { return root_ != nullptr; }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const detail::Node> root_;
};

}  // namespace jlab::expr
