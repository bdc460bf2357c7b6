#ifndef DLAUT_EXPR_HPP
#define DLAUT_EXPR_HPP

// Operator expressions:
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' nat)?
//   atom   := int | 'x' idx ('^' int)? | 'd' idx '[' nat ']' | '(' expr ')'
// Products are noncommutative and evaluated in written order.

#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dlaut/diffop.hpp"

namespace dlaut::expr {

struct Node;
using NodePtr = std::unique_ptr<Node>;

struct IntLit {
  std::string digits;  // decimal, reduced mod p at evaluation
};
struct Var {
  std::size_t index;  // one-based
  std::int64_t exponent;
};
struct Divided {
  std::size_t index;  // one-based
  std::uint64_t order;
};
struct Binary {
  char op;  // '+', '-', '*'
  NodePtr lhs, rhs;
};
struct Power {
  NodePtr base;
  std::uint64_t exponent;
};

struct Node {
  std::variant<IntLit, Var, Divided, Binary, Power> v;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::uint64_t nat() {
    std::size_t at = pos_;
    std::string d = digits();
    try {
      return std::stoull(d);
    } catch (const std::out_of_range&) {
      pos_ = at;
      fail("number too large");
    }
  }

  std::int64_t integer() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    std::size_t at = pos_;
    std::string d = digits();
    try {
      auto v = std::stoll(d);
      return neg ? -v : v;
    } catch (const std::out_of_range&) {
      pos_ = at;
      fail("number too large");
    }
  }

  std::size_t index() {
    // no whitespace between the letter and its index
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a variable index");
    std::size_t at = pos_;
    std::uint64_t i = nat();
    if (i == 0) {
      pos_ = at;
      fail("variable indices start at 1");
    }
    return static_cast<std::size_t>(i);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      char op = 0;
      if (eat('+')) op = '+';
      else if (eat('-')) op = '-';
      else return lhs;
      NodePtr rhs = term();
      lhs = std::make_unique<Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (eat('*')) {
      NodePtr rhs = factor();
      lhs = std::make_unique<Node>(Node{Binary{'*', std::move(lhs), std::move(rhs)}});
    }
    return lhs;
  }

  NodePtr factor() {
    NodePtr a = atom();
    if (eat('^')) a = std::make_unique<Node>(Node{Power{std::move(a), nat()}});
    return a;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return std::make_unique<Node>(Node{IntLit{digits()}});
    if (c == 'x') {
      ++pos_;
      std::size_t i = index();
      std::int64_t e = 1;
      if (eat('^')) e = integer();
      return std::make_unique<Node>(Node{Var{i, e}});
    }
    if (c == 'd') {
      ++pos_;
      std::size_t i = index();
      if (!eat('[')) fail("expected '['");
      std::uint64_t k = nat();
      if (!eat(']')) fail("expected ']'");
      return std::make_unique<Node>(Node{Divided{i, k}});
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline NodePtr parse(std::string_view text) { return Parser(text).parse(); }

/// Normal form of the expression in D(L_n).
inline DiffOp eval(const Node& node, Prime p, std::size_t n) {
  auto check_index = [&](std::size_t i) {
    if (i > n)
      throw MismatchError("variable index " + std::to_string(i) + " exceeds n = " + std::to_string(n));
  };
  return std::visit(
      [&](const auto& v) -> DiffOp {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          std::uint32_t r = 0;
          for (char c : v.digits) r = mod::add(mod::mul(r, 10 % p.value(), p), static_cast<std::uint32_t>(c - '0') % p, p);
          return DiffOp::from_poly(LaurentPoly::constant(p, n, r));
        } else if constexpr (std::is_same_v<T, Var>) {
          check_index(v.index);
          return DiffOp::from_poly(LaurentPoly::variable(p, n, v.index - 1, v.exponent));
        } else if constexpr (std::is_same_v<T, Divided>) {
          check_index(v.index);
          return DiffOp::divided(p, n, v.index - 1, v.order);
        } else if constexpr (std::is_same_v<T, Binary>) {
          DiffOp a = eval(*v.lhs, p, n);
          DiffOp b = eval(*v.rhs, p, n);
          if (v.op == '+') return a + b;
          if (v.op == '-') return a - b;
          return op_mul(a, b);
        } else {
          return op_pow(eval(*v.base, p, n), v.exponent);
        }
      },
      node.v);
}

inline DiffOp eval(std::string_view text, Prime p, std::size_t n) { return eval(*parse(text), p, n); }

}  // namespace dlaut::expr

#endif  // DLAUT_EXPR_HPP
