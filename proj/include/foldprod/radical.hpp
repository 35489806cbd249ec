#pragma once

// Algebraic literals written with integers, + - * /, ^ and sqrt(), such as
// "sqrt(5)+1-sqrt(5+2*sqrt(5))" or "5^(1/4)*(1+sqrt(2))". The text is parsed
// again on each evaluation so any precision can be requested.

#include <cctype>
#include <string>
#include <string_view>

#include "foldprod/error.hpp"
#include "foldprod/mpnum.hpp"

namespace foldprod {

namespace detail {

class RadicalParser {
 public:
  RadicalParser(std::string_view text, mpfr_prec_t bits) : s_(text), bits_(bits) {}

  BigReal parse() {
    BigReal v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError,
                "algebraic literal '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + what);
  }

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

  BigReal expr() {
    BigReal v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }

  BigReal term() {
    BigReal v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        BigReal d = unary();
        if (d.is_zero()) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  BigReal unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  BigReal power() {
    BigReal base = atom();
    if (!eat('^')) return base;
    BigReal e = unary();
    if (base.sign() < 0) fail("negative base with real exponent");
    return pow(base, e);
  }

  BigReal atom() {
    skip();
    if (eat('(')) {
      BigReal v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      BigReal v = expr();
      if (!eat(')')) fail("expected ')'");
      if (v.sign() < 0) fail("sqrt of a negative number");
      return sqrt(v);
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number, '(' or sqrt");
    return BigReal(Integer(std::string(s_.substr(start, pos_ - start))), bits_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  mpfr_prec_t bits_;
};

}  // namespace detail

class AlgebraicLiteral {
 public:
  explicit AlgebraicLiteral(std::string text) : text_(std::move(text)) {
    detail::RadicalParser(text_, 64).parse();
  }

  const std::string& text() const { return text_; }

  /// Each of the O(length) operations rounds once at bits+32, so the
  /// relative error is far below 2^-bits for literals of reasonable depth.
  BigReal eval(const Precision& p) const {
    return detail::RadicalParser(text_, p.bits() + 32).parse().rounded(p.bits());
  }

  friend bool operator==(const AlgebraicLiteral& a, const AlgebraicLiteral& b) { return a.text_ == b.text_; }

 private:
  std::string text_;
};

}  // namespace foldprod
