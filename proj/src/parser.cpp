#include "relform/parser.hpp"

#include <cctype>

namespace relform {
namespace {

class Parser {
 public:
  Parser(const Context& ctx, std::string_view text) : ctx_(ctx), s_(text) {}

  GradedPoly run() {
    GradedPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_));
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

  GradedPoly expr() {
    GradedPoly acc = term();
    for (;;) {
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else return acc;
    }
  }

  GradedPoly term() {
    GradedPoly acc = factor();
    while (eat('*')) acc = poly_mul(acc, factor());
    return acc;
  }

  GradedPoly factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    GradedPoly base = atom();
    if (eat('^')) {
      skip();
      std::string digits = read_digits();
      if (digits.empty()) fail("expected exponent");
      unsigned long k = std::stoul(digits);
      GradedPoly r = GradedPoly::constant(ctx_, Rational(1));
      for (unsigned long i = 0; i < k; ++i) r = poly_mul(r, base);
      return r;
    }
    return base;
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  GradedPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      GradedPoly inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Rational value(read_digits());
      std::size_t save = pos_;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        skip();
        std::string den = read_digits();
        if (den.empty()) fail("expected denominator");
        Rational d(den);
        if (sgn(d) == 0) fail("zero denominator");
        value /= d;
      } else {
        pos_ = save;
      }
      return GradedPoly::constant(ctx_, value);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto idx = ctx_->find(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "'");
      }
      return GradedPoly::variable(ctx_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const Context& ctx_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

GradedPoly parse_poly(const Context& ctx, std::string_view text) { return Parser(ctx, text).run(); }

}  // namespace relform
