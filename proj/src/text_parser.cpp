#include "hyperdet/text_parser.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <string>
#include <tuple>

#include "hyperdet/error.hpp"

namespace hyperdet {

namespace {

// Sparse real polynomial keyed by (t, x, y) exponents.
using Sparse = std::map<std::tuple<int, int, int>, double>;

Sparse constant(double c) { return Sparse{{{0, 0, 0}, c}}; }

Sparse add(Sparse a, const Sparse& b, double sign) {
  for (const auto& [e, c] : b) a[e] += sign * c;
  return a;
}

Sparse mul(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      const auto e = std::make_tuple(std::get<0>(ea) + std::get<0>(eb), std::get<1>(ea) + std::get<1>(eb),
                                     std::get<2>(ea) + std::get<2>(eb));
      out[e] += ca * cb;
    }
  }
  return out;
}

bool is_constant(const Sparse& a) {
  for (const auto& [e, c] : a) {
    if (e != std::make_tuple(0, 0, 0) && c != 0.0) return false;
  }
  return true;
}

double constant_value(const Sparse& a) {
  const auto it = a.find({0, 0, 0});
  return it == a.end() ? 0.0 : it->second;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Sparse parse() {
    Sparse value = expression();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected character");
    return value;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  // expression := ['+'|'-'] term (('+'|'-') term)*
  Sparse expression() {
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = (src_[pos_++] == '-') ? -1.0 : 1.0;
    Sparse acc = add(Sparse{}, term(), sign);
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      acc = add(std::move(acc), term(), c == '-' ? -1.0 : 1.0);
    }
  }

  bool starts_factor(char c) const {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 't' || c == 'x' ||
           c == 'y';
  }

  // term := power (('*'|'/'|juxtaposition) power)*
  Sparse term() {
    Sparse acc = power();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        acc = mul(acc, power());
      } else if (c == '/') {
        ++pos_;
        const Sparse divisor = power();
        if (!is_constant(divisor)) fail("division by a non-constant");
        const double v = constant_value(divisor);
        if (v == 0.0) fail("division by zero");
        acc = mul(acc, constant(1.0 / v));
      } else if (starts_factor(c)) {
        acc = mul(acc, power());
      } else {
        return acc;
      }
    }
  }

  // power := factor ['^' integer]
  Sparse power() {
    Sparse base = factor();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int exponent = 0;
    std::from_chars(src_.data() + start, src_.data() + pos_, exponent);
    Sparse out = constant(1.0);
    for (int i = 0; i < exponent; ++i) out = mul(out, base);
    return out;
  }

  Sparse factor() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Sparse inner = expression();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == 't' || c == 'x' || c == 'y') {
      ++pos_;
      return Sparse{{{c == 't', c == 'x', c == 'y'}, 1.0}};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(number());
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return value;
  }
};

}  // namespace

TernaryForm parse_polynomial_text(std::string_view src) {
  const Sparse poly = Parser(src).parse();
  int degree = -1;
  for (const auto& [e, c] : poly) {
    if (c == 0.0) continue;
    const int total = std::get<0>(e) + std::get<1>(e) + std::get<2>(e);
    if (degree < 0) {
      degree = total;
    } else if (total != degree) {
      throw Error(ErrorCode::InhomogeneousInput,
                  "terms of degree " + std::to_string(degree) + " and " + std::to_string(total));
    }
  }
  if (degree < 0) throw Error(ErrorCode::ParseError, "polynomial is identically zero");
  TernaryForm f(degree);
  for (const auto& [e, c] : poly) {
    if (c == 0.0) continue;
    f.coeff({std::get<0>(e), std::get<1>(e), std::get<2>(e)}) = c;
  }
  return f;
}

}  // namespace hyperdet
