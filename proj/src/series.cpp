#include "bonnet/series.hpp"

#include <cctype>

namespace bonnet {

namespace {

Rational pow10(int e) {
  Rational r(1);
  for (int i = 0; i < std::abs(e); ++i) r *= 10;
  return e < 0 ? Rational(1) / r : r;
}

boost::multiprecision::cpp_int parse_integer(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    ++i;
  }
  if (i == text.size()) throw std::invalid_argument("malformed integer '" + text + "'");
  boost::multiprecision::cpp_int value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw std::invalid_argument("malformed integer '" + text + "'");
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  }
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
    return Rational(parse_integer(text.substr(0, slash)), den);
  }

  int exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
    exponent = static_cast<int>(parse_integer(text.substr(e + 1)));
    text = text.substr(0, e);
  }
  if (const auto dot = text.find('.'); dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    text = text.substr(0, dot) + frac;
    exponent -= static_cast<int>(frac.size());
    if (text.empty() || text == "-" || text == "+") {
      throw std::invalid_argument("malformed decimal '" + raw + "'");
    }
  }
  return Rational(parse_integer(text)) * pow10(exponent);
}

std::string to_string(const Rational& value) { return value.str(); }

std::string to_string(const Series& s) {
  std::string out;
  for (int e = s.valuation(); e < s.order(); ++e) {
    const Rational c = s.coefficient(e);
    if (c == 0) continue;
    const bool negative = c < 0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const Rational mag = negative ? Rational(-c) : c;
    const bool bare = e != 0 && mag == 1;
    if (!bare) out += to_string(mag);
    if (e != 0) {
      if (!bare) out += "*";
      out += s.tag();
      if (e != 1) out += "^" + std::to_string(e);
    }
  }
  if (out.empty()) out = "0";
  return out + " + O(" + s.tag() + "^" + std::to_string(s.order()) + ")";
}

namespace {

Rational factorial(int n) {
  Rational r(1);
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Coefficients 1/k! for k of the requested parity (or all when parity < 0).
Series factorial_series(int window, const std::string& tag, int parity, int shift = 0) {
  std::vector<Rational> c(static_cast<std::size_t>(std::max(window, 0)), Rational(0));
  for (int k = 0; k < window; ++k) {
    const int n = k + shift;
    if (parity < 0 || n % 2 == parity) c[k] = Rational(1) / factorial(n);
  }
  return Series(std::move(c), 0, tag);
}

}  // namespace

Series exp_series(int window, const std::string& tag) { return factorial_series(window, tag, -1); }

Series sinh_series(int window, const std::string& tag) { return factorial_series(window, tag, 1); }

Series cosh_series(int window, const std::string& tag) { return factorial_series(window, tag, 0); }

Series tanh_series(int window, const std::string& tag) {
  // sinh / cosh loses nothing: cosh has valuation 0.
  return sinh_series(window, tag) / cosh_series(window, tag);
}

Series y_coth_series(int window, const std::string& tag) {
  // sinh(y)/y = sum y^{2k}/(2k+1)!
  std::vector<Rational> c(static_cast<std::size_t>(std::max(window, 0)), Rational(0));
  for (int k = 0; k < window; k += 2) c[k] = Rational(1) / factorial(k + 1);
  const Series sinh_over_y(std::move(c), 0, tag);
  return cosh_series(window, tag) / sinh_over_y;
}

Series coth_laurent(int order, const std::string& tag) {
  if (order < 2) throw SeriesError("coth_laurent needs at least two terms (order >= 2)");
  return y_coth_series(2 * order, tag).shifted(-1);
}

}  // namespace bonnet
