#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bonnet {

/// Exact rational number in lowest terms with arbitrary-precision parts.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a plain decimal such as "0.3" or "-1.25e-2"
/// into an exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

/// Formats a rational as "p" or "p/q".
std::string to_string(const Rational& value);

class SeriesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kDefaultSeriesWindow = 12;
inline constexpr int kExactOrder = std::numeric_limits<int>::max() / 4;

/// Truncated Laurent series  sum_{k} c_k x^{v+k} + O(x^order)  in one variable.
///
/// Every series carries the exponent of its O-term, so results of arithmetic
/// keep track of how far they can be trusted.  The zero series has no
/// coefficients and valuation() == order().
template <class Scalar>
class TruncatedSeries {
 public:
  TruncatedSeries() = default;

  /// coefficients[k] multiplies x^(base_exponent + k); the O-term sits right
  /// after the last coefficient.
  TruncatedSeries(std::vector<Scalar> coefficients, int base_exponent,
                  std::string tag = "chi")
      : valuation_(base_exponent),
        order_(base_exponent + static_cast<int>(coefficients.size())),
        coeffs_(std::move(coefficients)),
        tag_(std::move(tag)) {
    normalize();
  }

  static TruncatedSeries zero(int order, std::string tag = "chi") {
    TruncatedSeries s;
    s.valuation_ = order;
    s.order_ = order;
    s.tag_ = std::move(tag);
    return s;
  }

  /// value + O(x^window).
  static TruncatedSeries constant(const Scalar& value, int window = kDefaultSeriesWindow,
                                  std::string tag = "chi") {
    return monomial(value, 0, window, std::move(tag));
  }

  /// value * x^exponent, with `window` known coefficients starting there.
  static TruncatedSeries monomial(const Scalar& value, int exponent,
                                  int window = kDefaultSeriesWindow, std::string tag = "chi") {
    std::vector<Scalar> c(static_cast<std::size_t>(std::max(window, 0)), Scalar(0));
    if (!c.empty()) c[0] = value;
    return TruncatedSeries(std::move(c), exponent, std::move(tag));
  }

  int valuation() const { return valuation_; }
  int order() const { return order_; }
  int window() const { return order_ - valuation_; }
  const std::string& tag() const { return tag_; }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  const Scalar& leading() const {
    if (is_zero()) throw SeriesError("leading coefficient of the zero series");
    return coeffs_.front();
  }

  /// Coefficient of x^exponent.  Throws if the exponent is not covered by the
  /// reliable window.
  Scalar coefficient(int exponent) const {
    if (exponent >= order_) {
      throw SeriesError("coefficient of x^" + std::to_string(exponent) +
                        " lies beyond O(x^" + std::to_string(order_) + ")");
    }
    if (exponent < valuation_) return Scalar(0);
    return coeffs_[static_cast<std::size_t>(exponent - valuation_)];
  }

  /// Drops every term at or above x^new_order.
  TruncatedSeries truncated(int new_order) const {
    if (new_order >= order_) return *this;
    if (new_order <= valuation_) return zero(new_order, tag_);
    std::vector<Scalar> c(coeffs_.begin(), coeffs_.begin() + (new_order - valuation_));
    return TruncatedSeries(std::move(c), valuation_, tag_);
  }

  /// Multiplication by x^k.
  TruncatedSeries shifted(int k) const {
    TruncatedSeries s = *this;
    s.valuation_ += k;
    s.order_ += k;
    return s;
  }

  /// Substitutes x -> factor * x.
  TruncatedSeries scaled(const Scalar& factor) const {
    TruncatedSeries s = *this;
    if (s.is_zero()) return s;
    Scalar p = power(factor, valuation_);
    for (auto& c : s.coeffs_) {
      c *= p;
      p *= factor;
    }
    s.normalize();
    return s;
  }

  TruncatedSeries operator-() const {
    TruncatedSeries s = *this;
    for (auto& c : s.coeffs_) c = -c;
    return s;
  }

  TruncatedSeries& operator*=(const Scalar& k) {
    for (auto& c : coeffs_) c *= k;
    normalize();
    return *this;
  }

  friend TruncatedSeries operator*(TruncatedSeries s, const Scalar& k) { return s *= k; }
  friend TruncatedSeries operator*(const Scalar& k, TruncatedSeries s) { return s *= k; }

  friend TruncatedSeries operator+(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
    check_tags(lhs, rhs);
    const int order = std::min(lhs.order_, rhs.order_);
    const int low = std::min(lhs.valuation_, rhs.valuation_);
    if (order <= low) return zero(order, lhs.tag_);
    std::vector<Scalar> c(static_cast<std::size_t>(order - low), Scalar(0));
    for (int e = low; e < order; ++e) {
      c[static_cast<std::size_t>(e - low)] = lhs.coefficient(e) + rhs.coefficient(e);
    }
    return TruncatedSeries(std::move(c), low, lhs.tag_);
  }

  friend TruncatedSeries operator-(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
    return lhs + (-rhs);
  }

  friend TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
    check_tags(lhs, rhs);
    const int order = std::min(lhs.valuation_ + rhs.order_, rhs.valuation_ + lhs.order_);
    const int low = lhs.valuation_ + rhs.valuation_;
    if (lhs.is_zero() || rhs.is_zero() || order <= low) return zero(order, lhs.tag_);
    const int n = order - low;
    std::vector<Scalar> c(static_cast<std::size_t>(n), Scalar(0));
    const int nl = static_cast<int>(lhs.coeffs_.size());
    const int nr = static_cast<int>(rhs.coeffs_.size());
    for (int i = 0; i < std::min(n, nl); ++i) {
      if (lhs.coeffs_[i] == 0) continue;
      for (int j = 0; j < std::min(n - i, nr); ++j) {
        c[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
      }
    }
    return TruncatedSeries(std::move(c), low, lhs.tag_);
  }

  friend TruncatedSeries operator/(const TruncatedSeries& num, const TruncatedSeries& den) {
    check_tags(num, den);
    if (den.is_zero()) throw SeriesError("series division by the zero series");
    const int low = num.valuation_ - den.valuation_;
    const int n = std::min(num.window(), den.window());
    if (num.is_zero()) return zero(num.order_ - den.valuation_, num.tag_);
    std::vector<Scalar> q(static_cast<std::size_t>(n), Scalar(0));
    const Scalar& d0 = den.coeffs_[0];
    for (int k = 0; k < n; ++k) {
      Scalar acc = k < static_cast<int>(num.coeffs_.size()) ? num.coeffs_[k] : Scalar(0);
      for (int j = 1; j <= k && j < static_cast<int>(den.coeffs_.size()); ++j) {
        acc -= den.coeffs_[j] * q[k - j];
      }
      q[k] = acc / d0;
    }
    return TruncatedSeries(std::move(q), low, num.tag_);
  }

  TruncatedSeries& operator+=(const TruncatedSeries& rhs) { return *this = *this + rhs; }
  TruncatedSeries& operator-=(const TruncatedSeries& rhs) { return *this = *this - rhs; }
  TruncatedSeries& operator*=(const TruncatedSeries& rhs) { return *this = *this * rhs; }

  /// Exact structural equality: same tag, window and coefficients.
  friend bool operator==(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
    return lhs.tag_ == rhs.tag_ && lhs.valuation_ == rhs.valuation_ &&
           lhs.order_ == rhs.order_ && lhs.coeffs_ == rhs.coeffs_;
  }

  /// True when both series agree on every exponent below min(order).
  bool agrees_with(const TruncatedSeries& other) const {
    check_tags(*this, other);
    const int order = std::min(order_, other.order_);
    const int low = std::min(valuation_, other.valuation_);
    for (int e = low; e < order; ++e) {
      if (coefficient(e) != other.coefficient(e)) return false;
    }
    return true;
  }

  static Scalar power(const Scalar& base, int exponent) {
    if (exponent < 0) return Scalar(1) / power(base, -exponent);
    Scalar r(1);
    for (int i = 0; i < exponent; ++i) r *= base;
    return r;
  }

 private:
  static void check_tags(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.tag_ != b.tag_) {
      throw SeriesError("variable tag mismatch: '" + a.tag_ + "' vs '" + b.tag_ + "'");
    }
  }

  void normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      valuation_ = order_;
      return;
    }
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
      valuation_ += static_cast<int>(lead);
    }
  }

  int valuation_ = kExactOrder;
  int order_ = kExactOrder;
  std::vector<Scalar> coeffs_;
  std::string tag_ = "chi";
};

using Series = TruncatedSeries<Rational>;

// ---------------------------------------------------------------------------
// Calculus on series.

template <class Scalar>
TruncatedSeries<Scalar> diff(const TruncatedSeries<Scalar>& s) {
  if (s.is_zero()) return TruncatedSeries<Scalar>::zero(s.order() - 1, s.tag());
  std::vector<Scalar> c;
  c.reserve(s.coefficients().size());
  for (std::size_t k = 0; k < s.coefficients().size(); ++k) {
    c.push_back(s.coefficients()[k] * Scalar(s.valuation() + static_cast<int>(k)));
  }
  return TruncatedSeries<Scalar>(std::move(c), s.valuation() - 1, s.tag());
}

/// Antiderivative whose constant term equals `constant`.  A nonzero x^-1 term
/// would produce a logarithm and is rejected.
template <class Scalar>
TruncatedSeries<Scalar> integrate(const TruncatedSeries<Scalar>& s,
                                  const Scalar& constant = Scalar(0)) {
  if (s.order() <= -1) throw SeriesError("cannot integrate: window ends before x^-1");
  if (s.coefficient(-1) != 0) throw SeriesError("cannot integrate a x^-1 term");
  const int low = std::min(s.valuation() + 1, 0);
  const int order = s.order() + 1;
  std::vector<Scalar> c(static_cast<std::size_t>(order - low), Scalar(0));
  for (int e = s.valuation(); e < s.order(); ++e) {
    if (e == -1) continue;
    c[static_cast<std::size_t>(e + 1 - low)] = s.coefficient(e) / Scalar(e + 1);
  }
  c[static_cast<std::size_t>(-low)] = constant;
  return TruncatedSeries<Scalar>(std::move(c), low, s.tag());
}

/// s'/s.
template <class Scalar>
TruncatedSeries<Scalar> log_diff(const TruncatedSeries<Scalar>& s) {
  if (s.is_zero()) throw SeriesError("logarithmic derivative of the zero series");
  return diff(s) / s;
}

template <class Scalar>
TruncatedSeries<Scalar> pow(const TruncatedSeries<Scalar>& s, int n) {
  if (n < 0) return TruncatedSeries<Scalar>::constant(Scalar(1), s.window(), s.tag()) / pow(s, -n);
  if (n == 0) return TruncatedSeries<Scalar>::constant(Scalar(1), s.window(), s.tag());
  auto r = s;
  for (int i = 1; i < n; ++i) r = r * s;
  return r;
}

/// outer(inner) for a power series `outer` (valuation >= 0, read as a series in
/// its own variable) and an `inner` series without constant term.
template <class Scalar>
TruncatedSeries<Scalar> compose(const TruncatedSeries<Scalar>& outer,
                                const TruncatedSeries<Scalar>& inner) {
  if (outer.valuation() < 0) throw SeriesError("compose: outer series has negative powers");
  if (!inner.is_zero() && inner.valuation() < 1) {
    throw SeriesError("compose: inner series must vanish at the origin");
  }
  const int inner_val = inner.is_zero() ? inner.order() : inner.valuation();
  const int cap = inner_val * outer.order();
  auto acc = TruncatedSeries<Scalar>::zero(cap, inner.tag());
  for (int e = outer.order() - 1; e >= 0; --e) {
    acc = acc * inner + TruncatedSeries<Scalar>::constant(outer.coefficient(e), cap, inner.tag());
  }
  return acc.truncated(cap);
}

// ---------------------------------------------------------------------------
// Elementary expansions about the origin, exact over the rationals.

/// exp(y) to O(y^window).
Series exp_series(int window = kDefaultSeriesWindow, const std::string& tag = "y");
/// sinh(y) to O(y^window).
Series sinh_series(int window = kDefaultSeriesWindow, const std::string& tag = "y");
/// cosh(y) to O(y^window).
Series cosh_series(int window = kDefaultSeriesWindow, const std::string& tag = "y");
/// tanh(y) to O(y^window).
Series tanh_series(int window = kDefaultSeriesWindow, const std::string& tag = "y");
/// y*coth(y), an even power series, to O(y^window).
Series y_coth_series(int window = kDefaultSeriesWindow, const std::string& tag = "y");

/// "c0 + c1*chi + ... + O(chi^n)" in ascending powers.
std::string to_string(const Series& s);

/// Laurent expansion of coth(y) about y = 0 holding `order` nonzero terms:
/// y^-1 + y/3 - y^3/45 + ... + O(y^(2*order-1)).  Requires order >= 2.
Series coth_laurent(int order, const std::string& tag = "y");

}  // namespace bonnet
