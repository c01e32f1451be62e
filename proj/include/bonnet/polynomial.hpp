#pragma once

#include <string>
#include <vector>

#include "bonnet/series.hpp"

namespace bonnet {

/// Dense univariate polynomial with exact rational coefficients;
/// coefficients()[k] multiplies i^k.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  static Polynomial constant(const Rational& c) { return Polynomial({c}); }
  /// i + shift
  static Polynomial linear(const Rational& shift) { return Polynomial({shift, Rational(1)}); }

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  Rational operator()(const Rational& x) const;

  friend Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator*(const Rational& k, const Polynomial& p);
  friend bool operator==(const Polynomial& lhs, const Polynomial& rhs) {
    return lhs.coeffs_ == rhs.coeffs_;
  }

  /// Divides by (i - root); the remainder must vanish.
  Polynomial deflate(const Rational& root) const;

  std::string to_string(const std::string& variable = "i") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Falling factorial (x)(x-1)...(x-k+1) with x = i + shift, as a polynomial in i.
Polynomial falling_factorial(const Rational& shift, int k);

/// Integer roots with multiplicity, and whatever is left over.
struct IntegerRootSplit {
  std::vector<int> roots;  // sorted, repeated according to multiplicity
  Polynomial remainder;    // no integer roots; degree 0 when everything split
};

IntegerRootSplit split_integer_roots(const Polynomial& p);

}  // namespace bonnet
