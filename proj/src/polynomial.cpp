#include "bonnet/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace bonnet {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial operator+(const Polynomial& lhs, const Polynomial& rhs) {
  std::vector<Rational> c(std::max(lhs.coeffs_.size(), rhs.coeffs_.size()), Rational(0));
  for (std::size_t k = 0; k < lhs.coeffs_.size(); ++k) c[k] += lhs.coeffs_[k];
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) c[k] += rhs.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  std::vector<Rational> c(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(const Rational& k, const Polynomial& p) {
  std::vector<Rational> c = p.coeffs_;
  for (auto& x : c) x *= k;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::deflate(const Rational& root) const {
  if (degree() < 1) throw std::invalid_argument("cannot deflate a constant polynomial");
  // Synthetic division from the top coefficient down.
  std::vector<Rational> q(coeffs_.size() - 1, Rational(0));
  Rational carry(0);
  for (int k = degree(); k >= 1; --k) {
    carry = coeffs_[k] + carry * root;
    q[k - 1] = carry;
  }
  if (coeffs_[0] + carry * root != 0) {
    throw std::invalid_argument("deflate: " + bonnet::to_string(root) + " is not a root");
  }
  return Polynomial(std::move(q));
}

std::string Polynomial::to_string(const std::string& variable) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[k];
    if (c == 0) continue;
    Rational mag = c < 0 ? Rational(-c) : c;
    out << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    if (mag != 1 || k == 0) out << bonnet::to_string(mag);
    if (k > 0) {
      if (mag != 1) out << "*";
      out << variable;
      if (k > 1) out << "^" << k;
    }
    first = false;
  }
  return out.str();
}

Polynomial falling_factorial(const Rational& shift, int k) {
  Polynomial p = Polynomial::constant(Rational(1));
  for (int m = 0; m < k; ++m) p = p * Polynomial::linear(shift - m);
  return p;
}

namespace {

using boost::multiprecision::cpp_int;

// Candidate roots are capped in magnitude; larger Fuchs indices are not of
// interest and would make the search unbounded for big constant terms.
constexpr int kMaxRootMagnitude = 10000;

std::vector<cpp_int> divisors(cpp_int n) {
  if (n < 0) n = -n;
  std::vector<cpp_int> out;
  for (cpp_int d = 1; d <= kMaxRootMagnitude && d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

}  // namespace

IntegerRootSplit split_integer_roots(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("the zero polynomial has every integer as a root");
  IntegerRootSplit split;
  Polynomial rest = p;

  while (rest.degree() >= 1 && rest.coefficients().front() == 0) {
    split.roots.push_back(0);
    rest = rest.deflate(Rational(0));
  }

  // Integer roots divide the constant term of the primitive integer form.
  while (rest.degree() >= 1) {
    cpp_int lcm_den = 1;
    for (const auto& c : rest.coefficients()) {
      lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(c));
    }
    cpp_int content = 0;
    for (const auto& c : rest.coefficients()) {
      content = boost::multiprecision::gcd(content,
                                           boost::multiprecision::numerator(c * Rational(lcm_den)));
    }
    const cpp_int constant =
        boost::multiprecision::numerator(rest.coefficients().front() * Rational(lcm_den)) / content;
    bool found = false;
    for (const auto& d : divisors(constant)) {
      for (const cpp_int& candidate : {cpp_int(d), cpp_int(-d)}) {
        if (rest(Rational(candidate)) == 0) {
          split.roots.push_back(static_cast<int>(candidate));
          rest = rest.deflate(Rational(candidate));
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) break;
  }
  std::sort(split.roots.begin(), split.roots.end());
  split.remainder = rest;
  return split;
}

}  // namespace bonnet
