#include "doctest.h"

#include <vector>

#include "bonnet/diff_poly.hpp"
#include "bonnet/polynomial.hpp"
#include "bonnet/series.hpp"

using namespace bonnet;

namespace {

// Bernoulli numbers from sum_{k=0}^{n} C(n+1, k) B_k = 0.
std::vector<Rational> bernoulli(int n) {
  std::vector<Rational> b(static_cast<std::size_t>(n + 1), Rational(0));
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Rational acc(0);
    Rational binom(1);  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      acc += binom * b[static_cast<std::size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[static_cast<std::size_t>(m)] = -acc / (m + 1);
  }
  return b;
}

Rational factorial(int n) {
  Rational f(1);
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

TEST_CASE("parse_rational reads fractions and decimals exactly") {
  CHECK(parse_rational("0.3") == Rational(3, 10));
  CHECK(parse_rational("-7/4") == Rational(-7, 4));
  CHECK(parse_rational("1.25e-2") == Rational(1, 80));
  CHECK(parse_rational("12") == 12);
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
}

TEST_CASE("coth Laurent coefficients match the Bernoulli numbers") {
  const int terms = 8;
  const auto coth = coth_laurent(terms);
  const auto b = bernoulli(2 * terms);
  CHECK(coth.valuation() == -1);
  CHECK(coth.order() == 2 * terms - 1);
  for (int n = 0; n < terms; ++n) {
    Rational expected = b[static_cast<std::size_t>(2 * n)] / factorial(2 * n);
    for (int k = 0; k < 2 * n; ++k) expected *= 2;
    CHECK(coth.coefficient(2 * n - 1) == expected);
    CHECK(coth.coefficient(2 * n) == 0);
  }
  CHECK_THROWS_AS(coth_laurent(1), SeriesError);
}

TEST_CASE("elementary series satisfy their defining identities") {
  const int w = 14;
  const auto e = exp_series(w);
  for (int k = 0; k < w; ++k) CHECK(e.coefficient(k) == Rational(1) / factorial(k));
  const auto s = sinh_series(w), c = cosh_series(w);
  const auto one = Series::constant(Rational(1), w, "y");
  CHECK((c * c - s * s).agrees_with(one));
  CHECK(diff(s).agrees_with(c));
  const auto t = tanh_series(w);
  CHECK(diff(t).agrees_with(one - t * t));
}

TEST_CASE("window bookkeeping") {
  const Series a({Rational(1), Rational(2)}, -1);       // x^-1 + 2 + O(x)
  const Series b({Rational(3), Rational(0), Rational(1)}, 0);  // 3 + x^2 + O(x^3)
  CHECK((a + b).order() == 1);
  CHECK((a * b).order() == std::min(-1 + 3, 0 + 1));
  CHECK((a * b).coefficient(-1) == 3);
  CHECK((a * b).coefficient(0) == 6);
  CHECK(diff(b).order() == 2);
  CHECK_THROWS_AS((a * b).coefficient(1), SeriesError);
  const auto q = b / a;
  CHECK(q.valuation() == 1);
  CHECK(q.window() == 2);
  CHECK((q * a).agrees_with(b));
  CHECK_THROWS_AS(a + Series::constant(Rational(1), 3, "y"), SeriesError);
  CHECK_THROWS_AS(integrate(a), SeriesError);
}

TEST_CASE("geometric series and composition") {
  const int w = 10;
  const auto one = Series::constant(Rational(1), w);
  const auto x = Series::monomial(Rational(1), 1, w);
  const auto g = one / (one - x);
  for (int k = 0; k < w; ++k) CHECK(g.coefficient(k) == 1);
  // exp(2x) = exp(x)^2
  const auto e = exp_series(w);
  const auto e2 = compose(e, x * Rational(2));
  CHECK(e2.agrees_with(pow(compose(e, x), 2)));
  CHECK(pow(g, 0).agrees_with(one));
  CHECK((pow(g, -1) * g).agrees_with(one));
  CHECK(integrate(diff(g), Rational(1)).agrees_with(g));
}

TEST_CASE("differential polynomial calculus") {
  const auto u = DiffPolynomial::derivative_of_unknown(0, 12);
  const auto u1 = DiffPolynomial::derivative_of_unknown(1, 12);
  const auto p = u * u1;  // (u^2/2)'
  const auto x = Series::monomial(Rational(1), 1, 12);
  const auto s = exp_series(12, "chi");
  CHECK(p.derivative().evaluate(s).agrees_with(diff(p.evaluate(s))));
  CHECK(p.partial(0).evaluate(s).agrees_with(diff(s)));
  CHECK(p.partial(1).evaluate(s).agrees_with(s));
  CHECK(p.differential_order() == 1);
  CHECK((x * p).evaluate(s).agrees_with(x * s * s));
}

TEST_CASE("integer root splitting") {
  // 2(i+1)(i-1)(i-2)
  const auto p = Rational(2) * (Polynomial::linear(Rational(1)) * Polynomial::linear(Rational(-1)) *
                                Polynomial::linear(Rational(-2)));
  const auto split = split_integer_roots(p);
  CHECK(split.roots == std::vector<int>{-1, 1, 2});
  CHECK(split.remainder.degree() == 0);
  CHECK(falling_factorial(Rational(-1), 2)(Rational(3)) == 2);
  CHECK(p.to_string() == "2*i^3 - 4*i^2 - 2*i + 4");
}

TEST_CASE("series printing") {
  const Series s({Rational(1), Rational(-1, 2), Rational(0), Rational(3)}, -1);
  CHECK(to_string(s) == "chi^-1 - 1/2 + 3*chi^2 + O(chi^3)");
  CHECK(to_string(Series::zero(4)) == "0 + O(chi^4)");
}
