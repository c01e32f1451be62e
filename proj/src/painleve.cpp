#include "bonnet/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bonnet::painleve {

namespace {

Rational falling_value(int p, int k) {
  Rational r(1);
  for (int m = 0; m < k; ++m) r *= (p - m);
  return r;
}

bool all_zero(const std::map<int, Rational>& values) {
  return std::all_of(values.begin(), values.end(), [](const auto& kv) { return kv.second == 0; });
}

Series one_like(const Series& s) { return Series::constant(Rational(1), s.order(), s.tag()); }

// Rational roots of a polynomial with small numerators and denominators.
std::vector<Rational> small_rational_roots(const Polynomial& p) {
  std::vector<Rational> roots;
  if (p.degree() < 1) return roots;
  if (p.degree() == 1) {
    roots.push_back(-p.coefficients()[0] / p.coefficients()[1]);
    return roots;
  }
  using boost::multiprecision::cpp_int;
  cpp_int lcm_den = 1;
  for (const auto& c : p.coefficients()) {
    lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(c));
  }
  const auto num0 = boost::multiprecision::abs(
      boost::multiprecision::numerator(p.coefficients().front() * Rational(lcm_den)));
  const auto numn = boost::multiprecision::abs(
      boost::multiprecision::numerator(p.coefficients().back() * Rational(lcm_den)));
  constexpr int kCap = 1000;
  for (cpp_int q = 1; q <= numn && q <= kCap; ++q) {
    if (numn % q != 0) continue;
    for (cpp_int r = 1; r <= num0 && r <= kCap; ++r) {
      if (num0 % r != 0) continue;
      for (int sign : {1, -1}) {
        const Rational cand = Rational(sign * r, q);
        if (p(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end()) {
          roots.push_back(cand);
        }
      }
    }
  }
  return roots;
}

}  // namespace

std::string to_string(Family family) {
  return family == Family::h_pole ? "h-family" : "g-family";
}

std::string LeadingOrder::describe() const {
  std::ostringstream out;
  out << "(" << exponent << ", " << (coefficient ? bonnet::to_string(*coefficient) : "arbitrary")
      << ")";
  return out.str();
}

OdeFamilyCoefficients RestrictedCoefficients::to_family() const {
  const Series half_f1 = f1 * Rational(1, 2);
  return {f1, -log_diff(f1), half_f1 * half_f1 * half_f1 * g4, f4, c2};
}

// ---------------------------------------------------------------------------

std::vector<LeadingOrder> dominant_balance(const DiffPolynomial& equation, int exponent) {
  std::optional<int> min_weight;
  std::map<int, Rational> by_degree;
  for (const auto& [e, c] : equation.terms()) {
    if (c.is_zero()) continue;
    Rational factor = c.leading();
    int weight = c.valuation();
    int degree = 0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      const Rational f = falling_value(exponent, static_cast<int>(k));
      for (int m = 0; m < e[k]; ++m) factor *= f;
      weight += e[k] * (exponent - static_cast<int>(k));
      degree += e[k];
    }
    if (factor == 0) continue;
    if (!min_weight || weight < *min_weight) {
      min_weight = weight;
      by_degree.clear();
    }
    if (weight == *min_weight) by_degree[degree] += factor;
  }
  if (!min_weight) return {};

  std::vector<Rational> coeffs;
  for (const auto& [degree, value] : by_degree) {
    if (static_cast<int>(coeffs.size()) <= degree) coeffs.resize(degree + 1, Rational(0));
    coeffs[degree] += value;
  }
  Polynomial balance(coeffs);
  if (balance.is_zero()) return {LeadingOrder{exponent, std::nullopt}};
  // Strip the u0 = 0 root.
  while (balance.degree() >= 1 && balance.coefficients().front() == 0) {
    balance = balance.deflate(Rational(0));
  }
  std::vector<LeadingOrder> out;
  for (const auto& r : small_rational_roots(balance)) out.push_back({exponent, r});
  return out;
}

Linearization linearize(const DiffPolynomial& equation, const Series& base, int exponent) {
  const int order = equation.differential_order();
  std::vector<Series> parts;
  std::optional<int> shift;
  for (int k = 0; k <= order; ++k) {
    parts.push_back(equation.partial(k).evaluate(base));
    const Series& c = parts.back();
    if (c.is_zero()) continue;
    const int s = c.valuation() - k;
    if (!shift || s < *shift) shift = s;
  }
  if (!shift) throw PainleveError("linearised operator vanishes on the available window");

  Polynomial indicial;
  for (int k = 0; k <= order; ++k) {
    const Series& c = parts[static_cast<std::size_t>(k)];
    if (c.is_zero()) {
      if (c.order() - k <= *shift) {
        throw PainleveError("window too short to resolve the linearised operator");
      }
      continue;
    }
    if (c.valuation() - k == *shift) {
      indicial = indicial + c.leading() * falling_factorial(Rational(exponent), k);
    }
  }
  return {indicial, *shift};
}

FuchsIndices classify_indices(const Polynomial& indicial) {
  FuchsIndices out;
  out.indicial_polynomial = indicial;
  if (indicial.is_zero()) {
    out.all_integer = false;
    out.diagnostic = "indicial polynomial vanishes identically";
    return out;
  }
  const auto split = split_integer_roots(indicial);
  out.indices = split.roots;
  out.all_integer = split.remainder.degree() <= 0;
  out.repeated = std::adjacent_find(out.indices.begin(), out.indices.end()) != out.indices.end();
  std::ostringstream diag;
  if (!out.all_integer) {
    diag << "non-integer indicial roots: factor " << split.remainder.to_string() << " remains";
  }
  if (out.repeated) {
    if (!diag.str().empty()) diag << "; ";
    diag << "repeated indicial root";
  }
  out.diagnostic = diag.str();
  return out;
}

LaurentExpansion expand_laurent(const DiffPolynomial& equation, const Series& leading_part,
                                int exponent, int first_step, int last_step, int order_shift,
                                const std::map<int, Rational>& free_values) {
  const int low = std::min(leading_part.is_zero() ? exponent : leading_part.valuation(), exponent);
  std::vector<Rational> coeffs;
  for (int e = low; e < exponent + first_step; ++e) coeffs.push_back(leading_part.coefficient(e));

  LaurentExpansion out;
  for (int j = first_step; j <= last_step; ++j) {
    const int target = exponent + j + order_shift;
    coeffs.push_back(Rational(0));
    const Rational r = equation.evaluate(Series(coeffs, low, leading_part.tag())).coefficient(target);
    coeffs.back() = Rational(1);
    const Rational slope =
        equation.evaluate(Series(coeffs, low, leading_part.tag())).coefficient(target) - r;
    out.slopes[j] = slope;
    if (slope == 0) {
      out.compatibility[j] = r;
      const auto it = free_values.find(j);
      coeffs.back() = it == free_values.end() ? Rational(0) : it->second;
    } else {
      coeffs.back() = -r / slope;
    }
  }
  out.series = Series(coeffs, low, leading_part.tag());
  return out;
}

// ---------------------------------------------------------------------------

DiffPolynomial h_equation(const OdeFamilyCoefficients& c) {
  const int w = c.f1.order();
  const std::string& tag = c.f1.tag();
  const auto u = DiffPolynomial::derivative_of_unknown(0, w, tag);
  const auto u1 = DiffPolynomial::derivative_of_unknown(1, w, tag);
  const auto u2 = DiffPolynomial::derivative_of_unknown(2, w, tag);
  const auto u3 = DiffPolynomial::derivative_of_unknown(3, w, tag);
  return u1 * u3 - u2 * u2 + c.f1 * (u1 * u1 * u1) + c.f2 * (u2 * u1) +
         c.f3 * (u * u * u1) - (c.c2 * c.f3) * u1 + c.f4 * (u1 * u1);
}

DiffPolynomial g_equation(const RestrictedCoefficients& c) {
  const int w = c.f1.order();
  const std::string& tag = c.f1.tag();
  const auto u = DiffPolynomial::derivative_of_unknown(0, w, tag);
  const auto u1 = DiffPolynomial::derivative_of_unknown(1, w, tag);
  const auto u2 = DiffPolynomial::derivative_of_unknown(2, w, tag);
  const Series a = Series::constant(Rational(8), w, tag) / (c.f1 * c.f1 * c.f1 * c.g4);
  const Series da = diff(a);
  const Series f1_log = log_diff(c.f1);

  // S = A N / g^3 + c^2 and g S' = B / g^3.
  const auto n = u * u2 - u1 * u1 - c.f1 * u - c.f4 * (u * u) - f1_log * (u * u1);
  const auto b = da * (n * u) + a * (n.derivative() * u) - Rational(3) * (a * (n * u1));
  const auto u3 = u * u * u;
  return b * b - Rational(4) * (a * (n * u3)) -
         (Rational(4) * c.c2) * DiffPolynomial::constant(Series::constant(Rational(1), w, tag)) *
             (u3 * u3);
}

Series s_from_g(const RestrictedCoefficients& c, const Series& g) {
  const Series one = one_like(c.f1);
  const Series a = Series::constant(Rational(8), c.f1.order(), c.f1.tag()) /
                   (c.f1 * c.f1 * c.f1 * c.g4);
  const Series dg = diff(g);
  const Series bracket = diff(log_diff(g)) / g - log_diff(c.f1) * dg / (g * g) - c.f4 / g -
                         c.f1 / (g * g);
  return a * bracket + Series::constant(c.c2, c.f1.order(), c.f1.tag());
}

LeadingOrder leading_order_h(const OdeFamilyCoefficients& coeffs) {
  if (coeffs.f1.is_zero() || coeffs.f1.valuation() != 0) {
    throw PainleveError("F1 vanishes at the expansion point");
  }
  const auto equation = h_equation(coeffs);
  for (int p = -1; p >= -4; --p) {
    const auto balances = dominant_balance(equation, p);
    if (!balances.empty()) return balances.front();
  }
  throw PainleveError("no movable pole balance for h");
}

FuchsIndices fuchs_indices_h(const OdeFamilyCoefficients& coeffs) {
  const auto lead = leading_order_h(coeffs);
  if (lead.arbitrary()) throw PainleveError("h-family leading coefficient is not determined");
  const auto base = Series::monomial(*lead.coefficient, lead.exponent, coeffs.f1.order(),
                                     coeffs.f1.tag());
  return classify_indices(linearize(h_equation(coeffs), base, lead.exponent).indicial);
}

LaurentExpansion h_laurent_series(const OdeFamilyCoefficients& coeffs, int window,
                                  const std::map<int, Rational>& free_values) {
  const auto lead = leading_order_h(coeffs);
  const auto equation = h_equation(coeffs);
  const auto base = Series::monomial(*lead.coefficient, lead.exponent, coeffs.f1.order(),
                                     coeffs.f1.tag());
  const auto lin = linearize(equation, base, lead.exponent);
  return expand_laurent(equation, Series({*lead.coefficient}, lead.exponent, coeffs.f1.tag()),
                        lead.exponent, 1, window - 1, lin.order_shift, free_values);
}

ResonanceReport resonance_conditions_h(const OdeFamilyCoefficients& c) {
  ResonanceReport report;
  report.family = Family::h_pole;
  report.leading = leading_order_h(c);
  report.fuchs = fuchs_indices_h(c);

  const auto expansion = h_laurent_series(c, std::min(c.f1.order(), 4));
  report.laurent_residuals = expansion.compatibility;

  const Series q1 = c.f1 * c.f2 + diff(c.f1);
  const Series q2 = c.f1 * c.f2 * c.f2 + Rational(2) * c.f3 - c.f1 * c.f4 + c.f1 * diff(c.f2);
  report.compatibility_residuals = {{1, q1}, {2, q2}};
  report.passed = q1.is_zero() && q2.is_zero() && all_zero(report.laurent_residuals);
  return report;
}

Series restricted_ode_residual(const RestrictedCoefficients& c, const Series& h) {
  const Series h1 = diff(h);
  const Series h2 = diff(h1);
  const Series half = c.f1 * Rational(1, 2);
  const Series c2 = Series::constant(c.c2, c.f1.order(), c.f1.tag());
  return diff(log_diff(h1)) + c.f1 * h1 +
         (c.f4 * h1 + half * half * half * c.g4 * (h * h - c2) - log_diff(c.f1) * h2) / h1;
}

RestrictedCoefficients restrict_ode(const OdeFamilyCoefficients& c) {
  if (c.f1.is_zero() || c.f1.valuation() != 0) {
    throw PainleveError("F1 vanishes at the expansion point; (log F1)' is undefined");
  }
  const Series lf = log_diff(c.f1);
  const Series two_over = Series::constant(Rational(2), c.f1.order(), c.f1.tag()) / c.f1;
  const Series g4 = two_over * two_over * (c.f4 + diff(lf) - lf * lf);
  return {c.f1, c.f4, g4, c.c2};
}

GFamilyExpansion g_laurent_series(const RestrictedCoefficients& coeffs, const Rational& h_at_pole,
                                  int window, const std::map<int, Rational>& free_values) {
  if (window < 5) throw PainleveError("g-family expansion needs a window of at least 5");
  const auto family = coeffs.to_family();
  const auto equation = h_equation(family);
  const Rational eta3 = family.f3.coefficient(0) * (h_at_pole * h_at_pole - coeffs.c2) / 6;
  if (eta3 == 0) {
    throw PainleveError("degenerate g-family: G4 or h^2 - c^2 vanishes at the expansion point");
  }
  const Series leading({h_at_pole, Rational(0), Rational(0), eta3}, 0, coeffs.f1.tag());
  constexpr int kExponent = 3;
  const auto lin = linearize(equation, leading, kExponent);
  GFamilyExpansion out;
  out.h_side = expand_laurent(equation, leading, kExponent, 1, window - 1 - kExponent,
                              lin.order_shift, free_values);
  out.h = out.h_side.series;
  const Series dh = diff(out.h);
  out.g = Series::constant(Rational(1), dh.window(), dh.tag()) / dh;
  return out;
}

LeadingOrder leading_order_g(const RestrictedCoefficients& coeffs) {
  const auto equation = g_equation(coeffs);
  for (int p = -1; p >= -4; --p) {
    const auto balances = dominant_balance(equation, p);
    if (!balances.empty()) return balances.front();
  }
  throw PainleveError("no movable pole balance for g");
}

namespace {

Rational regular_h_value(const Rational& c2) { return Rational(1) + c2; }

}  // namespace

FuchsIndices fuchs_indices_g(const RestrictedCoefficients& coeffs) {
  const auto lead = leading_order_g(coeffs);
  const auto expansion =
      g_laurent_series(coeffs, regular_h_value(coeffs.c2), coeffs.f1.order());
  return classify_indices(linearize(g_equation(coeffs), expansion.g, lead.exponent).indicial);
}

ResonanceReport resonance_conditions_g(const RestrictedCoefficients& coeffs) {
  ResonanceReport report;
  report.family = Family::g_double_pole;
  report.leading = leading_order_g(coeffs);
  report.fuchs = fuchs_indices_g(coeffs);
  const auto expansion = g_laurent_series(coeffs, regular_h_value(coeffs.c2),
                                          std::min(coeffs.f1.order(), 7));
  report.laurent_residuals = expansion.h_side.compatibility;
  const Series q2 = condition_g(coeffs.g4, coeffs.f1);
  report.compatibility_residuals = {{2, q2}};
  report.passed = q2.is_zero() && all_zero(report.laurent_residuals);
  return report;
}

Series condition_g(const Series& g4, const Series& f1) {
  if (g4.is_zero()) throw PainleveError("condition_g: G4 vanishes identically");
  const Series ratio = Rational(2) * diff(g4) / (f1 * g4);
  return diff(ratio * ratio + Rational(2) * g4);
}

// ---------------------------------------------------------------------------

Series g4_series_at_pole(const Rational& a, const Series& f1) {
  const Series phi = integrate(f1 * Rational(1, 2));
  const Series minus_two = Series::constant(Rational(-2), f1.order() + 2, f1.tag());
  if (a == 0) return minus_two / (phi * phi);
  // 2(4a)^2 (1 - coth^2 y) = 32a^2 - 2 (y coth y)^2 / phi^2   with y = 4a phi
  const Series ycoth = compose(y_coth_series(f1.order() + 2), phi * (4 * a));
  return Series::constant(32 * a * a, f1.order() + 2, f1.tag()) +
         minus_two * ycoth * ycoth / (phi * phi);
}

Series g4_series_at_point(const Rational& a, const Rational& coth_value, const Series& f1) {
  if (a == 0) throw PainleveError("g4_series_at_point needs a != 0; expand at the pole instead");
  if (coth_value * coth_value <= 1) throw PainleveError("|coth_value| must exceed 1");
  const Series phi = integrate(f1 * Rational(1, 2));
  const Series tau = compose(tanh_series(f1.order() + 1), phi * (4 * a));
  const int w = f1.order() + 1;
  const Series c = Series::constant(coth_value, w, f1.tag());
  const Series one = Series::constant(Rational(1), w, f1.tag());
  const Series coth = (c + tau) / (one + c * tau);
  return (32 * a * a) * (one - coth * coth);
}

OdeFamilyCoefficients canonical_coefficients(const Rational& a, const Rational& kappa,
                                             const Rational& c2, int window) {
  const Series f1 = Series::constant(Rational(2), window);
  Series g4;
  if (a == 0) {
    if (kappa == 0) throw PainleveError("kappa must be nonzero");
    // G4 = -2 / (xi - xi0)^2 with xi - xi0 = 1/kappa + chi.
    const int w = window + 2;
    const Series dist = Series::constant(1 / kappa, w) + Series::monomial(Rational(1), 1, w - 1);
    g4 = (Series::constant(Rational(-2), w) / (dist * dist)).truncated(window);
  } else {
    const Rational four_a = 4 * a;
    if (kappa * kappa <= four_a * four_a) throw PainleveError("|kappa| must exceed 4|a|");
    g4 = g4_series_at_point(a, kappa / four_a, f1).truncated(window);
  }
  return {f1, Series::zero(window), g4, g4, c2};
}

// ---------------------------------------------------------------------------

G4Profile::G4Profile(double a, double f1, double xi0) : a_(a), f1_(f1), xi0_(xi0) {
  if (!std::isfinite(a) || !std::isfinite(f1) || !std::isfinite(xi0) || f1 == 0.0) {
    throw PainleveError("G4Profile needs finite a, xi0 and a nonzero finite F1");
  }
}

namespace {

constexpr double kSmallArgument = 1e-4;

struct G4Jet {
  double value, d1, d2;  // derivatives with respect to phi
};

// G4 as a function of phi = int F1/2 (phi = 0 at xi0).
G4Jet g4_in_phi(double a, double phi) {
  const double y = 4.0 * a * phi;
  const double a2 = 32.0 * a * a;
  if (std::abs(y) < kSmallArgument) {
    // csch^2 y = 1/y^2 - 1/3 + y^2/15 - 2y^4/189, and 32 a^2 / y^2 = 2 / phi^2.
    const double k = 4.0 * a;
    const double y2 = y * y;
    return {-2.0 / (phi * phi) + a2 / 3.0 - a2 * y2 / 15.0 + 2.0 * a2 * y2 * y2 / 189.0,
            4.0 / (phi * phi * phi) - a2 * 2.0 * y * k / 15.0 + 8.0 * a2 * y2 * y * k / 189.0,
            -12.0 / (phi * phi * phi * phi) - a2 * 2.0 * k * k / 15.0 +
                24.0 * a2 * y2 * k * k / 189.0};
  }
  const double k = 4.0 * a;
  const double csch = 1.0 / std::sinh(y);
  const double coth = 1.0 / std::tanh(y);
  const double csch2 = csch * csch;
  return {-a2 * csch2, 2.0 * a2 * csch2 * coth * k,
          -2.0 * a2 * csch2 * (2.0 * coth * coth + csch2) * k * k};
}

}  // namespace

double G4Profile::value(double xi) const { return g4_in_phi(a_, 0.5 * f1_ * (xi - xi0_)).value; }

double G4Profile::first_derivative(double xi) const {
  return 0.5 * f1_ * g4_in_phi(a_, 0.5 * f1_ * (xi - xi0_)).d1;
}

double G4Profile::second_derivative(double xi) const {
  return 0.25 * f1_ * f1_ * g4_in_phi(a_, 0.5 * f1_ * (xi - xi0_)).d2;
}

double G4Profile::condition_residual(double xi) const {
  const double g = value(xi);
  const double g1 = first_derivative(xi);
  const double g2 = second_derivative(xi);
  const double ratio = 2.0 * g1 / (f1_ * g);
  const double ratio_prime = 2.0 * (g2 * g - g1 * g1) / (f1_ * g * g);
  return 2.0 * ratio * ratio_prime + 2.0 * g1;
}

G4Profile solve_g4(double a, double f1, double xi0) { return G4Profile(a, f1, xi0); }

}  // namespace bonnet::painleve
