#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bonnet/diff_poly.hpp"
#include "bonnet/polynomial.hpp"
#include "bonnet/series.hpp"

namespace bonnet::painleve {

class PainleveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coefficients of
///   (log h')'' + F1 h' + F2 h''/h' + F3 (h^2 - c^2)/h' + F4 = 0,
/// each a series in chi = xi - xi* about the expansion point xi*.
struct OdeFamilyCoefficients {
  Series f1, f2, f3, f4;
  Rational c2{0};
};

/// The family once F2 and F3 have been fixed by the h-family conditions:
/// F2 = -(log F1)', F3 = (F1/2)^3 G4.
struct RestrictedCoefficients {
  Series f1, f4, g4;
  Rational c2{0};

  OdeFamilyCoefficients to_family() const;
};

struct LeadingOrder {
  int exponent = 0;
  std::optional<Rational> coefficient;  // empty when the coefficient is arbitrary

  bool arbitrary() const { return !coefficient.has_value(); }
  std::string describe() const;
};

struct FuchsIndices {
  std::vector<int> indices;  // sorted, with multiplicity
  Polynomial indicial_polynomial;
  bool all_integer = true;
  bool repeated = false;
  std::string diagnostic;  // empty when the roots are distinct integers

  bool ok() const { return all_integer && !repeated; }
};

enum class Family { h_pole, g_double_pole };
std::string to_string(Family family);

struct ResonanceReport {
  Family family = Family::h_pole;
  LeadingOrder leading;
  FuchsIndices fuchs;
  /// Positive Fuchs index -> closed-form compatibility condition as a series
  /// in chi; every one must be the zero series for the test to pass.
  std::map<int, Series> compatibility_residuals;
  /// Positive Fuchs index -> obstruction met by the Laurent recursion at the
  /// expansion point itself.
  std::map<int, Rational> laurent_residuals;
  /// Every closed-form condition and every recursion obstruction vanishes.
  bool passed = false;
};

// ---------------------------------------------------------------------------
// Generic single-family machinery on a differential polynomial E(u) = 0.

/// Balances of u ~ u0 chi^p: the nonzero roots u0, or an arbitrary u0 when the
/// dominant terms cancel identically.  Empty when p admits no balance.
std::vector<LeadingOrder> dominant_balance(const DiffPolynomial& equation, int exponent);

/// First-order perturbation u = base + eps chi^(p+i) of E about `base`.  The
/// lowest term of the linearised operator is indicial(i) chi^(p+i+order_shift).
struct Linearization {
  Polynomial indicial;
  int order_shift = 0;
};

Linearization linearize(const DiffPolynomial& equation, const Series& base, int exponent);

/// Integer roots, multiplicities and leftovers of an indicial polynomial.
FuchsIndices classify_indices(const Polynomial& indicial);

struct LaurentExpansion {
  Series series;
  std::map<int, Rational> compatibility;  // step -> obstruction at a resonance
  std::map<int, Rational> slopes;         // step -> coefficient of the new unknown
};

/// Extends `leading_part` (the known terms u_0..u_{first_step-1} of
/// u = sum u_j chi^(p+j)) one coefficient at a time up to `last_step`.  At a
/// resonance the obstruction is recorded and the coefficient is taken from
/// `free_values` (zero when absent).
LaurentExpansion expand_laurent(const DiffPolynomial& equation, const Series& leading_part,
                                int exponent, int first_step, int last_step, int order_shift,
                                const std::map<int, Rational>& free_values = {});

// ---------------------------------------------------------------------------
// The two families of the reduced Gauss equation.

/// h'^2 times the reduced Gauss equation, a polynomial in h, h', h'', h'''.
DiffPolynomial h_equation(const OdeFamilyCoefficients& coeffs);

/// The g = 1/h' equation (g S')^2 - 4 S = 0 with denominators cleared.
DiffPolynomial g_equation(const RestrictedCoefficients& coeffs);

/// S = h^2 written in terms of g, as a series: the restricted equation solved
/// for h^2 after substituting h' = 1/g.
Series s_from_g(const RestrictedCoefficients& coeffs, const Series& g);

LeadingOrder leading_order_h(const OdeFamilyCoefficients& coeffs);
FuchsIndices fuchs_indices_h(const OdeFamilyCoefficients& coeffs);
ResonanceReport resonance_conditions_h(const OdeFamilyCoefficients& coeffs);

/// Laurent series of h about a movable pole, `window` coefficients long, with
/// the given values injected at the resonances.
LaurentExpansion h_laurent_series(const OdeFamilyCoefficients& coeffs, int window,
                                  const std::map<int, Rational>& free_values = {});

/// Residual of the restricted ODE evaluated on a series for h.
Series restricted_ode_residual(const RestrictedCoefficients& coeffs, const Series& h);

/// F2, F3 from the h-family conditions; G4 from F1 and F4.
RestrictedCoefficients restrict_ode(const OdeFamilyCoefficients& coeffs);

/// Local solution near a double pole of g = 1/h'.  h is regular there,
/// h = h_s + eta3 chi^3 + ..., and the expansion is built on the h side.
struct GFamilyExpansion {
  Series h;
  Series g;
  LaurentExpansion h_side;
};

GFamilyExpansion g_laurent_series(const RestrictedCoefficients& coeffs, const Rational& h_at_pole,
                                  int window, const std::map<int, Rational>& free_values = {});

LeadingOrder leading_order_g(const RestrictedCoefficients& coeffs);
FuchsIndices fuchs_indices_g(const RestrictedCoefficients& coeffs);
ResonanceReport resonance_conditions_g(const RestrictedCoefficients& coeffs);

/// [(2 G4'/(F1 G4))^2 + 2 G4]' as a series; zero exactly when the g-family
/// condition holds.
Series condition_g(const Series& g4, const Series& f1);

// ---------------------------------------------------------------------------
// Closed-form G4 = 2 (4a)^2 [1 - coth^2(4a int F1/2)].

/// Laurent expansion about the fixed singularity xi0 (where int F1/2 = 0).
Series g4_series_at_pole(const Rational& a, const Series& f1);

/// Taylor expansion about an ordinary point xi* picked through the exact value
/// coth(4a int_{xi0}^{xi*} F1/2) = coth_value (|coth_value| > 1, a != 0).
Series g4_series_at_point(const Rational& a, const Rational& coth_value, const Series& f1);

/// Floating-point G4 for constant F1, with first and second derivatives.
class G4Profile {
 public:
  G4Profile(double a, double f1 = 2.0, double xi0 = 0.0);

  double a() const { return a_; }
  double f1() const { return f1_; }
  double xi0() const { return xi0_; }

  double value(double xi) const;
  double first_derivative(double xi) const;
  double second_derivative(double xi) const;
  /// The g-family condition [(2 G4'/(F1 G4))^2 + 2 G4]' at xi.
  double condition_residual(double xi) const;

 private:
  double a_, f1_, xi0_;
};

G4Profile solve_g4(double a, double f1 = 2.0, double xi0 = 0.0);

/// F1 = 2, F2 = 0, F3 = F4 = G4, expanded about the ordinary point xi* fixed
/// by kappa = 4a coth(4a(xi* - xi0)), which tends to 1/(xi* - xi0) as a -> 0.
/// Requires |kappa| > 4|a| and kappa != 0.
OdeFamilyCoefficients canonical_coefficients(const Rational& a, const Rational& kappa,
                                             const Rational& c2 = Rational(0),
                                             int window = kDefaultSeriesWindow);

}  // namespace bonnet::painleve
