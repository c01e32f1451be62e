#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Core>

#include "bonnet/ode.hpp"

namespace bonnet {

using Complex = std::complex<double>;

struct ComplexPoint {
  double x = 0.0;
  double y = 0.0;

  Complex z() const { return {x, y}; }
};

class PoleProximityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class MetricSignError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Hopf coefficient Q of the Bonnet surfaces, in the coth-difference form and
/// the sinh-ratio form.
struct QValues {
  Complex q;
  Complex qbar;
  double mod_q2 = 0.0;  // (2a / sinh(4a Re(z - z0)))^2
  Complex q_sinh;
  Complex qbar_sinh;

  /// Largest relative disagreement between the two forms.
  double representation_gap() const;
};

QValues closed_form_q(const ComplexPoint& point, const BonnetParams& params);

/// Q and its conjugate partner with the z, zbar derivatives that enter the
/// Gauss-Codazzi system and the reduction functionals.
struct QDerivatives {
  Complex q, qbar;
  Complex q_z, q_zbar, qbar_z, qbar_zbar;
  Complex q_zz, q_zzbar, q_zbarzbar, q_zzbarzbar;
};

QDerivatives analytic_q_derivatives(const ComplexPoint& point, const BonnetParams& params);

/// Central differences of closed_form_q with spacing `step`, using
/// d/dz = (d/dx - i d/dy)/2 and d/dzbar = (d/dx + i d/dy)/2.
QDerivatives finite_difference_q_derivatives(const ComplexPoint& point, const BonnetParams& params,
                                             double step);

/// e^upsilon = 4 |Q|^2 / h'.
double metric_exp_upsilon(double x, double h1, const BonnetParams& params);

/// A holomorphic (or antiholomorphic) function of one variable with its
/// first three derivatives.
struct OneVariableMap {
  std::function<Complex(Complex)> f, d1, d2, d3;

  /// scale * w + shift.
  static OneVariableMap affine(Complex scale, Complex shift);
  static OneVariableMap zero();
};

/// phi = (F_a(z) + F_b(zbar)) / 2.
struct ReductionMap {
  OneVariableMap fa;
  OneVariableMap fb;

  /// F_a = z - z0, F_b = zbar - conj(z0).
  static ReductionMap canonical(const BonnetParams& params);
};

struct PhiDerivatives {
  Complex phi, phi_z, phi_zbar, phi_zz, phi_zzbar, phi_zzzbar;
};

PhiDerivatives phi_derivatives(const ReductionMap& map, const ComplexPoint& point);

/// Second Codazzi equation after the reduction.  `corrected` uses
/// Qbar_z phi_z - Q_zbar phi_zbar, `as_printed` uses Q_z phi_z - Q_zbar phi_zbar.
struct ConstraintResidual {
  Complex corrected;
  Complex as_printed;
};

ConstraintResidual reduction_constraint(const QDerivatives& q, const PhiDerivatives& phi);

/// Coefficients of the reduced Gauss equation.  The *_printed values follow
/// the formulas verbatim; the *_effective values are those that turn the
/// reduced equation into the Bonnet ODE on canonical data.
struct Functionals {
  Complex f1, f2;
  Complex f3_printed, f3_effective;
  Complex f4_printed, f4_effective;
};

Functionals f_functionals(const QDerivatives& q, const PhiDerivatives& phi);

/// Q and Qbar from the quadratures:
///   Q    = F_a'^2 [2a coth(2a F_a) - 2a coth(2a (F_a + F_b))],
///   Qbar = F_b'^2 [2a coth(2a F_b) - 2a coth(2a (F_a + F_b))].
std::pair<Complex, Complex> reconstruct_q(const ReductionMap& map, double a,
                                          const ComplexPoint& point);

// ---------------------------------------------------------------------------

struct GridSpec {
  double x_min = 0.6, x_max = 2.4;
  double y_min = -1.0, y_max = 1.0;
  int nx = 64, ny = 64;

  void validate() const;
  double x(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
  double y(int j) const { return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1); }
};

/// Half-width of the masked band around the pole wall Re z = Re z0.
double pole_band(const BonnetParams& params);
bool in_pole_band(double x, const BonnetParams& params);

/// Field samples on a grid; arrays are indexed (i, j) = (x index, y index).
struct FieldGrid {
  GridSpec grid;
  Eigen::ArrayXXcd q, qbar;
  Eigen::ArrayXXd mod_q2, exp_upsilon, h;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> masked;

  long masked_count() const { return masked.count(); }
};

/// Evaluates Q, Qbar, |Q|^2, e^upsilon and H = h(Re z) on the grid.  Points in
/// the pole band are masked; the trajectory must cover every unmasked x.
FieldGrid evaluate_fields(const BonnetParams& params, const Trajectory& traj, const GridSpec& grid);

}  // namespace bonnet
