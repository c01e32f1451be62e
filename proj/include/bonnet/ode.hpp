#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bonnet/dop853.hpp"

namespace bonnet {

/// Parameters of the Bonnet family: h''' = h''^2/h' - 2h'^2 + 2T^2 (h' + h^2 - c^2)
/// with T = 4a / sinh(4a(xi - xi0)).
struct BonnetParams {
  double a = 0.3;
  double xi0 = 0.0;
  double c = 0.0;
  std::complex<double> z0{0.0, 0.0};

  /// Throws std::invalid_argument on non-finite values or when Re z0 != xi0
  /// (xi is identified with Re z).
  void validate() const;
};

struct Jet3 {
  double xi = 0.0;
  double h = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

class SingularJetError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// T = 4a / sinh(4a (xi - xi0)); 1/(xi - xi0) when a = 0.
double bonnet_t(double xi, const BonnetParams& params);
/// 4a coth(4a (xi - xi0)); 1/(xi - xi0) when a = 0.
double bonnet_coth(double xi, const BonnetParams& params);

/// Throws SingularJetError when h' is (relatively) zero or xi sits on xi0.
void check_jet(const Jet3& jet, const BonnetParams& params);

double bonnet_rhs(const Jet3& jet, const BonnetParams& params);

/// d/dxi of the right-hand side, given the third derivative h3.
double bonnet_rhs_derivative(const Jet3& jet, double h3, const BonnetParams& params);

/// Conserved quantity of the ODE:
///   (h''/h' + 8a coth)^2 + 4 [T^2 (h^2 - c^2)/h' + h' + 8a coth h].
double first_integral_k(const Jet3& jet, const BonnetParams& params);

/// The same expression with 8 in front of the bracket; kept for comparison,
/// it is not constant along solutions.
double first_integral_k_printed(const Jet3& jet, const BonnetParams& params);

enum class Termination { reached_end, h1_vanishing, pole_blowup, step_failure };
std::string to_string(Termination reason);

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double blowup = 1e12;
  long max_steps = 1'000'000;
};

/// Solution of the Bonnet ODE with step-node samples and a seventh-order
/// interpolant on every accepted step.
class Trajectory {
 public:
  using State = Eigen::Vector3d;
  using Segment = Dop853Segment<State>;

  const std::vector<Jet3>& samples() const { return samples_; }
  const std::vector<Segment>& segments() const { return segments_; }
  Termination termination() const { return termination_; }
  const std::string& message() const { return message_; }
  bool completed() const { return termination_ == Termination::reached_end; }

  double xi_start() const { return samples_.front().xi; }
  double xi_end() const { return samples_.back().xi; }
  bool covers(double xi) const;

  /// Interpolated jet; throws std::out_of_range outside the integrated range.
  Jet3 at(double xi) const;
  /// Derivative of the interpolated h'' (an approximation of h''').
  double h3_dense(double xi) const;

 private:
  friend Trajectory integrate(const BonnetParams&, const Jet3&, double, const OdeOptions&);
  const Segment& segment_for(double xi) const;

  std::vector<Jet3> samples_;
  std::vector<Segment> segments_;
  Termination termination_ = Termination::reached_end;
  std::string message_;
};

/// Integrates from jet0.xi to xi_end.  The interval may not contain xi0.
Trajectory integrate(const BonnetParams& params, const Jet3& jet0, double xi_end,
                     const OdeOptions& options = {});

/// Residuals of S = h^2 and (g S')^2 = 4 S in the gauge F1 = 2, F4 = G4,
/// with h''' supplied by the caller.  Both are divided by the size of their
/// largest term (or 1).
struct SIdentityResidual {
  double s_minus_h2 = 0.0;
  double gs_identity = 0.0;
};

SIdentityResidual s_identity_at(const Jet3& jet, double h3, const BonnetParams& params);

/// Maxima over interior dense samples of every step (h''' from the
/// interpolant, h'''' by the chain rule).
SIdentityResidual s_identity_residual(const Trajectory& traj, const BonnetParams& params,
                                      int samples_per_step = 4);

/// max |K - K(start)| / max(1, |K(start)|) over the step nodes.
double k_drift(const Trajectory& traj, const BonnetParams& params);

/// Same measure over an explicit set of jets; singular jets are skipped.
double k_drift(const std::vector<Jet3>& jets, const BonnetParams& params);

}  // namespace bonnet
