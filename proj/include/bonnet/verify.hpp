#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bonnet/fields.hpp"
#include "bonnet/ode.hpp"

namespace bonnet {

/// Surface data for the Gauss-Codazzi check: metric e^upsilon, mean curvature H
/// and Hopf coefficient Q, with the derivatives the equations need.
struct SurfacePoint {
  double upsilon = 0.0;
  double exp_upsilon = 0.0;
  double h = 0.0;
  double mod_q2 = 0.0;
  double upsilon_zzbar = 0.0;
  Complex h_z, h_zbar;
  Complex q_zbar, qbar_z;
};

class SurfaceModel {
 public:
  virtual ~SurfaceModel() = default;
  /// Values and analytic derivatives at a point.
  virtual SurfacePoint analytic(const ComplexPoint& p) const = 0;
  /// Values only (derivative fields left at zero); used by finite differences.
  virtual SurfacePoint values(const ComplexPoint& p) const = 0;
  virtual double c() const = 0;
};

/// Bonnet data: H = h(Re z) from a trajectory, Q from the closed form and
/// e^upsilon = 4|Q|^2/h'.  Optional perturbations serve as probes.
class BonnetSurface : public SurfaceModel {
 public:
  struct Perturbation {
    double metric_scale = 1.0;        // multiplies e^upsilon
    std::optional<double> constant_h;  // replaces H by a constant
  };

  BonnetSurface(BonnetParams params, const Trajectory& traj, Perturbation perturbation);
  BonnetSurface(BonnetParams params, const Trajectory& traj)
      : BonnetSurface(std::move(params), traj, Perturbation{}) {}

  SurfacePoint analytic(const ComplexPoint& p) const override;
  SurfacePoint values(const ComplexPoint& p) const override;
  double c() const override { return params_.c; }
  const BonnetParams& params() const { return params_; }
  const Trajectory& trajectory() const { return traj_; }

 private:
  BonnetParams params_;
  const Trajectory& traj_;
  Perturbation perturbation_;
};

enum class DerivativeMode { analytic, finite_difference };
std::string to_string(DerivativeMode mode);

struct ResidualReport {
  GridSpec grid;
  DerivativeMode mode = DerivativeMode::analytic;
  double fd_step = 0.0;  // finite-difference mode only

  /// Residuals divided by the largest term of their equation.
  Eigen::ArrayXXd gauss;
  Eigen::ArrayXXcd codazzi1, codazzi2;
  /// Raw residuals.
  Eigen::ArrayXXd gauss_raw;
  Eigen::ArrayXXcd codazzi1_raw, codazzi2_raw;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> masked;

  double gauss_max = 0.0, codazzi1_max = 0.0, codazzi2_max = 0.0;
  double gauss_raw_max = 0.0, codazzi1_raw_max = 0.0, codazzi2_raw_max = 0.0;
  /// Largest |codazzi2 - conj(codazzi1)| over the grid.
  double conjugation_gap = 0.0;
  std::optional<double> estimated_order;

  double worst() const { return std::max({gauss_max, codazzi1_max, codazzi2_max}); }
};

/// Gauss, Codazzi-1 and Codazzi-2 residuals on the grid.  Pole-band points are
/// masked.  Throws std::out_of_range when an unmasked stencil leaves the
/// trajectory and MetricSignError where h' <= 0.
ResidualReport gauss_codazzi_residuals(const SurfaceModel& surface, const BonnetParams& params,
                                       const GridSpec& grid, DerivativeMode mode,
                                       double fd_step = 0.0);

/// Throws std::out_of_range when [x_min - pad, x_max + pad] leaves the
/// trajectory outside the pole band.
void check_coverage(const Trajectory& traj, const BonnetParams& params, const GridSpec& grid,
                    double pad);

ResidualReport gauss_codazzi_residuals(const BonnetParams& params, const Trajectory& traj,
                                       const GridSpec& grid, DerivativeMode mode,
                                       double fd_step = 0.0);

struct ConvergenceOrders {
  double gauss = 0.0, codazzi1 = 0.0, codazzi2 = 0.0;

  double min() const { return std::min({gauss, codazzi1, codazzi2}); }
  double max() const { return std::max({gauss, codazzi1, codazzi2}); }
};

/// Least-squares slope of log(max residual) against log(step) over at least
/// three finite-difference reports.
ConvergenceOrders convergence_order(const std::vector<ResidualReport>& reports);

}  // namespace bonnet
