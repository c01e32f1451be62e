#include "bonnet/verify.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "bonnet/parallel.hpp"

namespace bonnet {

BonnetSurface::BonnetSurface(BonnetParams params, const Trajectory& traj, Perturbation perturbation)
    : params_(std::move(params)), traj_(traj), perturbation_(perturbation) {
  params_.validate();
  if (!(perturbation_.metric_scale > 0.0)) throw std::invalid_argument("metric_scale must be positive");
}

SurfacePoint BonnetSurface::values(const ComplexPoint& p) const {
  const Jet3 jet = traj_.at(p.x);
  SurfacePoint s;
  s.mod_q2 = closed_form_q(p, params_).mod_q2;
  s.exp_upsilon = perturbation_.metric_scale * metric_exp_upsilon(p.x, jet.h1, params_);
  s.upsilon = std::log(s.exp_upsilon);
  s.h = perturbation_.constant_h.value_or(jet.h);
  return s;
}

SurfacePoint BonnetSurface::analytic(const ComplexPoint& p) const {
  SurfacePoint s = values(p);
  const Jet3 jet = traj_.at(p.x);
  const double h3 = bonnet_rhs(jet, params_);
  const double t = bonnet_t(p.x, params_);
  // upsilon = log T^2 - log h' (+ const), and (log T)'' = T^2.
  const double log_h1_second = h3 / jet.h1 - std::pow(jet.h2 / jet.h1, 2);
  s.upsilon_zzbar = 0.25 * (2.0 * t * t - log_h1_second);
  const double hx = perturbation_.constant_h ? 0.0 : jet.h1;
  s.h_z = 0.5 * hx;
  s.h_zbar = 0.5 * hx;
  const auto q = analytic_q_derivatives(p, params_);
  s.q_zbar = q.q_zbar;
  s.qbar_z = q.qbar_z;
  return s;
}

std::string to_string(DerivativeMode mode) {
  return mode == DerivativeMode::analytic ? "analytic" : "finite-difference";
}

namespace {

SurfacePoint finite_difference_point(const SurfaceModel& surface, const BonnetParams& params,
                                     const ComplexPoint& p, double h) {
  const Complex I(0.0, 1.0);
  SurfacePoint s = surface.values(p);
  const auto xp = surface.values({p.x + h, p.y}), xm = surface.values({p.x - h, p.y});
  const auto yp = surface.values({p.x, p.y + h}), ym = surface.values({p.x, p.y - h});
  s.upsilon_zzbar = 0.25 * (xp.upsilon + xm.upsilon + yp.upsilon + ym.upsilon - 4.0 * s.upsilon) / (h * h);
  const double hx = (xp.h - xm.h) / (2.0 * h), hy = (yp.h - ym.h) / (2.0 * h);
  s.h_z = 0.5 * (hx - I * hy);
  s.h_zbar = 0.5 * (hx + I * hy);
  const auto d = finite_difference_q_derivatives(p, params, h);
  s.q_zbar = d.q_zbar;
  s.qbar_z = d.qbar_z;
  return s;
}

}  // namespace

ResidualReport gauss_codazzi_residuals(const SurfaceModel& surface, const BonnetParams& params,
                                       const GridSpec& grid, DerivativeMode mode, double fd_step) {
  grid.validate();
  if (mode == DerivativeMode::finite_difference && !(fd_step > 0.0)) {
    throw std::invalid_argument("finite-difference mode needs a positive step");
  }
  ResidualReport r;
  r.grid = grid;
  r.mode = mode;
  r.fd_step = mode == DerivativeMode::finite_difference ? fd_step : 0.0;
  r.gauss = r.gauss_raw = Eigen::ArrayXXd::Zero(grid.nx, grid.ny);
  r.codazzi1 = r.codazzi2 = r.codazzi1_raw = r.codazzi2_raw = Eigen::ArrayXXcd::Zero(grid.nx, grid.ny);
  r.masked = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(grid.nx, grid.ny, false);
  const double pad = mode == DerivativeMode::finite_difference ? fd_step : 0.0;
  const double band = pole_band(params) + pad;
  const double c2 = surface.c() * surface.c();

  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double x = grid.x(i);
    if (std::abs(x - params.z0.real()) < band) {
      r.masked.row(i).setConstant(true);
      return;
    }
    for (int j = 0; j < grid.ny; ++j) {
      const ComplexPoint p{x, grid.y(j)};
      SurfacePoint s;
      try {
        s = mode == DerivativeMode::analytic ? surface.analytic(p)
                                             : finite_difference_point(surface, params, p, fd_step);
      } catch (const PoleProximityError&) {
        r.masked(i, j) = true;
        continue;
      }
      const double t1 = s.upsilon_zzbar;
      const double t2 = 0.5 * (s.h * s.h - c2) * s.exp_upsilon;
      const double t3 = 2.0 * s.mod_q2 / s.exp_upsilon;
      const double g = t1 + t2 - t3;
      const Complex k1 = s.q_zbar - 0.5 * s.h_z * s.exp_upsilon;
      const Complex k2 = s.qbar_z - 0.5 * s.h_zbar * s.exp_upsilon;
      r.gauss_raw(i, j) = g;
      r.codazzi1_raw(i, j) = k1;
      r.codazzi2_raw(i, j) = k2;
      r.gauss(i, j) = g / std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
      r.codazzi1(i, j) = k1 / std::max({std::abs(s.q_zbar), std::abs(0.5 * s.h_z * s.exp_upsilon), 1e-300});
      r.codazzi2(i, j) = k2 / std::max({std::abs(s.qbar_z), std::abs(0.5 * s.h_zbar * s.exp_upsilon), 1e-300});
    }
  });

  r.gauss_max = r.gauss.abs().maxCoeff();
  r.codazzi1_max = r.codazzi1.abs().maxCoeff();
  r.codazzi2_max = r.codazzi2.abs().maxCoeff();
  r.gauss_raw_max = r.gauss_raw.abs().maxCoeff();
  r.codazzi1_raw_max = r.codazzi1_raw.abs().maxCoeff();
  r.codazzi2_raw_max = r.codazzi2_raw.abs().maxCoeff();
  r.conjugation_gap = (r.codazzi2_raw - r.codazzi1_raw.conjugate()).abs().maxCoeff();
  return r;
}

void check_coverage(const Trajectory& traj, const BonnetParams& params, const GridSpec& grid,
                    double pad) {
  for (const double x : {grid.x_min - pad, grid.x_max + pad}) {
    if (!traj.covers(x) && !in_pole_band(x, params)) {
      std::ostringstream msg;
      msg << "domain mismatch: x = " << x << " lies outside the trajectory [" << traj.xi_start()
          << ", " << traj.xi_end() << "]";
      throw std::out_of_range(msg.str());
    }
  }
}

ResidualReport gauss_codazzi_residuals(const BonnetParams& params, const Trajectory& traj,
                                       const GridSpec& grid, DerivativeMode mode, double fd_step) {
  check_coverage(traj, params, grid, mode == DerivativeMode::finite_difference ? fd_step : 0.0);
  const BonnetSurface surface(params, traj);
  return gauss_codazzi_residuals(surface, params, grid, mode, fd_step);
}

ConvergenceOrders convergence_order(const std::vector<ResidualReport>& reports) {
  if (reports.size() < 3) throw std::invalid_argument("convergence_order needs at least three reports");
  for (const auto& r : reports) {
    if (r.mode != DerivativeMode::finite_difference) {
      throw std::invalid_argument("convergence order is defined for finite-difference reports only");
    }
  }
  const auto n = static_cast<Eigen::Index>(reports.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::MatrixXd logs(n, 3);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& r = reports[static_cast<std::size_t>(k)];
    design(k, 0) = 1.0;
    design(k, 1) = std::log(r.fd_step);
    logs(k, 0) = std::log(r.gauss_max);
    logs(k, 1) = std::log(r.codazzi1_max);
    logs(k, 2) = std::log(r.codazzi2_max);
  }
  const Eigen::MatrixXd fit = design.colPivHouseholderQr().solve(logs);
  return {fit(1, 0), fit(1, 1), fit(1, 2)};
}

}  // namespace bonnet
