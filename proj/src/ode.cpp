#include "bonnet/ode.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "bonnet/special.hpp"

namespace bonnet {

namespace {

constexpr double kH1Guard = 1e-13;
constexpr double kXiGuard = 1e-12;
constexpr double kEventTolerance = 1e-12;

bool finite(const Jet3& j) {
  return std::isfinite(j.xi) && std::isfinite(j.h) && std::isfinite(j.h1) && std::isfinite(j.h2);
}

}  // namespace

void BonnetParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(xi0) || !std::isfinite(c) ||
      !std::isfinite(z0.real()) || !std::isfinite(z0.imag())) {
    throw std::invalid_argument("parameters a, xi0, c and z0 must be finite");
  }
  if (z0.real() != xi0) {
    throw std::invalid_argument("Re z0 must equal xi0 because xi is identified with Re z");
  }
}

double bonnet_t(double xi, const BonnetParams& p) { return scaled_csch(4.0 * p.a, xi - p.xi0); }

double bonnet_coth(double xi, const BonnetParams& p) {
  return scaled_coth(4.0 * p.a, xi - p.xi0);
}

void check_jet(const Jet3& jet, const BonnetParams& p) {
  if (!finite(jet)) throw SingularJetError("jet has non-finite components");
  if (std::abs(jet.h1) < kH1Guard * std::max(1.0, std::abs(jet.h2))) {
    throw SingularJetError("singular jet: h' vanishes");
  }
  const double d = jet.xi - p.xi0;
  const double scaled = p.a == 0.0 ? std::abs(d) : std::abs(4.0 * p.a * d);
  if (scaled < kXiGuard) throw SingularJetError("singular jet: xi too close to xi0");
}

double bonnet_rhs(const Jet3& j, const BonnetParams& p) {
  check_jet(j, p);
  const double t = bonnet_t(j.xi, p);
  return j.h2 * j.h2 / j.h1 - 2.0 * j.h1 * j.h1 + 2.0 * t * t * (j.h1 + j.h * j.h - p.c * p.c);
}

double bonnet_rhs_derivative(const Jet3& j, double h3, const BonnetParams& p) {
  check_jet(j, p);
  const double t2 = std::pow(bonnet_t(j.xi, p), 2);
  const double dt2 = -2.0 * t2 * bonnet_coth(j.xi, p);
  return 2.0 * j.h2 * h3 / j.h1 - std::pow(j.h2, 3) / (j.h1 * j.h1) - 4.0 * j.h1 * j.h2 +
         2.0 * dt2 * (j.h1 + j.h * j.h - p.c * p.c) + 2.0 * t2 * (j.h2 + 2.0 * j.h * j.h1);
}

namespace {

double k_with_factor(const Jet3& j, const BonnetParams& p, double factor) {
  check_jet(j, p);
  const double t = bonnet_t(j.xi, p);
  const double cth = 2.0 * bonnet_coth(j.xi, p);  // 8a coth(4a(xi - xi0))
  const double lead = j.h2 / j.h1 + cth;
  return lead * lead + factor * (t * t * (j.h * j.h - p.c * p.c) / j.h1 + j.h1 + cth * j.h);
}

}  // namespace

double first_integral_k(const Jet3& jet, const BonnetParams& params) {
  return k_with_factor(jet, params, 4.0);
}

double first_integral_k_printed(const Jet3& jet, const BonnetParams& params) {
  return k_with_factor(jet, params, 8.0);
}

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::reached_end: return "reached-end";
    case Termination::h1_vanishing: return "h1-vanishing";
    case Termination::pole_blowup: return "pole-blowup";
    case Termination::step_failure: return "step-failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

bool Trajectory::covers(double xi) const {
  if (samples_.empty()) return false;
  const double lo = std::min(xi_start(), xi_end()), hi = std::max(xi_start(), xi_end());
  return xi >= lo && xi <= hi;
}

const Trajectory::Segment& Trajectory::segment_for(double xi) const {
  if (!covers(xi) || segments_.empty()) {
    std::ostringstream msg;
    msg << "xi = " << xi << " lies outside the trajectory [" << xi_start() << ", " << xi_end()
        << "]";
    throw std::out_of_range(msg.str());
  }
  const double dir = xi_end() >= xi_start() ? 1.0 : -1.0;
  // First segment whose end lies at or beyond xi.
  auto it = std::lower_bound(segments_.begin(), segments_.end(), xi,
                             [dir](const Segment& s, double x) { return dir * (s.t_end() - x) < 0.0; });
  if (it == segments_.end()) --it;
  return *it;
}

Jet3 Trajectory::at(double xi) const {
  const auto& seg = segment_for(xi);
  const State y = seg(xi);
  return {xi, y[0], y[1], y[2]};
}

double Trajectory::h3_dense(double xi) const { return segment_for(xi).derivative(xi)[2]; }

Trajectory integrate(const BonnetParams& params, const Jet3& jet0, double xi_end,
                     const OdeOptions& options) {
  params.validate();
  check_jet(jet0, params);
  if (!std::isfinite(xi_end) || xi_end == jet0.xi) {
    throw std::invalid_argument("xi_end must be finite and differ from the starting xi");
  }
  if ((params.xi0 - jet0.xi) * (params.xi0 - xi_end) <= 0.0) {
    throw std::invalid_argument("the integration interval must exclude xi0");
  }
  if (!(options.rtol > 0.0) || !(options.atol > 0.0)) {
    throw std::invalid_argument("rtol and atol must be positive");
  }

  Trajectory traj;
  traj.samples_.push_back(jet0);
  bool h1_guard_hit = false;

  auto rhs = [&](double xi, const Trajectory::State& y) -> Trajectory::State {
    const Jet3 j{xi, y[0], y[1], y[2]};
    try {
      return {y[1], y[2], bonnet_rhs(j, params)};
    } catch (const SingularJetError&) {
      if (std::abs(j.h1) < kH1Guard * std::max(1.0, std::abs(j.h2))) h1_guard_hit = true;
      throw;
    }
  };

  bool stopped_by_event = false;
  auto observer = [&](const Trajectory::Segment& seg, const Trajectory::State& y,
                      const Trajectory::State&) {
    traj.segments_.push_back(seg);
    const Jet3 prev = traj.samples_.back();
    Jet3 next{seg.t_end(), y[0], y[1], y[2]};
    if (prev.h1 * next.h1 < 0.0) {
      // Bisect the interpolated h' for its zero.
      double lo = prev.xi, hi = next.xi;
      while (std::abs(hi - lo) > kEventTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (seg(mid)[1] * prev.h1 > 0.0) lo = mid; else hi = mid;
      }
      const auto z = seg(lo);
      traj.samples_.push_back({lo, z[0], z[1], z[2]});
      traj.termination_ = Termination::h1_vanishing;
      traj.message_ = "h' changes sign near xi = " + std::to_string(lo);
      stopped_by_event = true;
      return false;
    }
    traj.samples_.push_back(next);
    if (std::abs(next.h) > options.blowup) {
      traj.termination_ = Termination::pole_blowup;
      traj.message_ = "|h| exceeded the blow-up bound near xi = " + std::to_string(next.xi);
      stopped_by_event = true;
      return false;
    }
    return true;
  };

  Dop853Options dop;
  dop.rtol = options.rtol;
  dop.atol = options.atol;
  dop.max_steps = options.max_steps;
  const auto status = dop853_integrate(rhs, jet0.xi, Trajectory::State(jet0.h, jet0.h1, jet0.h2),
                                       xi_end, dop, observer);

  switch (status) {
    case Dop853Status::finished:
      traj.termination_ = Termination::reached_end;
      break;
    case Dop853Status::stopped:
      if (!stopped_by_event) traj.termination_ = Termination::step_failure;
      break;
    case Dop853Status::step_too_small:
    case Dop853Status::too_many_steps: {
      const Jet3& last = traj.samples_.back();
      const double h1_scale = std::max(1.0, std::abs(jet0.h1));
      if (h1_guard_hit || std::abs(last.h1) < 1e-6 * h1_scale) {
        traj.termination_ = Termination::h1_vanishing;
        traj.message_ = "h' tends to zero near xi = " + std::to_string(last.xi);
      } else if (std::abs(last.h) > 1e6 * std::max(1.0, std::abs(jet0.h))) {
        traj.termination_ = Termination::pole_blowup;
        traj.message_ = "h grows without bound near xi = " + std::to_string(last.xi);
      } else {
        traj.termination_ = Termination::step_failure;
        traj.message_ = status == Dop853Status::step_too_small
                            ? "step size underflow near xi = " + std::to_string(last.xi)
                            : "step budget exhausted near xi = " + std::to_string(last.xi);
      }
      break;
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------

SIdentityResidual s_identity_at(const Jet3& j, double h3, const BonnetParams& p) {
  check_jet(j, p);
  const double t2 = std::pow(bonnet_t(j.xi, p), 2);
  const double g4 = -2.0 * t2;
  const double dg4 = 4.0 * t2 * bonnet_coth(j.xi, p);
  const double c2 = p.c * p.c;
  const double h4 = bonnet_rhs_derivative(j, h3, p);

  // With F1 = 2 and F4 = G4, S = -(log h')'' h'/G4 - h' - 2h'^2/G4 + c^2.
  const double lap = h3 - j.h2 * j.h2 / j.h1;
  const double dlap = h4 - 2.0 * j.h2 * h3 / j.h1 + std::pow(j.h2, 3) / (j.h1 * j.h1);
  const double s = -lap / g4 - j.h1 - 2.0 * j.h1 * j.h1 / g4 + c2;
  const double ds = -dlap / g4 + lap * dg4 / (g4 * g4) - j.h2 - 4.0 * j.h1 * j.h2 / g4 +
                    2.0 * j.h1 * j.h1 * dg4 / (g4 * g4);

  const double s_scale = std::max({1.0, std::abs(lap / g4), std::abs(j.h1),
                                   std::abs(2.0 * j.h1 * j.h1 / g4), c2, j.h * j.h});
  const double gs = ds / j.h1;
  SIdentityResidual r;
  r.s_minus_h2 = std::abs(s - j.h * j.h) / s_scale;
  r.gs_identity = std::abs(gs * gs - 4.0 * s) / std::max({1.0, gs * gs, 4.0 * std::abs(s)});
  return r;
}

SIdentityResidual s_identity_residual(const Trajectory& traj, const BonnetParams& params,
                                      int samples_per_step) {
  if (samples_per_step < 1) throw std::invalid_argument("samples_per_step must be positive");
  SIdentityResidual worst;
  auto visit = [&](double xi) {
    const auto r = s_identity_at(traj.at(xi), traj.h3_dense(xi), params);
    worst.s_minus_h2 = std::max(worst.s_minus_h2, r.s_minus_h2);
    worst.gs_identity = std::max(worst.gs_identity, r.gs_identity);
  };
  for (const auto& seg : traj.segments()) {
    for (int k = 1; k < samples_per_step; ++k) {
      const double xi = seg.t + seg.h * static_cast<double>(k) / samples_per_step;
      if (traj.covers(xi)) visit(xi);
    }
  }
  return worst;
}

double k_drift(const std::vector<Jet3>& jets, const BonnetParams& params) {
  std::optional<double> k0;
  double worst = 0.0;
  for (const auto& j : jets) {
    double k;
    try {
      k = first_integral_k(j, params);
    } catch (const SingularJetError&) {
      continue;  // e.g. the final sample of an h' -> 0 run
    }
    if (!k0) k0 = k;
    worst = std::max(worst, std::abs(k - *k0));
  }
  return k0 ? worst / std::max(1.0, std::abs(*k0)) : 0.0;
}

double k_drift(const Trajectory& traj, const BonnetParams& params) {
  return k_drift(traj.samples(), params);
}

}  // namespace bonnet
