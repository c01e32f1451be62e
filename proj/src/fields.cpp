#include "bonnet/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bonnet/parallel.hpp"
#include "bonnet/special.hpp"

namespace bonnet {

namespace {

constexpr double kPoleGuard = 1e-12;

void check_point(const ComplexPoint& p, const BonnetParams& params) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw PoleProximityError("non-finite point");
  const Complex w = p.z() - params.z0;
  const double xr = w.real();
  const double scaled_x = params.a == 0.0 ? std::abs(xr) : std::abs(4.0 * params.a * xr);
  if (scaled_x < kPoleGuard) {
    throw PoleProximityError("point lies on the pole wall Re(z - z0) = 0");
  }
  const double s = params.a == 0.0 ? std::abs(w) : std::abs(std::sinh(2.0 * params.a * w));
  if (s < kPoleGuard) throw PoleProximityError("point lies on a zero of sinh 2a(z - z0)");
}

Complex square(Complex v) { return v * v; }

}  // namespace

double QValues::representation_gap() const {
  const double scale = std::max({std::abs(q), std::abs(qbar), 1e-300});
  return std::max(std::abs(q - q_sinh), std::abs(qbar - qbar_sinh)) / scale;
}

QValues closed_form_q(const ComplexPoint& point, const BonnetParams& params) {
  check_point(point, params);
  const double a = params.a;
  const Complex w = point.z() - params.z0;
  const Complex wb = std::conj(w);
  const double xr = w.real();
  const double half_coth4 = 0.5 * scaled_coth(4.0 * a, xr);  // 2a coth(4a x)
  const double half_csch4 = 0.5 * scaled_csch(4.0 * a, xr);  // 2a / sinh(4a x)

  QValues v;
  v.q = scaled_coth(2.0 * a, w) - half_coth4;
  v.qbar = scaled_coth(2.0 * a, wb) - half_coth4;
  const Complex ratio = scaled_csch(2.0 * a, w) / scaled_csch(2.0 * a, wb);  // sinh(2a wb)/sinh(2a w)
  v.q_sinh = ratio * half_csch4;
  v.qbar_sinh = half_csch4 / ratio;
  v.mod_q2 = half_csch4 * half_csch4;
  return v;
}

QDerivatives analytic_q_derivatives(const ComplexPoint& point, const BonnetParams& params) {
  check_point(point, params);
  const double a = params.a;
  const Complex w = point.z() - params.z0;
  const Complex wb = std::conj(w);
  const double xr = w.real();
  const Complex c2 = scaled_coth(2.0 * a, w);
  const Complex s2 = scaled_csch(2.0 * a, w);
  const Complex s2b = scaled_csch(2.0 * a, wb);
  const double c4 = scaled_coth(4.0 * a, xr);
  const double s4 = scaled_csch(4.0 * a, xr);
  const double s4sq = s4 * s4;

  QDerivatives d;
  d.q = c2 - 0.5 * c4;
  d.qbar = scaled_coth(2.0 * a, wb) - 0.5 * c4;
  d.q_zbar = 0.25 * s4sq;
  d.qbar_z = 0.25 * s4sq;
  d.q_z = -square(s2) + 0.25 * s4sq;
  d.qbar_zbar = -square(s2b) + 0.25 * s4sq;
  d.q_zz = 2.0 * square(s2) * c2 - 0.25 * s4sq * c4;
  d.q_zzbar = -0.25 * s4sq * c4;
  d.q_zbarzbar = -0.25 * s4sq * c4;
  d.q_zzbarzbar = 0.125 * s4sq * (2.0 * c4 * c4 + s4sq);
  return d;
}

QDerivatives finite_difference_q_derivatives(const ComplexPoint& p, const BonnetParams& params,
                                             double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const Complex I(0.0, 1.0);
  auto q = [&](double dx, double dy) { return closed_form_q({p.x + dx, p.y + dy}, params); };
  const auto c = q(0, 0), xp = q(h, 0), xm = q(-h, 0), yp = q(0, h), ym = q(0, -h);
  const auto pp = q(h, h), pm = q(h, -h), mp = q(-h, h), mm = q(-h, -h);

  auto dx = [&](auto get) { return (get(xp) - get(xm)) / (2.0 * h); };
  auto dy = [&](auto get) { return (get(yp) - get(ym)) / (2.0 * h); };
  auto dxx = [&](auto get) { return (get(xp) - 2.0 * get(c) + get(xm)) / (h * h); };
  auto dyy = [&](auto get) { return (get(yp) - 2.0 * get(c) + get(ym)) / (h * h); };
  auto dxy = [&](auto get) { return (get(pp) - get(pm) - get(mp) + get(mm)) / (4.0 * h * h); };
  auto Q = [](const QValues& v) { return v.q; };
  auto Qb = [](const QValues& v) { return v.qbar; };

  // Quarter Laplacian of Q at the four neighbours, for the third derivative.
  auto quarter_lap = [&](double cx, double cy) {
    const Complex centre = q(cx, cy).q;
    return 0.25 * (q(cx + h, cy).q + q(cx - h, cy).q + q(cx, cy + h).q + q(cx, cy - h).q -
                   4.0 * centre) / (h * h);
  };

  QDerivatives d;
  d.q = c.q;
  d.qbar = c.qbar;
  d.q_z = 0.5 * (dx(Q) - I * dy(Q));
  d.q_zbar = 0.5 * (dx(Q) + I * dy(Q));
  d.qbar_z = 0.5 * (dx(Qb) - I * dy(Qb));
  d.qbar_zbar = 0.5 * (dx(Qb) + I * dy(Qb));
  d.q_zz = 0.25 * (dxx(Q) - 2.0 * I * dxy(Q) - dyy(Q));
  d.q_zzbar = 0.25 * (dxx(Q) + dyy(Q));
  d.q_zbarzbar = 0.25 * (dxx(Q) + 2.0 * I * dxy(Q) - dyy(Q));
  d.q_zzbarzbar = 0.5 * ((quarter_lap(h, 0) - quarter_lap(-h, 0)) / (2.0 * h) +
                         I * (quarter_lap(0, h) - quarter_lap(0, -h)) / (2.0 * h));
  return d;
}

double metric_exp_upsilon(double x, double h1, const BonnetParams& params) {
  if (!(h1 > 0.0)) {
    std::ostringstream msg;
    msg << "metric sign error: h' = " << h1 << " <= 0 at x = " << x;
    throw MetricSignError(msg.str());
  }
  return 4.0 * closed_form_q({x, 0.0}, params).mod_q2 / h1;
}

// ---------------------------------------------------------------------------

OneVariableMap OneVariableMap::affine(Complex scale, Complex shift) {
  return {[scale, shift](Complex w) { return scale * w + shift; },
          [scale](Complex) { return scale; }, [](Complex) { return Complex(0.0); },
          [](Complex) { return Complex(0.0); }};
}

OneVariableMap OneVariableMap::zero() { return affine(0.0, 0.0); }

ReductionMap ReductionMap::canonical(const BonnetParams& params) {
  return {OneVariableMap::affine(1.0, -params.z0), OneVariableMap::affine(1.0, -std::conj(params.z0))};
}

PhiDerivatives phi_derivatives(const ReductionMap& map, const ComplexPoint& point) {
  const Complex z = point.z();
  const Complex zb = std::conj(z);
  PhiDerivatives d;
  d.phi = 0.5 * (map.fa.f(z) + map.fb.f(zb));
  d.phi_z = 0.5 * map.fa.d1(z);
  d.phi_zbar = 0.5 * map.fb.d1(zb);
  d.phi_zz = 0.5 * map.fa.d2(z);
  d.phi_zzbar = 0.0;  // a sum of one-variable functions
  d.phi_zzzbar = 0.0;
  return d;
}

ConstraintResidual reduction_constraint(const QDerivatives& q, const PhiDerivatives& phi) {
  return {q.qbar_z * phi.phi_z - q.q_zbar * phi.phi_zbar,
          q.q_z * phi.phi_z - q.q_zbar * phi.phi_zbar};
}

Functionals f_functionals(const QDerivatives& q, const PhiDerivatives& phi) {
  const Complex pz = phi.phi_z, pzb = phi.phi_zbar;
  if (std::abs(pz) == 0.0 || std::abs(pzb) == 0.0 || std::abs(q.q_zbar) == 0.0) {
    throw std::domain_error("f_functionals: phi_z, phi_zbar and Q_zbar must be nonzero");
  }
  Functionals f;
  f.f1 = q.q * q.qbar / (q.q_zbar * pzb);
  f.f2 = phi.phi_zzbar / (pz * pzb);
  f.f3_printed = q.q_zbar / (pz * pz * pzb);
  f.f3_effective = -f.f3_printed;
  const Complex phi_terms = -phi.phi_zzbar * phi.phi_zz / (pz * pz * pz * pzb) +
                            phi.phi_zzzbar / (pz * pz * pzb);
  const Complex third = q.q_zzbarzbar / (q.q_zbar * pz * pzb);
  f.f4_printed = q.q_zbar * q.q_zbarzbar * q.q_zzbar / (pz * pzb) - third + phi_terms;
  f.f4_effective = q.q_zzbar * q.q_zbarzbar / (q.q_zbar * q.q_zbar * pz * pzb) - third + phi_terms;
  return f;
}

std::pair<Complex, Complex> reconstruct_q(const ReductionMap& map, double a,
                                          const ComplexPoint& point) {
  const Complex z = point.z();
  const Complex zb = std::conj(z);
  const Complex fa = map.fa.f(z), fb = map.fb.f(zb);
  const Complex da = map.fa.d1(z), db = map.fb.d1(zb);
  if (std::abs(da) == 0.0 || std::abs(db) == 0.0) {
    throw std::domain_error("reconstruct_q: F_a' and F_b' must be nonzero");
  }
  for (const Complex arg : {fa, fb, fa + fb}) {
    const double s = a == 0.0 ? std::abs(arg) : std::abs(std::sinh(2.0 * a * arg));
    if (s < kPoleGuard) throw PoleProximityError("reconstruct_q: sinh argument vanishes");
  }
  const Complex shared = scaled_coth(2.0 * a, fa + fb);
  return {da * da * (scaled_coth(2.0 * a, fa) - shared), db * db * (scaled_coth(2.0 * a, fb) - shared)};
}

// ---------------------------------------------------------------------------

void GridSpec::validate() const {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max))) {
    throw std::invalid_argument("grid bounds must be finite");
  }
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs nx >= 2 and ny >= 2");
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw std::invalid_argument("grid bounds must satisfy x_min < x_max and y_min < y_max");
  }
}

double pole_band(const BonnetParams& params) {
  return 0.05 / std::max(1.0, 4.0 * std::abs(params.a));
}

bool in_pole_band(double x, const BonnetParams& params) {
  return std::abs(x - params.z0.real()) < pole_band(params);
}

FieldGrid evaluate_fields(const BonnetParams& params, const Trajectory& traj, const GridSpec& grid) {
  grid.validate();
  FieldGrid out;
  out.grid = grid;
  out.q = Eigen::ArrayXXcd::Zero(grid.nx, grid.ny);
  out.qbar = Eigen::ArrayXXcd::Zero(grid.nx, grid.ny);
  out.mod_q2 = Eigen::ArrayXXd::Zero(grid.nx, grid.ny);
  out.exp_upsilon = Eigen::ArrayXXd::Zero(grid.nx, grid.ny);
  out.h = Eigen::ArrayXXd::Zero(grid.nx, grid.ny);
  out.masked = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(grid.nx, grid.ny, false);

  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    if (!in_pole_band(x, params) && !traj.covers(x)) {
      std::ostringstream msg;
      msg << "domain mismatch: grid x = " << x << " lies outside the trajectory ["
          << traj.xi_start() << ", " << traj.xi_end() << "]";
      throw std::out_of_range(msg.str());
    }
  }

  parallel_for(static_cast<std::size_t>(grid.nx), [&](std::size_t ii) {
    const int i = static_cast<int>(ii);
    const double x = grid.x(i);
    if (in_pole_band(x, params)) {
      out.masked.row(i).setConstant(true);
      return;
    }
    const Jet3 jet = traj.at(x);
    const double ups = metric_exp_upsilon(x, jet.h1, params);
    for (int j = 0; j < grid.ny; ++j) {
      const ComplexPoint pt{x, grid.y(j)};
      try {
        const auto v = closed_form_q(pt, params);
        out.q(i, j) = v.q;
        out.qbar(i, j) = v.qbar;
        out.mod_q2(i, j) = v.mod_q2;
        out.exp_upsilon(i, j) = ups;
        out.h(i, j) = jet.h;
      } catch (const PoleProximityError&) {
        out.masked(i, j) = true;
      }
    }
  });
  return out;
}

}  // namespace bonnet
