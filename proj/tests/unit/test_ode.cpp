#include "doctest.h"

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "bonnet/ode.hpp"
#include "bonnet/special.hpp"

using namespace bonnet;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

BonnetParams params(double a, double xi0 = 0.0, double c = 0.0) {
  BonnetParams p;
  p.a = a;
  p.xi0 = xi0;
  p.c = c;
  p.z0 = {xi0, 0.0};
  return p;
}

// Jet advanced by a Taylor step of order four along the exact vector field.
Jet3 taylor_step(const Jet3& j, const BonnetParams& p, double d) {
  const double h3 = bonnet_rhs(j, p);
  const double h4 = bonnet_rhs_derivative(j, h3, p);
  return {j.xi + d, j.h + d * j.h1 + d * d / 2 * j.h2 + d * d * d / 6 * h3 + d * d * d * d / 24 * h4,
          j.h1 + d * j.h2 + d * d / 2 * h3 + d * d * d / 6 * h4, j.h2 + d * h3 + d * d / 2 * h4};
}

}  // namespace

TEST_CASE("scaled hyperbolic helpers agree with direct evaluation on both branches") {
  for (double k : {0.0, 1e-6, 0.3, 2.0}) {
    for (double w : {1e-5, 0.2, 1.7}) {
      const double y = k * w;
      const double coth = y == 0.0 ? 1.0 / w : k / std::tanh(y);
      const double csch = y == 0.0 ? 1.0 / w : k / std::sinh(y);
      CHECK(scaled_coth(k, w) == doctest::Approx(coth).epsilon(1e-13));
      CHECK(scaled_csch(k, w) == doctest::Approx(csch).epsilon(1e-13));
    }
  }
  const std::complex<double> w(0.4, 0.3);
  const auto direct = 0.5 / std::tanh(0.5 * w);
  CHECK(std::abs(scaled_coth(0.5, w) - direct) < 1e-14);
}

TEST_CASE("bonnet_rhs examples") {
  CHECK(bonnet_rhs({1.0, 0.0, 1.0, 0.0}, params(0.0)) == 0.0);
  CHECK_THROWS_AS(bonnet_rhs({1.0, 0.0, 0.0, 1.0}, params(0.3)), SingularJetError);
  CHECK_THROWS_AS(bonnet_rhs({0.0, 0.0, 1.0, 1.0}, params(0.3)), SingularJetError);
  CHECK_THROWS_AS(bonnet_rhs({1e-13, 0.0, 1.0, 1.0}, params(0.0)), SingularJetError);

  // Oracle: 50-digit evaluation of h''^2/h' - 2h'^2 + 2T^2(h' + h^2), T = 1/sinh(1).
  const Big t = 1 / sinh(Big(1));
  const Big expected = Big(-2) + 2 * t * t * Big(2);
  CHECK(bonnet_rhs({1.0, 1.0, 1.0, 0.0}, params(0.25)) ==
        doctest::Approx(expected.convert_to<double>()).epsilon(1e-15));
}

TEST_CASE("bonnet_rhs is continuous in a at a = 0 with an O(a^2) gap") {
  const Jet3 j{0.8, 0.4, 1.3, -0.2};
  const double r0 = bonnet_rhs(j, params(0.0));
  const double d3 = std::abs(bonnet_rhs(j, params(1e-3)) - r0);
  const double d4 = std::abs(bonnet_rhs(j, params(1e-4)) - r0);
  CHECK(d3 / d4 == doctest::Approx(100.0).epsilon(0.02));
}

TEST_CASE("first integral values") {
  const Jet3 j{1.0, 0.0, 1.0, 0.0};
  CHECK(first_integral_k_printed(j, params(0.0)) == doctest::Approx(12.0));
  CHECK(first_integral_k(j, params(0.0)) == doctest::Approx(8.0));
  // c = h removes the T^2 term.
  const auto p = params(0.3, 0.0, 0.7);
  const Jet3 k{0.9, 0.7, 1.2, 0.4};
  const double cth = 2.0 * bonnet_coth(k.xi, p);
  CHECK(first_integral_k_printed(k, p) ==
        doctest::Approx(std::pow(k.h2 / k.h1 + cth, 2) + 8.0 * (k.h1 + cth * k.h)));
}

TEST_CASE("the conserved K is stationary along the vector field; the printed one is not") {
  const auto p = params(0.3, 0.0, 0.4);
  const Jet3 j{0.9, 1.1, 0.8, -0.3};
  auto slope = [&](auto k, double d) {
    return (k(taylor_step(j, p, d), p) - k(taylor_step(j, p, -d), p)) / (2 * d);
  };
  // Truncating the Taylor step leaves an O(d^2) slope; a true drift would not shrink.
  const double s1 = std::abs(slope(first_integral_k, 1e-3));
  const double s2 = std::abs(slope(first_integral_k, 5e-4));
  MESSAGE("conserved K slopes " << s1 << " " << s2);
  CHECK(s2 < s1 / 3.0);
  CHECK(s2 < 1e-4);
  CHECK(std::abs(slope(first_integral_k_printed, 5e-4)) > 1e-2);
}

TEST_CASE("integrate: start identity, round trip and tolerance behaviour") {
  const auto p = params(0.3);
  const Jet3 j0{0.5, 1.0, 1.0, 0.0};
  OdeOptions o;
  o.rtol = 1e-10;
  const auto traj = integrate(p, j0, 2.5, o);
  REQUIRE(traj.completed());
  const auto start = traj.at(0.5);
  CHECK(start.h == j0.h);
  CHECK(start.h1 == j0.h1);
  CHECK(start.h2 == j0.h2);
  for (std::size_t i = 1; i < traj.samples().size(); ++i) {
    CHECK(traj.samples()[i].xi > traj.samples()[i - 1].xi);
  }

  const auto back = integrate(p, traj.samples().back(), 0.5, o);
  REQUIRE(back.completed());
  const auto end = back.samples().back();
  CHECK(std::abs(end.h - j0.h) < 10 * o.rtol);
  CHECK(std::abs(end.h1 - j0.h1) < 10 * o.rtol);
  CHECK(std::abs(end.h2 - j0.h2) < 10 * o.rtol);
  CHECK(back.at(1.3).h == doctest::Approx(traj.at(1.3).h).epsilon(1e-9));

  CHECK(k_drift(traj, p) < 1e-8);
  const auto s = s_identity_residual(traj, p);
  CHECK(s.s_minus_h2 < 1e-6);
  CHECK(s.gs_identity < 1e-5);

  o.rtol = 1e-7;
  const auto coarse = s_identity_residual(integrate(p, j0, 2.5, o), p);
  CHECK(coarse.s_minus_h2 > s.s_minus_h2);
}

TEST_CASE("S identity detects a non-solution jet") {
  const auto p = params(0.3);
  const Jet3 j{1.2, 1.5, 0.9, 0.4};
  const double h3 = bonnet_rhs(j, p);
  const auto exact = s_identity_at(j, h3, p);
  CHECK(exact.s_minus_h2 < 1e-13);
  CHECK(exact.gs_identity < 1e-12);
  Jet3 off = j;
  off.h2 *= 1.1;
  const auto r = s_identity_at(off, h3, p);
  CHECK(r.s_minus_h2 > 1e-3);
}

TEST_CASE("integrate: events and validation") {
  OdeOptions o;
  o.rtol = 1e-10;
  const auto vanishing = integrate(params(0.3, 0.0, 1.0), {0.5, 0.0, 0.1, -0.5}, 3.0, o);
  CHECK(vanishing.termination() == Termination::h1_vanishing);
  CHECK(vanishing.xi_end() < 3.0);

  const auto pole = integrate(params(0.3), {0.5, 1.0, -1.0, 0.0}, 3.0, o);
  CHECK(pole.termination() == Termination::pole_blowup);
  CHECK(std::abs(pole.samples().back().h) > 1e12);

  CHECK_THROWS_AS(integrate(params(0.3, 1.0), {0.5, 1.0, 1.0, 0.0}, 2.5, o), std::invalid_argument);
  CHECK_THROWS_AS(integrate(params(0.3), {0.5, 1.0, 0.0, 0.0}, 2.5, o), SingularJetError);
  BonnetParams shifted = params(0.3);
  shifted.z0 = {0.2, 0.0};
  CHECK_THROWS_AS(integrate(shifted, {0.5, 1.0, 1.0, 0.0}, 2.5, o), std::invalid_argument);
  CHECK_THROWS_AS(integrate(params(0.3), {0.5, 1.0, 1.0, 0.0}, 2.5, OdeOptions{0.0}), std::invalid_argument);
}

TEST_CASE("k_drift of a constant sample set is zero") {
  const Jet3 j{0.7, 1.0, 2.0, 0.5};
  CHECK(k_drift(std::vector<Jet3>(5, j), params(0.3)) == 0.0);
}

TEST_CASE("integration on the negative side of xi0 with a = 0") {
  OdeOptions o;
  o.rtol = 1e-10;
  const auto p = params(0.0);
  const auto traj = integrate(p, {-0.5, 1.0, 1.0, 0.0}, -2.0, o);
  REQUIRE(traj.completed());
  CHECK(k_drift(traj, p) < 1e-8);
  CHECK(traj.at(-1.0).xi == -1.0);
}
