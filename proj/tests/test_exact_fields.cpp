#include <gtest/gtest.h>

#include <random>

#include "nsblowup/exact_fields.hpp"
#include "oracles.hpp"

using namespace nsblowup;

namespace {

SolutionParams famA(double a = 1, double k = 1, double ts = 1, double nu = 1) { return {a, k, ts, nu, Family::A}; }
SolutionParams famB(double a = 1, double k = 1, double ts = 1, double nu = 1) { return {a, k, ts, nu, Family::B}; }

void expect_vec(const Vec3& got, const Vec3& want, double tol) {
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], want[i], tol) << "component " << i;
}

double rel_diff(const Vec3& x, const Vec3& y) {
  const double scale = std::max(max_abs(x), max_abs(y));
  Vec3 d{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
  return scale > 0 ? max_abs(d) / scale : 0.0;
}

/// Random admissible points: t in [0, 0.95 t_star], r in [0.2, 3], |z| <= 3.
std::vector<CartPoint> random_points(int n, std::uint64_t seed, double t_star = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CartPoint> out;
  for (int i = 0; i < n; ++i) {
    const double r = 0.2 + 2.8 * u(rng), th = 6.283185307179586 * u(rng);
    out.push_back({0.95 * t_star * u(rng), r * std::cos(th), r * std::sin(th), -3 + 6 * u(rng)});
  }
  return out;
}

}  // namespace

TEST(SolutionParams, RejectsZeroAndNonPositive) {
  EXPECT_THROW(SolutionParams(0, 1, 1, 1, Family::A), InvalidParams);
  EXPECT_THROW(SolutionParams(1, 0, 1, 1, Family::B), InvalidParams);
  EXPECT_THROW(SolutionParams(1, 1, 0, 1, Family::A), InvalidParams);
  EXPECT_THROW(SolutionParams(1, 1, 1, -1, Family::A), InvalidParams);
  EXPECT_THROW(SolutionParams(1, 1, 1, std::nan(""), Family::A), InvalidParams);
  EXPECT_NO_THROW(SolutionParams(-0.5, -2, 3, 0.1, Family::B));
}

TEST(VelocityCyl, ClosedFormValues) {
  expect_vec(velocity_cyl(famA(), {0, 1, 1}), {1, 1, -2}, 1e-15);
  expect_vec(velocity_cyl(famB(), {0, 0, 0}), {0, 0, 0}, 0.0);
  expect_vec(velocity_cyl(famB(2, 3, 2, 0.1), {1, 2, 1}), {4, 6, -4}, 1e-13);
}

TEST(VelocityCyl, Guards) {
  EXPECT_THROW(velocity_cyl(famA(), {0, 0, 1}), AxisSingularity);
  EXPECT_THROW(velocity_cyl(famA(), {1, 1, 1}), EvaluationAtOrPastBlowup);
  EXPECT_THROW(velocity_cyl(famB(), {2, 1, 1}), EvaluationAtOrPastBlowup);
  EXPECT_THROW(velocity_cyl(famB(), {1 - 1e-13, 1, 1}), EvaluationAtOrPastBlowup);
  EXPECT_NO_THROW(velocity_cyl(famB(), {1 - 1e-11, 1, 1}));
}

TEST(VelocityCyl, NegativeStrainPowerIsFinite) {
  const auto v = velocity_cyl(famB(-1.5, 1, 1, 1), {0.5, 1, 0});
  EXPECT_NEAR(v[1], std::pow(0.5, -3.0), 1e-12);
}

TEST(VelocityCart, ClosedFormValues) {
  expect_vec(velocity_cart(famA(), {0, 1, 0, 1}), {1, -1, -2}, 1e-15);
  expect_vec(velocity_cart(famB(), {0, 0, 0, 5}), {0, 0, -10}, 1e-15);
  expect_vec(velocity_cart(famA(1, 2, 2, 1), {1, 3, 4, 0}), {3 + 8.0 / 25, 4 - 6.0 / 25, 0}, 1e-14);
}

TEST(VelocityCart, AgreesWithConvertedCylindricalFields) {
  for (auto p : {famA(0.7, -1.3, 2, 0.1), famB(-0.4, 2.1, 1.5, 0.3)})
    for (const auto& q : random_points(200, 7, p.t_star())) {
      const FieldSample cyl = sample_cyl(p, to_cyl(q));
      const FieldSample cart = basis_convert(cyl, q);
      EXPECT_LE(rel_diff(cart.velocity, velocity_cart(p, q)), 1e-13);
    }
}

TEST(BasisConvert, UnitVectors) {
  FieldSample s{Frame::Cylindrical, {1, 0, 0}, std::nullopt, std::nullopt, std::nullopt};
  expect_vec(basis_convert(s, CartPoint{0, 1, 0, 0}).velocity, {1, 0, 0}, 1e-15);
  s.velocity = {0, 1, 0};
  expect_vec(basis_convert(s, CartPoint{0, 0, 1, 0}).velocity, {1, 0, 0}, 1e-15);
}

TEST(BasisConvert, RoundTripAndAxis) {
  const auto p = famA(1.2, 0.8, 1, 0.5);
  for (const auto& q : random_points(50, 3)) {
    const FieldSample cart = sample_cart(p, q);
    const FieldSample back = basis_convert(basis_convert(cart, q), q);
    EXPECT_LE(rel_diff(back.velocity, cart.velocity), 1e-13);
    EXPECT_LE(rel_diff(back.vorticity.value(), cart.vorticity.value()), 1e-13);
    for (int i = 0; i < 3; ++i) EXPECT_LE(rel_diff(back.gradient.value()[i], cart.gradient.value()[i]), 1e-12);
  }
  FieldSample s{Frame::Cartesian, {1, 0, 0}, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_THROW(basis_convert(s, CartPoint{0, 0, 0, 1}), AxisSingularity);
}

TEST(BasisConvert, CylindricalFamilyAMatchesCartesianFormulas) {
  // v_1 = a x1/tau + k x2/r^2, v_2 = a x2/tau - k x1/r^2, v_3 = -2 a x3/tau at (1,1,1).
  const FieldSample cyl = sample_cyl(famA(), {0, std::sqrt(2.0), 1});
  const FieldSample cart = basis_convert(cyl, CartPoint{0, 1, 1, 1});
  expect_vec(cart.velocity, {1.5, 0.5, -2}, 1e-14);
}

TEST(VelocityGradient, ClosedFormValues) {
  const Mat3 g = velocity_gradient_cart(famB(), {0, 0.3, -0.7, 2});
  const Mat3 want{{{1, 1, 0}, {-1, 1, 0}, {0, 0, -2}}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(g[i][j], want[i][j], 1e-14);
  EXPECT_NEAR(velocity_gradient_cart(famA(), {0, 1, 1, 0})[0][0], 0.5, 1e-15);
}

TEST(VelocityGradient, FamilyBSwirlUsesTimeToBlowup) {
  // At t = 0.5 with t_star = 1 the swirl entry is k tau^{2a} = 0.25, not k t_star^{2a} = 1.
  const Mat3 g = velocity_gradient_cart(famB(), {0.5, 1, 2, 3});
  EXPECT_NEAR(g[0][1], 0.25, 1e-15);
  EXPECT_NEAR(g[1][0], -0.25, 1e-15);
}

TEST(VelocityGradient, MatchesFourthOrderDifferencesAndIsTraceless) {
  for (auto p : {famA(1.1, 0.6, 1, 0.2), famB(-0.7, 1.4, 2, 0.05)})
    for (const auto& q : random_points(40, 11, p.t_star())) {
      const Mat3 g = velocity_gradient_cart(p, q);
      const Mat3 fd = oracle::gradient(p, q);
      const double scale = max_abs(g);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(g[i][j], fd[i][j], 1e-7 * scale);
      EXPECT_LE(std::abs(trace(g)), 1e-12 * scale);
    }
}

TEST(StreamFunction, Values) {
  EXPECT_DOUBLE_EQ(stream_phi_theta(famA(), {0, 1, 1}), -1.0);
  EXPECT_DOUBLE_EQ(stream_phi_theta(famB(2, 1, 2, 1), {1, 3, -1}), 6.0);
  EXPECT_EQ(stream_phi_theta(famB(3, 1, 5, 1), {1, 2, 0}), 0.0);
}

TEST(Vorticity, MatchesCurlOfVelocitySamples) {
  for (auto p : {famA(1, 1, 1, 1), famB(1, 1, 1, 1), famB(-0.3, 2, 1.5, 1)})
    for (const auto& q : random_points(30, 5, p.t_star())) {
      const Vec3 w = vorticity_cart(p, q);
      const Vec3 fd = oracle::curl(p, q);
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(w[i], fd[i], 1e-7 * std::max(1.0, max_abs(fd)));
    }
}

TEST(Vorticity, FamilyValues) {
  expect_vec(vorticity_cyl(famA(), {0.2, 0.7, -1}), {0, 0, 0}, 1e-14);
  // e_theta = (x2/r, -x1/r, 0) is clockwise, so the axial curl is -(1/r) d_r(r v^theta).
  expect_vec(vorticity_cyl(famB(), {0, 1.3, 0.4}), {0, 0, -2}, 1e-14);
  expect_vec(vorticity_cart(famB(), {0, 0.3, 0.2, 0.4}), {0, 0, -2}, 1e-14);
  expect_vec(vorticity_cyl(famB(), {0, 0, 1}), {0, 0, -2}, 1e-14);
  const Vec3 tiny = vorticity_cyl(famB(1, 1e-300, 1, 1), {0, 1, 1});
  EXPECT_LE(max_abs(tiny), 1e-290);
}

TEST(Pressure, LineIntegralOracle) {
  // P(q) - P(q0) from integrating -(d_t v + v.grad v - nu Lap v) along a segment.
  struct Case {
    SolutionParams p;
    CartPoint from;
    CartPoint to;
  };
  const Case cases[] = {
      {famA(), {0, 1, 0, 0}, {0, 2, 0.5, 1}},
      {famB(), {0, 0, 0, 0}, {0, 1, 0, 1}},
      {famB(-0.6, 1.7, 2, 0.3), {0.4, 0, 0, 0}, {0.4, -1.2, 0.7, 0.9}},
      {famA(0.5, -2, 1.5, 0.1), {0.9, 0.5, 0.5, -1}, {0.9, 1.5, -1.0, 0.3}},
  };
  for (const auto& c : cases) {
    const double want = oracle::pressure_difference(c.p, c.from, c.to);
    const double got = pressure_exact(c.p, c.to) - pressure_exact(c.p, c.from);
    EXPECT_NEAR(got, want, 1e-7 * std::max(1.0, std::abs(want)));
  }
}

TEST(Pressure, GaugeAndValues) {
  EXPECT_EQ(pressure_exact(famB(1.3, 2, 1, 1), CylPoint{0.2, 0, 0}), 0.0);
  EXPECT_NEAR(pressure_exact(famA(), CylPoint{0, 1, 0}), -1.5, 1e-14);
  // Centrifugal swirl term of family B enters with a plus sign: -1 - 1 + 1/2.
  EXPECT_NEAR(pressure_exact(famB(), CylPoint{0, 1, 1}), -1.5, 1e-14);
  EXPECT_NEAR(oracle::pressure_difference(famB(), {0, 0, 0, 0}, {0, 1, 0, 1}), -1.5, 1e-8);
}

TEST(Properties, BlowupScalingAndSteadySwirl) {
  const auto p = famA(1.7, 0.9, 2, 0.1);
  const double t1 = 1.0;  // tau = 1
  const double t2 = 1.5;  // tau = 0.5
  for (double r : {0.3, 1.0, 2.5}) {
    const Vec3 v1 = velocity_cyl(p, {t1, r, 0.4});
    const Vec3 v2 = velocity_cyl(p, {t2, r, 0.4});
    EXPECT_NEAR(v2[0], 2.0 * v1[0], 1e-13 * std::abs(v2[0]));
    EXPECT_EQ(v1[1], v2[1]);
  }
}

TEST(Properties, BiotSavartClosedForm) {
  const auto p = famB(0.8, 1, 1, 1);
  for (const auto& q : random_points(20, 13)) {
    const CylPoint c = to_cyl(q);
    const double tau = p.t_star() - c.t;
    // -d_z phi = a r / tau; (1/r) d_r (r phi) = -2 a z / tau for phi = -a r z / tau.
    const Vec3 v = velocity_cyl(p, c);
    EXPECT_NEAR(v[0], p.a() * c.r / tau, 1e-13 * std::abs(v[0]) + 1e-15);
    EXPECT_NEAR(v[2], -2.0 * p.a() * c.z / tau, 1e-13 * std::abs(v[2]) + 1e-15);
    EXPECT_NEAR(stream_phi_theta(p, c), -p.a() * c.r * c.z / tau, 1e-13);
  }
}

TEST(TransformedFields, Values) {
  const auto a = transformed_exact(famA(1, 2, 1, 1), {0.3, 2, 1});
  EXPECT_DOUBLE_EQ(a.v1, 0.5);
  EXPECT_DOUBLE_EQ(a.omega1, 0.0);
  EXPECT_NEAR(a.phi1, -1.0 / 0.7, 1e-15);
  const auto b = transformed_exact(famB(-0.5, 3, 1, 1), {0.5, 0, 1});
  EXPECT_NEAR(b.v1, 3.0 / 0.5, 1e-14);
}
