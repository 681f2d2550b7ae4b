#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "umuscl/flux.hpp"

using namespace umuscl;

namespace {

struct RandomStates {
  std::mt19937_64 rng{17};
  std::uniform_real_distribution<double> rho{0.5, 2.0}, vel{-1.5, 1.5}, p{0.4, 3.0}, ang{0.0, 6.283185307179586};
  Vec4 state() { return Vec4(rho(rng), vel(rng), vel(rng), p(rng)); }
  Vec2 normal() {
    const double a = ang(rng);
    return {std::cos(a), std::sin(a)};
  }
};

Mat4 fd_jacobian(const Vec4& w, Vec2 n) {
  Mat4 J;
  for (int c = 0; c < 4; ++c) {
    const double eps = 1e-6 * std::max(1.0, std::abs(w[c]));
    Vec4 a = w, b = w;
    a[c] += eps;
    b[c] -= eps;
    J.col(c) = (euler_flux(a, n) - euler_flux(b, n)) / (2.0 * eps);
  }
  return J;
}

}  // namespace

TEST(EulerFlux, StaticState) {
  const Vec4 f = euler_flux(Vec4(1, 0, 0, 1), {0.6, 0.8});
  EXPECT_NEAR((f - Vec4(0, 0.6, 0.8, 0)).norm(), 0.0, 1e-15);
}

TEST(EulerFlux, HandValue) {
  const Vec4 f = euler_flux(Vec4(1, 1, 0, 1), {1, 0});
  EXPECT_NEAR((f - Vec4(1, 2, 0, 4)).norm(), 0.0, 1e-14);
}

TEST(EulerFlux, RotationInvariance) {
  RandomStates r;
  for (int s = 0; s < 100; ++s) {
    const Vec4 w = r.state();
    const Vec2 n = r.normal();
    const double a = r.ang(r.rng), c = std::cos(a), sn = std::sin(a);
    const Vec2 rn{c * n.x - sn * n.y, sn * n.x + c * n.y};
    Vec4 wr = w;
    wr[1] = c * w[1] - sn * w[2];
    wr[2] = sn * w[1] + c * w[2];
    const Vec4 f = euler_flux(w, n), fr = euler_flux(wr, rn);
    EXPECT_NEAR(fr[0], f[0], 1e-13);
    EXPECT_NEAR(fr[3], f[3], 1e-13);
    EXPECT_NEAR(fr[1], c * f[1] - sn * f[2], 1e-13);
    EXPECT_NEAR(fr[2], sn * f[1] + c * f[2], 1e-13);
  }
}

TEST(StateConversion, RoundTrip) {
  RandomStates r;
  for (int s = 0; s < 1000; ++s) {
    const Vec4 w = r.state();
    const Vec4 back = to_primitive(to_conservative(w));
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(back[c], w[c], 1e-14 * std::max(1.0, std::abs(w[c])));
  }
}

TEST(StateConversion, RejectsNonPhysical) {
  EXPECT_THROW(require_physical(to_primitive(Vec4(-1.0, 0, 0, 1)), "test"), NonPhysicalState);
  EXPECT_THROW(require_physical(Vec4(1.0, 0, 0, -0.1), "test"), NonPhysicalState);
  EXPECT_THROW(require_physical(Vec4(NAN, 0, 0, 1), "test"), NonPhysicalState);
}

TEST(RoeFlux, Consistency) {
  const Vec4 w(1, 0.5, 0.1, 1);
  for (Vec2 n : {Vec2{1, 0}, Vec2{0.6, -0.8}}) {
    EXPECT_NEAR((roe_flux(w, w, n) - euler_flux(w, n)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((rusanov_flux(w, w, n) - euler_flux(w, n)).norm(), 0.0, 1e-15);
  }
}

TEST(RoeFlux, SupersonicUpwinding) {
  const Vec2 n{1, 0};
  const Vec4 wL(1.0, -3.0, 0.1, 1.0), wR(1.2, -2.8, 0.0, 0.9);  // u_n < -c on both sides
  ASSERT_LT(wL[1] + sound_speed(wL), 0.0);
  ASSERT_LT(wR[1] + sound_speed(wR), 0.0);
  EXPECT_NEAR((roe_flux(wL, wR, n) - euler_flux(wR, n)).norm(), 0.0, 1e-13);
  const Vec4 aL(1.0, 3.0, 0.1, 1.0), aR(1.2, 2.8, 0.0, 0.9);
  EXPECT_NEAR((roe_flux(aL, aR, n) - euler_flux(aL, n)).norm(), 0.0, 1e-13);
}

TEST(NumericalFlux, Antisymmetry) {
  RandomStates r;
  for (int s = 0; s < 200; ++s) {
    const Vec4 a = r.state(), b = r.state();
    const Vec2 n = r.normal();
    EXPECT_NEAR((roe_flux(a, b, n) + roe_flux(b, a, -n)).norm(), 0.0, 1e-13);
    EXPECT_NEAR((roe_flux(a, b, n, {}, true) + roe_flux(b, a, -n, {}, true)).norm(), 0.0, 1e-13);
    EXPECT_NEAR((rusanov_flux(a, b, n) + rusanov_flux(b, a, -n)).norm(), 0.0, 1e-13);
  }
}

// Roe property: A_roe (q_R - q_L) = f_R - f_L.
TEST(RoeFlux, RoeProperty) {
  RandomStates r;
  for (int s = 0; s < 200; ++s) {
    const Vec4 a = r.state(), b = r.state();
    const Vec2 n = r.normal();
    const Vec4 signed_diss = roe_dissipation(a, b, n, {}, false, true);
    EXPECT_NEAR((signed_diss - (euler_flux(b, n) - euler_flux(a, n))).norm(), 0.0, 1e-12);
  }
}

TEST(RusanovFlux, BoundsRoeEigenvalues) {
  RandomStates r;
  for (int s = 0; s < 200; ++s) {
    const Vec4 a = r.state(), b = r.state();
    const Vec2 n = r.normal();
    const RoeAverage ra = roe_average(a, b, n);
    const double lmax = std::abs(ra.un) + ra.c;
    EXPECT_GE(rusanov_wave_speed(a, b, n) + 1e-14, lmax);
    // Roe matrix eigenvalues u_n, u_n +- c
    for (double lam : {ra.un, ra.un + ra.c, ra.un - ra.c}) EXPECT_LE(std::abs(lam), rusanov_wave_speed(a, b, n) + 1e-14);
  }
}

TEST(RoeAverage, VacuumThrows) { EXPECT_THROW(roe_average(Vec4(0, 0, 0, 1), Vec4(1, 0, 0, 1), {1, 0}), NonPhysicalState); }

TEST(ScalarUpwind, Examples) {
  EXPECT_DOUBLE_EQ(scalar_upwind_flux(2.0, 5.0, ScalarLaw::Advection), 2.0);
  EXPECT_DOUBLE_EQ(scalar_upwind_flux(1.0, 0.0, ScalarLaw::Burgers), 0.5);
  for (double u : {-1.0, 0.3, 2.0}) {
    EXPECT_DOUBLE_EQ(scalar_upwind_flux(u, u, ScalarLaw::Burgers), 0.5 * u * u);
    EXPECT_DOUBLE_EQ(scalar_upwind_flux(u, u, ScalarLaw::Advection), u);
  }
}

TEST(FluxJacobian, MatchesFiniteDifferences) {
  RandomStates r;
  for (int s = 0; s < 200; ++s) {
    const Vec4 w = r.state();
    const Vec2 n = r.normal();
    const Mat4 J = flux_jacobian_primitive(w, n);
    EXPECT_LE((J - fd_jacobian(w, n)).cwiseAbs().maxCoeff(), 1e-6);
    const Vec4 dw = r.state();
    EXPECT_NEAR((flux_jacobian_apply(w, n, dw) - J * dw).norm(), 0.0, 1e-12);
  }
}

TEST(FluxJacobian, StaticStateRow) {
  const Mat4 J = flux_jacobian_primitive(Vec4(1, 0, 0, 1), {1, 0});
  EXPECT_NEAR((J.row(0) - Eigen::RowVector4d(0, 1, 0, 0)).norm(), 0.0, 1e-15);
}

// For w linear in space, chain-rule flux gradient equals the derivative of f along the field.
TEST(FluxJacobian, ChainRuleAlongLinearField) {
  const Vec4 w0(1.1, 0.3, -0.2, 0.9), gw(0.2, -0.1, 0.3, 0.15);
  const Vec2 n{0.8, 0.6};
  const double eps = 1e-5;
  const Vec4 fd = (euler_flux(w0 + eps * gw, n) - euler_flux(w0 - eps * gw, n)) / (2.0 * eps);
  EXPECT_LE((flux_jacobian_apply(w0, n, gw) - fd).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(RoeDissipation, EntropyFixOnlyNearSonic) {
  const Vec2 n{1, 0};
  const Vec4 a(1.0, 0.3, 0.0, 1.0), b(1.05, 0.32, 0.01, 1.02);
  // far from sonic points: the fix does nothing
  EXPECT_NEAR((roe_dissipation(a, b, n, {}, true) - roe_dissipation(a, b, n, {}, false)).norm(), 0.0, 1e-15);
  // sonic: u_n ~ c
  const double c = sound_speed(a);
  const Vec4 s1(1.0, c, 0.0, 1.0), s2(1.02, c + 0.01, 0.0, 1.03);
  EXPECT_GT((roe_dissipation(s1, s2, n, {}, true) - roe_dissipation(s1, s2, n, {}, false)).norm(), 1e-8);
}

TEST(FluxNames, RoundTrip) {
  for (FluxKind k : {FluxKind::Roe, FluxKind::Rusanov, FluxKind::ScalarUpwind}) EXPECT_EQ(parse_flux_kind(to_string(k)), k);
  for (ScalarLaw k : {ScalarLaw::Advection, ScalarLaw::Burgers}) EXPECT_EQ(parse_scalar_law(to_string(k)), k);
}
