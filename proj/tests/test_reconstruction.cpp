#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "umuscl/reconstruction.hpp"

using namespace umuscl;

TEST(Umuscl, ConsistentLinearDataAnyKappa) {
  for (double k : {-1.0, 0.0, 1.0 / 3.0, 0.5, 0.75, 1.0}) {
    const auto p = umuscl_pair(1.0, 3.0, 2.0, 2.0, k);
    EXPECT_DOUBLE_EQ(p.left, 2.0);
    EXPECT_DOUBLE_EQ(p.right, 2.0);
  }
}

TEST(Umuscl, HandValueThirdKappa) {
  // u = 0, 1, 4 at x = -1, 0, 1; central gradient 2, dx = 1
  const auto p = umuscl_pair(1.0, 4.0, 2.0, 0.0, 1.0 / 3.0);
  EXPECT_NEAR(p.left, 13.0 / 6.0, 1e-15);
  EXPECT_NEAR(delta_form_left(0.0, 1.0, 4.0, 1.0 / 3.0), 13.0 / 6.0, 1e-15);
}

TEST(Umuscl, QuadraticExactAtHalfKappa) {
  // u = x^2, exact gradients 0 at x=0 and 2 at x=1
  const auto p = umuscl_pair(0.0, 1.0, 0.0, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(p.left, 0.25);
  EXPECT_DOUBLE_EQ(p.right, 0.25);
}

TEST(Umuscl, VectorOverloadMatchesScalar) {
  const auto p = umuscl_pair(1.0, 4.0, Vec2{2.0, 0.0}, Vec2{6.0, 0.0}, Point{0, 0}, Point{1, 0}, 1.0 / 3.0);
  const auto q = umuscl_pair(1.0, 4.0, 2.0, 6.0, 1.0 / 3.0);
  EXPECT_EQ(p.left, q.left);
  EXPECT_EQ(p.right, q.right);
}

TEST(DeltaForm, Examples) {
  for (double k : {-1.0, 0.0, 0.3, 0.5, 1.0}) EXPECT_NEAR(delta_form_left(0.0, 1.0, 2.0, k), 1.5, 1e-15);
  EXPECT_NEAR(delta_form_left(1.0, 0.0, 1.0, 0.5), 0.25, 1e-15);
}

TEST(WeightedAverage, SameExamples) {
  EXPECT_NEAR(weighted_average_form(1.0, 3.0, 2.0, 0.3), 2.0, 1e-15);
  EXPECT_NEAR(weighted_average_form(1.0, 4.0, 2.0, 1.0 / 3.0), 13.0 / 6.0, 1e-15);
  EXPECT_NEAR(weighted_average_form(0.0, 1.0, 0.0, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(weighted_average_form(0.0, 1.0, Vec2{0, 0}, Point{0, 0}, Point{1, 0}, 0.5), 0.25, 1e-15);
}

// Property: all three forms agree on random data.
TEST(FormEquivalence, RandomSamples) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int s = 0; s < 2000; ++s) {
    const double uj = U(rng), uk = U(rng), dj = U(rng), dk = U(rng), k = U(rng);
    const auto a = umuscl_pair(uj, uk, dj, dk, k);
    const auto b = umuscl_pair_gradient_delta_form(uj, uk, dj, dk, k);
    const double c = weighted_average_form(uj, uk, dj, k);
    EXPECT_NEAR(a.left, b.left, 1e-14);
    EXPECT_NEAR(a.right, b.right, 1e-14);
    EXPECT_NEAR(a.left, c, 1e-14);
    // 1D three-point form with the central gradient
    const double um = U(rng), up = U(rng), upp = U(rng), ui = U(rng);
    const auto d = umuscl_pair_delta_form(um, ui, up, upp, k);
    const auto e = umuscl_pair(ui, up, 0.5 * (up - um), 0.5 * (upp - ui), k);
    EXPECT_NEAR(d.left, e.left, 1e-14);
    EXPECT_NEAR(d.right, e.right, 1e-14);
  }
}

TEST(Umuscl, KappaOneIsTheAverage) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int s = 0; s < 100; ++s) {
    const double uj = U(rng), uk = U(rng);
    const auto p = umuscl_pair(uj, uk, U(rng), U(rng), 1.0);
    EXPECT_NEAR(p.left, 0.5 * (uj + uk), 1e-15);
    EXPECT_NEAR(p.right, 0.5 * (uj + uk), 1e-15);
  }
}

TEST(FluxPairFsr, Examples) {
  const auto c = flux_pair_fsr(2.0, 2.0, 0.0, 0.0, 1.0 / 3.0);
  EXPECT_EQ(c.left, 2.0);
  EXPECT_EQ(c.right, 2.0);
  for (double t : {0.0, 1.0 / 3.0, 1.0}) EXPECT_NEAR(flux_pair_fsr(1.0, 3.0, 2.0, 2.0, t).left, 2.0, 1e-15);
  // f = x^2 on x = -1, 0, 1 with central gradient 0 at x = 0: f_L at 1/2
  EXPECT_NEAR(flux_pair_fsr(0.0, 1.0, 0.0, 2.0, 1.0 / 3.0).left, 1.0 / 6.0, 1e-15);
}

TEST(YangHarris, QuadraticDataMatchesThirdKappa) {
  // x^2 at x = -2..2
  const double yh = yang_harris_1d(4.0, 1.0, 0.0, 1.0, 4.0, -1.0 / 6.0, 0.0);
  EXPECT_NEAR(yh, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(yh, delta_form_left(1.0, 0.0, 1.0, 1.0 / 3.0), 1e-15);
}

TEST(YangHarris, LinearAndConstant) {
  for (double k : {-1.0 / 6.0, 0.0, 0.5})
    for (double k3 : {0.0, 1.0}) {
      EXPECT_NEAR(yang_harris_1d(-2.0, -1.0, 0.0, 1.0, 2.0, k, k3), 0.5, 1e-15);
      EXPECT_NEAR(yang_harris_1d(3.0, 3.0, 3.0, 3.0, 3.0, k, k3), 3.0, 1e-15);
    }
}

TEST(YangHarris, QuadraticTargetOnRandomQuadratics) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int s = 0; s < 200; ++s) {
    const double a = U(rng), b = U(rng), c = U(rng);
    auto q = [&](double x) { return a + b * x + c * x * x; };
    const double yh = yang_harris_1d(q(-2), q(-1), q(0), q(1), q(2), -1.0 / 6.0, 0.0);
    EXPECT_NEAR(yh, delta_form_left(q(-1), q(0), q(1), 1.0 / 3.0), 1e-12);
  }
}

TEST(MidpointAverage, MatchesFormula) {
  const double cases[3][4] = {{1.0, 3.0, 2.0, 2.0}, {0.0, 1.0, 0.0, 2.0}, {-0.4, 2.5, 1.1, -0.7}};
  for (const auto& c : cases) {
    const auto p = umuscl_pair(c[0], c[1], c[2], c[3], 0.5);
    EXPECT_NEAR(midpoint_average(p), midpoint_average_formula(c[0], c[1], c[2], c[3]), 1e-15);
  }
}

TEST(CellCenteredCorrection, MidpointReducesToUmuscl) {
  const Point xj{0.1, 0.2}, xk{0.7, -0.3};
  const Vec2 gj{1.5, -0.5}, gk{0.3, 2.0};
  const Point mid = 0.5 * (xj + xk);
  const auto p = umuscl_pair(1.2, 0.4, gj, gk, xj, xk, 0.3);
  EXPECT_NEAR(cell_centered_correction(1.2, 0.4, gj, gk, xj, xk, mid, 0.3), p.left, 1e-15);
}

TEST(CellCenteredCorrection, LinearFieldOffMidpoint) {
  auto u = [](Point p) { return 3.0 * p.x - 2.0 * p.y; };
  const Vec2 g{3.0, -2.0};
  const Point xj{0.0, 0.0}, xk{1.0, 0.2}, face{0.6, 0.3};
  for (double k : {0.0, 1.0 / 3.0, 0.5, 1.0})
    EXPECT_NEAR(cell_centered_correction(u(xj), u(xk), g, g, xj, xk, face, k), u(face), 1e-14);
  EXPECT_GT(std::abs(cell_centered_uncorrected(u(xj), u(xk), g, xj, face, 0.5) - u(face)), 1e-3);
  EXPECT_NEAR(cell_centered_correction(2.0, 2.0, Vec2{}, Vec2{}, xj, xk, face, 0.5), 2.0, 1e-15);
}

TEST(JumpProbe, QuadraticFieldWithQuadraticLsq) {
  const Mesh m = generate_grid(GridFamily::IrregularTriangle, 24, 24, {}, 1);
  const GradientOperator g(m, LsqKind::Quadratic);
  auto f = [](Point p) { return 8.75 - 1.3 * p.x + 3.7 * p.y + 2.1 * p.x * p.x + 0.3 * p.x * p.y - 7.5 * p.y * p.y; };
  for (double k : {0.0, 1.0 / 3.0, 0.5, 0.75}) {
    const auto r = jump_and_error_probe(m, g, k, f);
    EXPECT_LE(r.max_jump, 1e-10);
    if (k == 0.5) EXPECT_LE(r.max_error, 1e-10);
    else EXPECT_GT(r.max_error, 1e-6);
  }
}

TEST(JumpProbe, KappaOneLinearLsqHasNoJump) {
  const Mesh m = generate_grid(GridFamily::IrregularTriangle, 16, 16, {}, 2);
  const GradientOperator g(m, LsqKind::Linear);
  auto f = [](Point p) { return 8.75 - 1.3 * p.x + 3.7 * p.y + 2.1 * p.x * p.x + 0.3 * p.x * p.y - 7.5 * p.y * p.y; };
  EXPECT_LE(jump_and_error_probe(m, g, 1.0, f).max_jump, 1e-12);
}

TEST(JumpProbe, LinearFieldExactEverywhere) {
  const Mesh m = generate_grid(GridFamily::IrregularTriangle, 16, 16, {}, 2);
  const GradientOperator g(m, LsqKind::Linear);
  for (double k : {0.0, 0.5}) {
    const auto r = jump_and_error_probe(m, g, k, [](Point p) { return 1.0 + 2.0 * p.x - 0.5 * p.y; });
    EXPECT_LE(r.max_jump, 1e-12);
    EXPECT_LE(r.max_error, 1e-12);
  }
}
