#include <gtest/gtest.h>

#include <cmath>

#include "rosce/error.hpp"
#include "rosce/estimator.hpp"
#include "rosce/rng.hpp"
#include "rosce/synth.hpp"

using namespace rosce;

namespace {

const SpaceDomain kLine = SpaceDomain::continuous({{0, 10}});

std::vector<Location> even_line(int n) {
  std::vector<Location> s;
  for (int i = 0; i < n; ++i) s.push_back(Location{10.0 * i / (n - 1)});
  return s;
}

Eigen::VectorXd normals(std::uint64_t seed, Eigen::Index n) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  return Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
}

BasisSpec line_basis(int n = 10, double f = 0.2) {
  return BasisSpec::bspline(kLine, {BasisLevel::uniform(n, f, 1)});
}

}  // namespace

TEST(Method, Names) {
  for (Method m : {Method::rosce, Method::direct_ls, Method::naive_region_ls, Method::gls_sre, Method::residual_ls}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_method("ls"), Method::residual_ls);
  EXPECT_THROW(parse_method("ols"), ConfigError);
}

TEST(Rosce, ZeroOutcomeResidualGivesZero) {
  const auto s = even_line(50);
  const auto fit = ResidualFit::from_residuals(Eigen::VectorXd::Zero(50), normals(1, 50));
  const auto model = fit_rosce(fit, s, line_basis());
  EXPECT_EQ(model.theta, Eigen::VectorXd::Zero(10));
  EXPECT_TRUE(model.converged);
}

TEST(Rosce, ConstantEffectRecovered) {
  const auto s = even_line(400);
  const Eigen::VectorXd v = normals(2, 400);
  const Eigen::VectorXd w = 0.8 * v + 0.1 * normals(3, 400);
  const auto model = fit_rosce(ResidualFit::from_residuals(w, v), s, BasisSpec::constant(kLine));
  ASSERT_EQ(model.theta.size(), 1);
  EXPECT_GE(model.theta[0], 0.7);
  EXPECT_LE(model.theta[0], 0.9);
  EXPECT_LT(model.theta[0], 0.8);  // shrunk toward zero
}

TEST(Rosce, DeltaBoundsAreThePenaltyWeights) {
  const auto s = even_line(60);
  const Eigen::VectorXd v = normals(4, 60);
  const Eigen::VectorXd w = normals(5, 60);
  const auto spec = line_basis();
  const auto model = fit_rosce(ResidualFit::from_residuals(w, v), s, spec);
  Eigen::MatrixXd x = basis_matrix(spec, s);
  x.array().colwise() *= v.array();
  ASSERT_EQ(model.delta_bounds.size(), 10);
  for (Eigen::Index k = 0; k < 10; ++k) {
    EXPECT_NEAR(model.delta_bounds[k], std::sqrt(x.col(k).squaredNorm() / 60.0 / 60.0), 1e-15);
  }
  sqrtlasso::Problem p{w, x, model.delta_bounds};
  EXPECT_LE(sqrtlasso::kkt_residual(p, model.theta).residual, 1e-7);
}

TEST(Rosce, ShrinksRelativeToResidualLs) {
  const auto s = even_line(200);
  const Eigen::VectorXd v = normals(6, 200);
  const Eigen::VectorXd w = 0.5 * v + normals(7, 200);
  const auto fit = ResidualFit::from_residuals(w, v);
  const auto spec = BasisSpec::constant(kLine);
  const double rosce = fit_rosce(fit, s, spec).theta[0];
  const double ls = fit_residual_ls(fit, s, spec).theta[0];
  EXPECT_LE(std::abs(rosce), std::abs(ls));
  EXPECT_NEAR(ls, v.dot(w) / v.squaredNorm(), 1e-12);
}

TEST(Rosce, DeadCoordinatesAreZero) {
  // v vanishes on the right half, leaving the right components without data.
  const auto s = even_line(101);
  Eigen::VectorXd v = normals(8, 101);
  for (int i = 60; i < 101; ++i) v[i] = 0.0;
  const Eigen::VectorXd w = v;
  const auto model = fit_rosce(ResidualFit::from_residuals(w, v), s, line_basis());
  ASSERT_FALSE(model.dead_coordinates.empty());
  for (auto k : model.dead_coordinates) EXPECT_EQ(model.theta[static_cast<Eigen::Index>(k)], 0.0);
  EXPECT_EQ(model.dead_coordinates.back(), 9u);
}

TEST(Rosce, DegenerateExposure) {
  const auto s = even_line(20);
  const auto fit = ResidualFit::from_residuals(normals(9, 20), Eigen::VectorXd::Zero(20));
  EXPECT_THROW(fit_rosce(fit, s, line_basis()), DegenerateExposureError);
  EXPECT_THROW(fit_residual_ls(fit, s, line_basis()), DegenerateExposureError);
}

TEST(Rosce, ScaleEquivariance) {
  // Scaling w scales theta; the penalty does not depend on w.
  const auto s = even_line(80);
  const Eigen::VectorXd v = normals(10, 80);
  const Eigen::VectorXd w = 0.7 * v + 0.5 * normals(11, 80);
  const auto spec = line_basis(6, 0.4);
  const auto a = fit_rosce(ResidualFit::from_residuals(w, v), s, spec);
  const auto b = fit_rosce(ResidualFit::from_residuals(3.0 * w, v), s, spec);
  EXPECT_LE((3.0 * a.theta - b.theta).cwiseAbs().maxCoeff(), 1e-6);
  // Flipping the sign of v flips theta.
  const auto c = fit_rosce(ResidualFit::from_residuals(w, -v), s, spec);
  EXPECT_LE((a.theta + c.theta).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Rosce, DiagonalDesignSoftThresholds) {
  // Indicator basis: each coordinate sees only its own region.
  const auto dom = SpaceDomain::discrete(3);
  std::vector<Location> s;
  Eigen::VectorXd v(300), w(300);
  const Eigen::VectorXd e = normals(12, 300);
  const Eigen::VectorXd z = normals(13, 300);
  const double tau[3] = {0.0, 1.0, -2.0};
  for (int i = 0; i < 300; ++i) {
    s.push_back(Location::region(i % 3 + 1));
    v[i] = z[i];
    w[i] = tau[i % 3] * z[i] + 0.05 * e[i];
  }
  const auto model = fit_rosce(ResidualFit::from_residuals(w, v), s, BasisSpec::indicator(dom));
  EXPECT_NEAR(model.theta[1], 1.0, 0.05);
  EXPECT_NEAR(model.theta[2], -2.0, 0.05);
  EXPECT_LT(std::abs(model.theta[0]), 0.02);
}

TEST(EffectModel, EvaluatesBasisExpansion) {
  EffectModel m;
  m.spec = line_basis();
  m.theta = Eigen::VectorXd::LinSpaced(10, 1, 10);
  for (double x : {0.0, 3.3, 10.0}) {
    EXPECT_DOUBLE_EQ(m.effect_at(Location{x}), eval_basis(m.spec, Location{x}).dot(m.theta));
    EXPECT_DOUBLE_EQ(effect_at(m, Location{x}), m.effect_at(Location{x}));
  }
  const auto grid = even_line(11);
  const auto all = evaluate_effect(m, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_DOUBLE_EQ(all[static_cast<Eigen::Index>(i)], m.effect_at(grid[i]));
  m.theta.resize(3);
  EXPECT_THROW(m.effect_at(Location{1.0}), ConfigError);
  EXPECT_THROW(evaluate_effect(m, grid), ConfigError);
}

TEST(DirectLs, RecoversExactModel) {
  const auto s = even_line(200);
  const auto spec = line_basis(5, 0.5);
  const Eigen::MatrixXd phi = basis_matrix(spec, s);
  const Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(5, -1, 1);
  const Eigen::VectorXd eta = Eigen::VectorXd::LinSpaced(5, 2, 0);
  Dataset d;
  d.domain = kLine;
  d.s = s;
  d.z = normals(14, 200);
  d.y = (phi * theta).cwiseProduct(d.z) + phi * eta;
  const auto model = fit_direct_ls(d, spec);
  EXPECT_FALSE(model.ridge_fallback);
  EXPECT_LE((model.theta - theta).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DirectLs, RidgeFallbackOnRankDeficiency) {
  Dataset d;
  d.domain = kLine;
  d.s = even_line(30);
  d.z = Eigen::VectorXd::Ones(30);  // z phi duplicates phi
  d.y = normals(15, 30);
  const auto model = fit_direct_ls(d, line_basis(4, 0.6));
  EXPECT_TRUE(model.ridge_fallback);
  EXPECT_TRUE(model.theta.allFinite());
}

TEST(LeastSquares, FullRank) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  bool ridge = true;
  const auto x = least_squares(a, b, ridge);
  EXPECT_FALSE(ridge);
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 2.0, 1e-12);
}

namespace {

Dataset regions(const std::vector<int>& labels, const Eigen::VectorXd& y, const Eigen::VectorXd& z, int d) {
  Dataset data;
  data.domain = SpaceDomain::discrete(d);
  for (int r : labels) data.s.push_back(Location::region(r));
  data.y = y;
  data.z = z;
  return data;
}

}  // namespace

TEST(NaiveRegionLs, PerRegionSlope) {
  Eigen::VectorXd z(4), y(4);
  z << 1, 2, 1, 3;
  y << 2, 4, -1, -3;
  const auto m = fit_naive_region_ls(regions({1, 1, 2, 2}, y, z, 2));
  EXPECT_DOUBLE_EQ(m.theta[0], 2.0);
  EXPECT_DOUBLE_EQ(m.theta[1], -1.0);
  EXPECT_EQ(m.spec.kind(), BasisSpec::Kind::indicator);
}

TEST(NaiveRegionLs, MissingRegionAndDegenerate) {
  Eigen::VectorXd z(3), y(3);
  z << 1, 2, 1;
  y << 1, 1, 1;
  try {
    fit_naive_region_ls(regions({1, 1, 3}, y, z, 4));
    FAIL() << "expected MissingRegionError";
  } catch (const MissingRegionError& e) {
    EXPECT_EQ(e.regions(), (std::vector<int>{2, 4}));
  }
  z << 1, 0, 0;
  EXPECT_THROW(fit_naive_region_ls(regions({1, 2, 2}, y, z, 2)), DegenerateExposureError);
  Dataset cont;
  cont.domain = kLine;
  cont.s = even_line(3);
  cont.y = y;
  cont.z = z;
  EXPECT_THROW(fit_naive_region_ls(cont), ConfigError);
}

TEST(NaiveRegionLs, ConfoundedRegionIsBiased) {
  // Region 5 has tau = -1 but the naive slope lands near +0.5.
  const auto out = gen_discrete_experiment(20000, 5, 3);
  const auto m = fit_naive_region_ls(out.data);
  EXPECT_NEAR(m.theta[4], 0.5, 0.05);
}

TEST(GlsSre, IdentityKernelIsOls) {
  Dataset d;
  d.domain = kLine;
  d.s = even_line(50);
  d.z = normals(16, 50);
  d.y = 1.5 * d.z + normals(17, 50);
  MaternKernel k;
  k.variance = 0.0;
  k.noise = 1.0;
  const auto m = fit_gls_sre(d, k);
  EXPECT_NEAR(m.theta[0], d.z.dot(d.y) / d.z.squaredNorm(), 1e-12);
  d.y.setZero();
  EXPECT_EQ(fit_gls_sre(d, k).theta[0], 0.0);
  d.z.setZero();
  EXPECT_THROW(fit_gls_sre(d, k), DegenerateExposureError);
}

TEST(FitEffect, DispatchAgreesWithDirectCalls) {
  const auto out = gen_gp_example(GpCase::heterogeneous, 200, 5);
  FitOptions opt;
  opt.spec = line_basis();
  const auto fit = fit_residuals(out.data, opt.spec);
  EXPECT_EQ(fit_effect(Method::rosce, out.data, opt).theta, fit_rosce(fit, out.data.s, opt.spec).theta);
  EXPECT_EQ(fit_effect(Method::residual_ls, out.data, opt).theta, fit_residual_ls(fit, out.data.s, opt.spec).theta);
  EXPECT_EQ(fit_effect(Method::direct_ls, out.data, opt).theta, fit_direct_ls(out.data, opt.spec).theta);
  EXPECT_EQ(fit_effect(Method::gls_sre, out.data, opt).theta,
            fit_gls_sre(out.data, MaternKernel::defaults_for(out.data.domain)).theta);
  EXPECT_THROW(fit_effect(Method::naive_region_ls, out.data, opt), ConfigError);
}

TEST(FitEffect, ResidualLevelData) {
  const auto out = gen_eiv_experiment(41, 10, 1);
  ASSERT_TRUE(out.data.residual_level);
  FitOptions opt;
  opt.spec = eiv_basis(10);
  const auto m = fit_effect(Method::rosce, out.data, opt);
  EXPECT_EQ(m.theta, fit_rosce(ResidualFit::from_residuals(out.data.y, out.data.z), out.data.s, opt.spec).theta);
  EXPECT_THROW(fit_effect(Method::direct_ls, out.data, opt), ConfigError);
  EXPECT_THROW(fit_effect(Method::gls_sre, out.data, opt), ConfigError);
}
