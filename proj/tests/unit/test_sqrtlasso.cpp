#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "oracle.hpp"
#include "rosce/error.hpp"
#include "rosce/sqrtlasso.hpp"

using namespace rosce;
using sqrtlasso::Problem;

namespace {

Problem make(Eigen::VectorXd r, Eigen::MatrixXd x, Eigen::VectorXd g) {
  return Problem{std::move(r), std::move(x), std::move(g)};
}

Problem from(const oracle::Instance& inst) { return make(inst.response, inst.design, inst.weights); }

}  // namespace

TEST(CoordinateMinimizer, MatchesGoldenSection) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = std::abs(u(rng)) + 0.1;
    const double b = u(rng);
    // c >= b^2 / a keeps the quadratic non-negative; c = b^2 / a is a kink
    // where rounding in f itself reaches about 1e-9.
    const double c = b * b / a + std::abs(u(rng)) * (trial % 5 == 0 ? 0.0 : 1.0);
    const double w = (trial % 7 == 0) ? 0.0 : std::abs(u(rng)) * std::sqrt(a) * 0.9;
    auto f = [&](double t) { return std::sqrt(std::max(a * t * t - 2 * b * t + c, 0.0)) + w * std::abs(t); };
    const double t = sqrtlasso::coordinate_minimizer(a, b, c, w);
    const double ref = oracle::golden(f, -20.0, 20.0, 200);
    EXPECT_LE(f(t), f(ref) + 1e-8 * (1.0 + f(ref))) << "a=" << a << " b=" << b << " c=" << c << " w=" << w;
  }
}

TEST(CoordinateMinimizer, KnownValues) {
  EXPECT_NEAR(sqrtlasso::coordinate_minimizer(4, 2, 2, 1), (3.0 - std::sqrt(3.0)) / 6.0, 1e-14);
  EXPECT_EQ(sqrtlasso::coordinate_minimizer(1, 0.5, 1, 0.6), 0.0);
  EXPECT_DOUBLE_EQ(sqrtlasso::coordinate_minimizer(2, 3, 10, 0), 1.5);
}

TEST(SqrtLasso, ValidatesInput) {
  EXPECT_THROW(sqrtlasso::solve(make(Eigen::VectorXd::Ones(3), Eigen::MatrixXd::Ones(4, 2), Eigen::VectorXd::Zero(2))),
               DataError);
  EXPECT_THROW(sqrtlasso::solve(make(Eigen::VectorXd::Ones(4), Eigen::MatrixXd::Ones(4, 2), Eigen::VectorXd::Zero(3))),
               DataError);
  Eigen::VectorXd neg(2);
  neg << 0.1, -0.1;
  EXPECT_THROW(sqrtlasso::solve(make(Eigen::VectorXd::Ones(4), Eigen::MatrixXd::Ones(4, 2), neg)), DataError);
  Eigen::VectorXd r = Eigen::VectorXd::Ones(4);
  r[2] = NAN;
  EXPECT_THROW(sqrtlasso::solve(make(r, Eigen::MatrixXd::Ones(4, 2), Eigen::VectorXd::Zero(2))), DataError);
}

TEST(SqrtLasso, ZeroResponseGivesZero) {
  oracle::Instance inst = oracle::random_instance(3, 30, 5);
  inst.response.setZero();
  const auto sol = sqrtlasso::solve(from(inst));
  EXPECT_TRUE(sol.converged);
  EXPECT_EQ(sol.coefficients, Eigen::VectorXd::Zero(5));
  EXPECT_EQ(sol.objective_value, 0.0);
}

TEST(SqrtLasso, UnpenalizedInterceptFitsConstant) {
  const auto sol = sqrtlasso::solve(make(Eigen::VectorXd::Constant(4, 2.0), Eigen::MatrixXd::Ones(4, 1),
                                         Eigen::VectorXd::Zero(1)));
  EXPECT_TRUE(sol.converged);
  EXPECT_NEAR(sol.coefficients[0], 2.0, 1e-10);
}

TEST(SqrtLasso, SmallProblemMatchesNestedOracle) {
  const auto inst = oracle::random_instance(11, 6, 3);
  const auto p = from(inst);
  const auto sol = sqrtlasso::solve(p);
  const auto ref = oracle::nested_line_search(inst.response, inst.design, inst.weights, 10.0);
  EXPECT_TRUE(sol.converged);
  EXPECT_LE((sol.coefficients - ref).lpNorm<Eigen::Infinity>(), 1e-5);
  EXPECT_LE(sol.objective_value, oracle::objective(inst.response, inst.design, inst.weights, ref) + 1e-12);
}

TEST(SqrtLasso, EnumerationAgreesWithNestedSearch) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = oracle::random_instance(seed, 12, 3);
    const auto a = oracle::enumerate_faces(inst.response, inst.design, inst.weights);
    const auto b = oracle::nested_line_search(inst.response, inst.design, inst.weights, 10.0);
    EXPECT_LE((a - b).lpNorm<Eigen::Infinity>(), 1e-5) << "seed " << seed;
  }
}

TEST(SqrtLasso, RandomInstancesMatchEnumeration) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = oracle::random_instance(100 + seed, 40, 8);
    const auto p = from(inst);
    const auto sol = sqrtlasso::solve(p);
    ASSERT_TRUE(sol.converged);
    const auto ref = oracle::enumerate_faces(inst.response, inst.design, inst.weights);
    EXPECT_LE((sol.coefficients - ref).lpNorm<Eigen::Infinity>(), 1e-5) << "seed " << seed;
    EXPECT_LE(sqrtlasso::kkt_residual(p, sol.coefficients).residual, 1e-7) << "seed " << seed;
  }
}

TEST(SqrtLasso, KktDetectsPerturbation) {
  const auto inst = oracle::random_instance(5, 30, 4);
  const auto p = from(inst);
  const auto sol = sqrtlasso::solve(p);
  EXPECT_LE(sqrtlasso::kkt_residual(p, sol.coefficients).residual, 1e-7);
  Eigen::VectorXd moved = sol.coefficients;
  moved[1] += 0.1;
  EXPECT_GT(sqrtlasso::kkt_residual(p, moved).residual, 1e-3);
}

TEST(SqrtLasso, KktAtExactInterpolation) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd r(3);
  r << 1, 2, 3;
  const auto report = sqrtlasso::kkt_residual(make(r, x, Eigen::VectorXd::Zero(3)), r);
  EXPECT_TRUE(report.nonsmooth_point);
  EXPECT_EQ(report.residual, 0.0);
}

TEST(SqrtLasso, TraceIsMonotone) {
  const auto inst = oracle::random_instance(21, 60, 10);
  sqrtlasso::Options opt;
  opt.record_trace = true;
  const auto sol = sqrtlasso::solve(from(inst), opt);
  ASSERT_FALSE(sol.trace.empty());
  for (std::size_t k = 1; k < sol.trace.size(); ++k) EXPECT_LE(sol.trace[k], sol.trace[k - 1] + 1e-13);
  EXPECT_NEAR(sol.trace.back(), sol.objective_value, 1e-13);
}

TEST(SqrtLasso, ObjectiveValueIsConsistent) {
  const auto inst = oracle::random_instance(8, 25, 6);
  const auto p = from(inst);
  const auto sol = sqrtlasso::solve(p);
  EXPECT_NEAR(sol.objective_value, sqrtlasso::objective(p, sol.coefficients), 1e-13);
  EXPECT_NEAR(sol.objective_value, oracle::objective(inst.response, inst.design, inst.weights, sol.coefficients),
              1e-13);
}

TEST(SqrtLasso, ShrinksTowardZeroRelativeToLeastSquares) {
  const auto inst = oracle::random_instance(13, 80, 4);
  Eigen::VectorXd g = inst.weights;
  g.setConstant(0.05);
  const auto sol = sqrtlasso::solve(make(inst.response, inst.design, g));
  const Eigen::VectorXd ls = inst.design.colPivHouseholderQr().solve(inst.response);
  EXPECT_LE(sol.coefficients.lpNorm<1>(), ls.lpNorm<1>() + 1e-12);
}

TEST(SqrtLasso, LargePenaltyForcesZero) {
  const auto inst = oracle::random_instance(2, 30, 5);
  const auto sol = sqrtlasso::solve(make(inst.response, inst.design, Eigen::VectorXd::Constant(5, 100.0)));
  EXPECT_EQ(sol.coefficients, Eigen::VectorXd::Zero(5));
}

TEST(SqrtLasso, ZeroColumnStaysZero) {
  auto inst = oracle::random_instance(4, 30, 5);
  inst.design.col(2).setZero();
  const auto sol = sqrtlasso::solve(from(inst));
  EXPECT_TRUE(sol.converged);
  EXPECT_EQ(sol.coefficients[2], 0.0);
}

TEST(SqrtLasso, ReportsNonConvergence) {
  const auto inst = oracle::random_instance(6, 50, 10);
  sqrtlasso::Options opt;
  opt.max_sweeps = 1;
  opt.tol = 1e-15;
  const auto sol = sqrtlasso::solve(from(inst), opt);
  EXPECT_FALSE(sol.converged);
  EXPECT_EQ(sol.iterations, 1);
}

TEST(SqrtLasso, SweepCostScalesQuadratically) {
  // Per-sweep time from p to 2p grows about 4x; allow a generous slack.
  auto per_sweep = [](int p) {
    const auto inst = oracle::random_instance(9, 2 * p, p);
    sqrtlasso::Options opt;
    opt.max_sweeps = 200;
    opt.tol = 1e-300;
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto sol = sqrtlasso::solve(from(inst), opt);
      const auto t1 = std::chrono::steady_clock::now();
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count() / sol.iterations);
    }
    return best;
  };
  const double small = per_sweep(100);
  const double large = per_sweep(200);
  EXPECT_LE(large / small, 4.0 * 6.0);
}
