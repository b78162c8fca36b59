#include <benchmark/benchmark.h>

#include <random>

#include "rosce/bootstrap.hpp"
#include "rosce/spatial_basis.hpp"
#include "rosce/sqrtlasso.hpp"
#include "rosce/synth.hpp"

using namespace rosce;

namespace {

sqrtlasso::Problem random_problem(int n, int p) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  sqrtlasso::Problem pr;
  pr.design = Eigen::MatrixXd::NullaryExpr(n, p, [&] { return normal(rng); });
  pr.response = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
  pr.response += pr.design.leftCols(std::min(p, 5)).rowwise().sum();
  pr.weights = (pr.design.colwise().squaredNorm().transpose() / n / n).cwiseSqrt();
  return pr;
}

}  // namespace

// Fixed 50 sweeps on n = 2p: O(p^2) per sweep plus the O(n p^2) Gram setup.
static void BM_SolverSweeps(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto pr = random_problem(2 * p, p);
  sqrtlasso::Options opt;
  opt.max_sweeps = 50;
  opt.tol = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(sqrtlasso::solve(pr, opt));
  state.SetComplexityN(p);
}
BENCHMARK(BM_SolverSweeps)->RangeMultiplier(2)->Range(25, 400)->Complexity();

static void BM_SolverToConvergence(benchmark::State& state) {
  const auto pr = random_problem(676, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sqrtlasso::solve(pr));
}
BENCHMARK(BM_SolverToConvergence)->Arg(100)->Arg(300);

static void BM_BasisEval2d(benchmark::State& state) {
  const auto spec = multiresolution_basis_2d(SpaceDomain::continuous({{0, 10}, {0, 10}}));
  Eigen::VectorXd out(static_cast<Eigen::Index>(spec.dimension()));
  double s = 0.0;
  for (auto _ : state) {
    s = s > 9.9 ? 0.0 : s + 0.013;
    eval_basis_into(spec, Location{s, 10.0 - s}, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_BasisEval2d);

static void BM_BootstrapReplicate(benchmark::State& state) {
  const auto out = gen_gp_example(GpCase::heterogeneous, static_cast<std::size_t>(state.range(0)), 0);
  FitOptions fo;
  fo.spec = BasisSpec::bspline(out.data.domain, {BasisLevel::uniform(10, 0.2, 1)});
  std::uint64_t b = 0;
  for (auto _ : state) {
    const auto idx = resample_indices(out.data.size(), 0, b++, 0);
    benchmark::DoNotOptimize(fit_effect(Method::rosce, out.data.subset(idx), fo));
  }
}
BENCHMARK(BM_BootstrapReplicate)->Arg(300)->Arg(1000);

BENCHMARK_MAIN();
