#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cliffop/darboux.hpp"
#include "cliffop/random.hpp"
#include "cliffop/riccati.hpp"

using namespace cliffop;

namespace {

Multivector dense(Signature sig, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Multivector::Term> terms;
  for (std::uint32_t m = 0; m <= sig.full_mask(); ++m) terms.push_back({Blade{m}, Complex(u(rng), u(rng))});
  return Multivector::from_terms(sig, std::move(terms));
}

void BM_GeometricProduct(benchmark::State& state) {
  const Signature sig(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  const Multivector a = dense(sig, rng), b = dense(sig, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_GeometricProduct)->DenseRange(2, 8, 2);

void BM_EvalJet(benchmark::State& state) {
  const int n = 3;
  const ScalarExpr e = parse_expression("exp(0.3*x1 - x2)*cos(x3) + x1*x2^2/(2 + sin(x3))", n);
  const std::vector<double> p{0.1, -0.4, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(eval_jet(e, p));
}
BENCHMARK(BM_EvalJet);

void BM_DiracLaplacian(benchmark::State& state) {
  const Signature sig(static_cast<int>(state.range(0)));
  Rng rng(2);
  const MultivectorField f = random_field(rng, sig);
  std::vector<double> p(static_cast<std::size_t>(sig.dimension()), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dirac(f, p));
    benchmark::DoNotOptimize(laplacian(f, p));
  }
}
BENCHMARK(BM_DiracLaplacian)->Arg(2)->Arg(3)->Arg(4);

void BM_RiccatiResidualGrid(benchmark::State& state) {
  const int n = 3;
  const RiccatiCandidate c = log_derivative(parse_field(Signature(n), {{"1", "exp(x1)*cos(x2) + 3 + x3"}}));
  GridSpec grid = GridSpec::cube(n, -1.0, 1.0, 11);
  grid.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(riccati_residual(c, grid));
}
BENCHMARK(BM_RiccatiResidualGrid)->Arg(1)->Arg(4)->UseRealTime();

void BM_DarbouxTransform(benchmark::State& state) {
  const MultivectorField f = parse_field(Signature(2), {{"e1", "1"}});
  const MultivectorField g = parse_field(Signature(2), {{"1", "exp(0.6*x2)"}});
  const GridSpec grid = GridSpec::cube(2, -1.0, 1.0, 11);
  for (auto _ : state) benchmark::DoNotOptimize(darboux_transform(f, g, SpectralParam(0.8), grid));
}
BENCHMARK(BM_DarbouxTransform);

void BM_SeparableSolve(benchmark::State& state) {
  const int n = 3;
  const std::vector<ScalarExpr> v(n, parse_expression("-1", n));
  for (auto _ : state) benchmark::DoNotOptimize(separable_solve(Signature(n), v, {0, 0, 0}, {0, 0, 0}));
}
BENCHMARK(BM_SeparableSolve);

}  // namespace

BENCHMARK_MAIN();
