#include "hdmd/dmd_core.hpp"
#include "hdmd/probes.hpp"
#include "hdmd/schrodinger.hpp"
#include "hdmd/spectral.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace hdmd;

Eigen::MatrixXcd random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXcd m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = {n(rng), n(rng)};
  return m;
}

// Snapshot generation plus G, A assembly on the benchmark problem; arg = grid points per axis.
void BM_SchrodingerAssembly(benchmark::State& state) {
  schrodinger::HarmonicOscillatorProblem problem;
  const int points[2] = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  const auto quad = tensor_trapezoid(problem.domain, points);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    const auto features = schrodinger::generate_snapshots(problem, quad, threads);
    benchmark::DoNotOptimize(assemble_gram_pair(features, quad, {kDefaultRankTolerance, threads, 4096}));
  }
  state.SetItemsProcessed(state.iterations() * quad.size());
}
BENCHMARK(BM_SchrodingerAssembly)->Args({75, 1})->Args({75, 4})->Args({150, 4})->Unit(benchmark::kMillisecond);

void BM_HermitianDmdAndEig(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Index n = state.range(0);
  const Eigen::MatrixXcd b = random_complex(2 * n, n, rng);
  const auto pair = make_gram_pair(b.adjoint() * b, random_complex(n, n, rng));
  for (auto _ : state) {
    const auto k = hermitian_dmd(pair);
    benchmark::DoNotOptimize(eigendecompose(k));
  }
}
BENCHMARK(BM_HermitianDmdAndEig)->Arg(50)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Edmd(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const Index n = state.range(0);
  const Eigen::MatrixXcd b = random_complex(2 * n, n, rng);
  const auto pair = make_gram_pair(b.adjoint() * b, random_complex(n, n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(edmd(pair));
}
BENCHMARK(BM_Edmd)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SymmetricProcrustes(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const Index n = state.range(0);
  const Eigen::MatrixXcd x = random_complex(4 * n, n, rng), y = random_complex(4 * n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_procrustes(x, y));
}
BENCHMARK(BM_SymmetricProcrustes)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ResolventProbe(benchmark::State& state) {
  const Index n_ref = state.range(0);
  const auto jac = free_jacobi(n_ref);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n_ref);
  v[0] = 1.0;
  const Index sizes[] = {10, 50, n_ref / 4};
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_convergence_probe(jac, v, {0.0, 1.0}, sizes));
}
BENCHMARK(BM_ResolventProbe)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ClusterAtoms(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> loc(0.5, 11.5), w(0.0, 1.0);
  std::vector<Atom> atoms;
  for (int i = 0; i < state.range(0); ++i) atoms.push_back({loc(rng), w(rng)});
  const AtomicMeasure mu(std::move(atoms));
  std::vector<double> refs;
  for (int e = 1; e <= 11; ++e) refs.push_back(e);
  for (auto _ : state) benchmark::DoNotOptimize(cluster_atoms(mu, refs, 0.4));
}
BENCHMARK(BM_ClusterAtoms)->Arg(400)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
