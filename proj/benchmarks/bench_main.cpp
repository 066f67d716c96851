#include <random>

#include <benchmark/benchmark.h>

#include "implicate/clifford.hpp"
#include "implicate/evolution.hpp"
#include "implicate/explicate.hpp"
#include "implicate/logic.hpp"

using namespace implicate;

namespace {

constexpr Vec3 kAxisY{0.0, 1.0, 0.0};

Multivector random_element(const std::shared_ptr<const AlgebraTable>& alg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Multivector m(alg);
  for (BladeMask b = 0; b < alg->size(); ++b) m[b] = Complex(u(rng), u(rng));
  return m;
}

void BM_GeometricProduct(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0)), q = static_cast<int>(state.range(1));
  const auto alg = make_algebra(Signature{p, q});
  std::mt19937_64 rng(1);
  const auto a = random_element(alg, rng), b = random_element(alg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_GeometricProduct)->Args({3, 0})->Args({1, 3})->Args({3, 3});

void BM_SplitStep(benchmark::State& state) {
  const Grid grid = Grid::symmetric(static_cast<std::size_t>(state.range(0)), 12.0);
  const auto psi = gaussian_packet(grid, 2.0, 0.7071067811865476, 0.0);
  const auto h = HamiltonianSpec::harmonic(1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(psi, h, 1e-3, 100, 100));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SplitStep)->Arg(512)->Arg(1024)->Arg(4096);

void BM_QuantumPotential(benchmark::State& state) {
  const Grid grid = Grid::symmetric(static_cast<std::size_t>(state.range(0)), 12.0);
  const auto polar = polar_fields(harmonic_eigenstate(grid, 1, 1.0, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(quantum_potential_x(polar, 1.0));
}
BENCHMARK(BM_QuantumPotential)->Arg(512)->Arg(1024)->Arg(4096);

void BM_LatticeClosure(benchmark::State& state) {
  const std::vector<Projection> atoms = {projection_from_axis(kAxisZ, 1), projection_from_axis(kAxisZ, -1),
                                         projection_from_axis(kAxisX, 1), projection_from_axis(kAxisX, -1),
                                         projection_from_axis(kAxisY, 1), projection_from_axis(kAxisY, -1)};
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<Projection> gens(atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(n));
  for (auto _ : state) {
    auto lattice = ProjectionLattice::generate(gens);
    benchmark::DoNotOptimize(orthomodular_check(lattice));
  }
}
BENCHMARK(BM_LatticeClosure)->Arg(2)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
