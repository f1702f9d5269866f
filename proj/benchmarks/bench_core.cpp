#include <benchmark/benchmark.h>

#include "robinfsi/assembly.hpp"
#include "robinfsi/fsi_moving.hpp"
#include "robinfsi/solve.hpp"

using namespace robinfsi;

namespace {

ChannelMeshes& meshes() {
  static ChannelMeshes ch = generate_channel_meshes(1.0, 0.5, 0.5, 40, 20, 20);
  return ch;
}

void bm_assemble_mass(benchmark::State& state) {
  const FESpace v(meshes().fluid, Family::P1Bubble, 2);
  for (auto _ : state) {
    auto m = assemble_mass(v, 1.0, meshes().fluid);
    benchmark::DoNotOptimize(m.nnz());
  }
}
BENCHMARK(bm_assemble_mass);

void bm_assemble_viscous(benchmark::State& state) {
  const FESpace v(meshes().fluid, Family::P1Bubble, 2);
  for (auto _ : state) {
    auto m = assemble_fluid_viscous(v, 0.035, meshes().fluid);
    benchmark::DoNotOptimize(m.nnz());
  }
}
BENCHMARK(bm_assemble_viscous);

void bm_saddle_factorization(benchmark::State& state) {
  const FESpace v(meshes().fluid, Family::P1Bubble, 2);
  const FESpace q(meshes().fluid, Family::P1, 1);
  const SparseMatrix a = assemble_fluid_viscous(v, 0.035, meshes().fluid);
  const SparseMatrix m = assemble_mass(v, 1.0, meshes().fluid);
  const SparseMatrix b = assemble_divergence(v, q, meshes().fluid);
  TripletList t;
  t.add_block(a, 0, 0, 1.0);
  t.add_block(m, 0, 0, 1e4);
  t.add_block_transposed(b, 0, v.n_dofs(), -1.0);
  t.add_block(b, v.n_dofs(), 0, 1.0);
  const int n = v.n_dofs() + q.n_dofs();
  SparseMatrix k = std::move(t).compress(n, n);
  // pin one pressure dof so the factorization is well posed
  DirichletSet bc(n);
  bc.set(v.n_dofs(), 0.0);
  std::vector<double> rhs(n, 0.0);
  apply_dirichlet(k, rhs, bc);
  for (auto _ : state) {
    Factorization f(k);
    benchmark::DoNotOptimize(f.size());
  }
}
BENCHMARK(bm_saddle_factorization);

void bm_moving_step(benchmark::State& state) {
  MaterialParams mat;
  SchemeConfig cfg;
  cfg.alpha = 100.0;
  cfg.dt = 1e-3;
  cfg.bc = BcVariant::DynamicPressure;
  MovingFsiSolver solver(meshes().fluid, meshes().solid, meshes().interface,
                         mat, cfg);
  auto st = solver.zero_state();
  st.v.coeffs.assign(st.v.coeffs.size(), 1e-3);
  for (auto _ : state) {
    auto next = solver.step(st);
    benchmark::DoNotOptimize(next.t);
  }
}
BENCHMARK(bm_moving_step);

}  // namespace

BENCHMARK_MAIN();
