// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "qipm/kernels.hpp"
#include "qipm/qlsa_sim.hpp"

using namespace qipm;
using kernels::Exec;
using kernels::StateVector;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void set_label(benchmark::State& state) { state.SetLabel(state.range(1) ? "omp" : "serial"); }

StateVector random_state(int qubits) {
  StateVector psi = StateVector::Random(std::int64_t{1} << qubits);
  psi.normalize();
  return psi;
}

void BM_Gram(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Eigen::MatrixXd E = Eigen::MatrixXd::Random(m, 2 * m);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(E, exec_of(state)));
  set_label(state);
}

void BM_Hadamard(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  StateVector psi = random_state(q);
  const Exec e = exec_of(state);
  for (auto _ : state) {
    for (int k = 0; k < q; ++k) kernels::apply_hadamard(psi, k, e);
    benchmark::ClobberMemory();
  }
  set_label(state);
}

void BM_ControlledPhase(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  StateVector psi = random_state(q);
  const Exec e = exec_of(state);
  for (auto _ : state) {
    for (int k = 1; k < q; ++k) kernels::apply_controlled_phase(psi, k, 0, 0.3, e);
    benchmark::ClobberMemory();
  }
  set_label(state);
}

void BM_ControlledUnitary(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  StateVector psi = random_state(q);
  const Eigen::MatrixXcd U = Eigen::MatrixXcd::Random(8, 8);
  const Exec e = exec_of(state);
  for (auto _ : state) {
    kernels::apply_controlled_system_unitary(psi, q - 1, U, e);
    benchmark::ClobberMemory();
  }
  set_label(state);
}

void BM_EigenRotation(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  StateVector psi = random_state(q);
  std::vector<double> f(std::size_t{1} << (q - 4), 0.25);
  const Exec e = exec_of(state);
  for (auto _ : state) {
    kernels::apply_eigen_rotation(psi, q - 1, 3, f, e);
    benchmark::ClobberMemory();
  }
  set_label(state);
}

void BM_Qft(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  StateVector psi = random_state(q);
  const Exec e = exec_of(state);
  for (auto _ : state) {
    qlsa::apply_qft(psi, 0, q, false, e);
    benchmark::ClobberMemory();
  }
  set_label(state);
}

}  // namespace

BENCHMARK(BM_Gram)->ArgsProduct({{32, 128, 256}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Hadamard)->ArgsProduct({{12, 16, 20}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ControlledPhase)->ArgsProduct({{12, 16, 20}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ControlledUnitary)->ArgsProduct({{12, 16, 20}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EigenRotation)->ArgsProduct({{12, 16, 20}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Qft)->ArgsProduct({{12, 16}, {0, 1}})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
