#include "qipm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "qipm/errors.hpp"

namespace qipm::kernels {

namespace {

using Index = std::int64_t;

void check_qubit(const StateVector& psi, int q) {
  if (q < 0 || (Index{1} << q) >= psi.size()) throw DimensionError("qubit index out of range");
}

int log2_exact(Index dim) {
  int k = 0;
  while ((Index{1} << k) < dim) ++k;
  if ((Index{1} << k) != dim) throw DimensionError("dimension is not a power of two");
  return k;
}

// Insert a zero bit at position q into k.
inline Index insert_zero(Index k, int q) {
  const Index low = k & ((Index{1} << q) - 1);
  return ((k >> q) << (q + 1)) | low;
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

Eigen::MatrixXd gram_serial(const Eigen::MatrixXd& E) {
  const Index m = E.rows();
  const Eigen::MatrixXd Et = E.transpose();
  Eigen::MatrixXd G(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double v = Et.col(i).dot(Et.col(j));
      G(i, j) = v;
      G(j, i) = v;
    }
  }
  return G;
}

Eigen::MatrixXd gram_omp(const Eigen::MatrixXd& E) {
  const Index m = E.rows();
  const Eigen::MatrixXd Et = E.transpose();
  Eigen::MatrixXd G(m, m);
#pragma omp parallel for schedule(dynamic)
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double v = Et.col(i).dot(Et.col(j));
      G(i, j) = v;
      G(j, i) = v;
    }
  }
  return G;
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& E, Exec exec) {
  return exec == Exec::Serial ? gram_serial(E) : gram_omp(E);
}

void apply_hadamard_serial(StateVector& psi, int qubit) {
  check_qubit(psi, qubit);
  const Index half = psi.size() / 2;
  const Index stride = Index{1} << qubit;
  for (Index k = 0; k < half; ++k) {
    const Index i0 = insert_zero(k, qubit);
    const Index i1 = i0 | stride;
    const Complex a = psi[i0];
    const Complex b = psi[i1];
    psi[i0] = (a + b) * kInvSqrt2;
    psi[i1] = (a - b) * kInvSqrt2;
  }
}

void apply_hadamard_omp(StateVector& psi, int qubit) {
  check_qubit(psi, qubit);
  const Index half = psi.size() / 2;
  const Index stride = Index{1} << qubit;
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < half; ++k) {
    const Index i0 = insert_zero(k, qubit);
    const Index i1 = i0 | stride;
    const Complex a = psi[i0];
    const Complex b = psi[i1];
    psi[i0] = (a + b) * kInvSqrt2;
    psi[i1] = (a - b) * kInvSqrt2;
  }
}

void apply_controlled_phase_serial(StateVector& psi, int control, int target, double phi) {
  check_qubit(psi, control);
  check_qubit(psi, target);
  const Index mask = (Index{1} << control) | (Index{1} << target);
  const Complex w = std::polar(1.0, phi);
  for (Index i = 0; i < psi.size(); ++i)
    if ((i & mask) == mask) psi[i] *= w;
}

void apply_controlled_phase_omp(StateVector& psi, int control, int target, double phi) {
  check_qubit(psi, control);
  check_qubit(psi, target);
  const Index mask = (Index{1} << control) | (Index{1} << target);
  const Complex w = std::polar(1.0, phi);
  const Index size = psi.size();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < size; ++i)
    if ((i & mask) == mask) psi[i] *= w;
}

void apply_swap_serial(StateVector& psi, int q1, int q2) {
  check_qubit(psi, q1);
  check_qubit(psi, q2);
  if (q1 == q2) return;
  const Index b1 = Index{1} << q1;
  const Index b2 = Index{1} << q2;
  for (Index i = 0; i < psi.size(); ++i)
    if ((i & b1) && !(i & b2)) std::swap(psi[i], psi[(i & ~b1) | b2]);
}

void apply_swap_omp(StateVector& psi, int q1, int q2) {
  check_qubit(psi, q1);
  check_qubit(psi, q2);
  if (q1 == q2) return;
  const Index b1 = Index{1} << q1;
  const Index b2 = Index{1} << q2;
  const Index size = psi.size();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < size; ++i)
    if ((i & b1) && !(i & b2)) std::swap(psi[i], psi[(i & ~b1) | b2]);
}

void apply_controlled_system_unitary_serial(StateVector& psi, int control, const Eigen::MatrixXcd& U) {
  check_qubit(psi, control);
  const Index dim = U.rows();
  const int sys = log2_exact(dim);
  if (control < sys) throw DimensionError("control qubit overlaps the system register");
  const Index blocks = psi.size() / dim;
  const Index cbit = Index{1} << (control - sys);
  Eigen::VectorXcd tmp(dim);
  for (Index blk = 0; blk < blocks; ++blk) {
    if (!(blk & cbit)) continue;
    auto seg = psi.segment(blk * dim, dim);
    tmp.noalias() = U * seg;
    seg = tmp;
  }
}

void apply_controlled_system_unitary_omp(StateVector& psi, int control, const Eigen::MatrixXcd& U) {
  check_qubit(psi, control);
  const Index dim = U.rows();
  const int sys = log2_exact(dim);
  if (control < sys) throw DimensionError("control qubit overlaps the system register");
  const Index blocks = psi.size() / dim;
  const Index cbit = Index{1} << (control - sys);
#pragma omp parallel
  {
    Eigen::VectorXcd tmp(dim);
#pragma omp for schedule(static)
    for (Index blk = 0; blk < blocks; ++blk) {
      if (!(blk & cbit)) continue;
      auto seg = psi.segment(blk * dim, dim);
      tmp.noalias() = U * seg;
      seg = tmp;
    }
  }
}

void apply_eigen_rotation_serial(StateVector& psi, int ancilla, int clock_offset, const std::vector<double>& f) {
  check_qubit(psi, ancilla);
  log2_exact(static_cast<Index>(f.size()));
  const Index clock_mask = static_cast<Index>(f.size()) - 1;
  const Index abit = Index{1} << ancilla;
  const Index half = psi.size() / 2;
  for (Index k = 0; k < half; ++k) {
    const Index i0 = insert_zero(k, ancilla);
    const Index i1 = i0 | abit;
    const double fl = f[static_cast<std::size_t>((i0 >> clock_offset) & clock_mask)];
    const double cl = std::sqrt(std::max(0.0, 1.0 - fl * fl));
    const Complex a = psi[i0];
    const Complex b = psi[i1];
    psi[i0] = cl * a - fl * b;
    psi[i1] = fl * a + cl * b;
  }
}

void apply_eigen_rotation_omp(StateVector& psi, int ancilla, int clock_offset, const std::vector<double>& f) {
  check_qubit(psi, ancilla);
  log2_exact(static_cast<Index>(f.size()));
  const Index clock_mask = static_cast<Index>(f.size()) - 1;
  const Index abit = Index{1} << ancilla;
  const Index half = psi.size() / 2;
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < half; ++k) {
    const Index i0 = insert_zero(k, ancilla);
    const Index i1 = i0 | abit;
    const double fl = f[static_cast<std::size_t>((i0 >> clock_offset) & clock_mask)];
    const double cl = std::sqrt(std::max(0.0, 1.0 - fl * fl));
    const Complex a = psi[i0];
    const Complex b = psi[i1];
    psi[i0] = cl * a - fl * b;
    psi[i1] = fl * a + cl * b;
  }
}

void apply_hadamard(StateVector& psi, int qubit, Exec exec) {
  exec == Exec::Serial ? apply_hadamard_serial(psi, qubit) : apply_hadamard_omp(psi, qubit);
}

void apply_controlled_phase(StateVector& psi, int control, int target, double phi, Exec exec) {
  exec == Exec::Serial ? apply_controlled_phase_serial(psi, control, target, phi)
                       : apply_controlled_phase_omp(psi, control, target, phi);
}

void apply_swap(StateVector& psi, int q1, int q2, Exec exec) {
  exec == Exec::Serial ? apply_swap_serial(psi, q1, q2) : apply_swap_omp(psi, q1, q2);
}

void apply_controlled_system_unitary(StateVector& psi, int control, const Eigen::MatrixXcd& U, Exec exec) {
  exec == Exec::Serial ? apply_controlled_system_unitary_serial(psi, control, U)
                       : apply_controlled_system_unitary_omp(psi, control, U);
}

void apply_eigen_rotation(StateVector& psi, int ancilla, int clock_offset, const std::vector<double>& f, Exec exec) {
  exec == Exec::Serial ? apply_eigen_rotation_serial(psi, ancilla, clock_offset, f)
                       : apply_eigen_rotation_omp(psi, ancilla, clock_offset, f);
}

}  // namespace qipm::kernels
