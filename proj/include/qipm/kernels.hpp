#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version with identical results up to floating-point reassociation.
namespace qipm::kernels {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;

enum class Exec { Serial, Parallel };

/// G = E E^T
Eigen::MatrixXd gram_serial(const Eigen::MatrixXd& E);
Eigen::MatrixXd gram_omp(const Eigen::MatrixXd& E);
Eigen::MatrixXd gram(const Eigen::MatrixXd& E, Exec exec);

// Qubit q addresses bit q of the basis index (qubit 0 is the least significant).

void apply_hadamard_serial(StateVector& psi, int qubit);
void apply_hadamard_omp(StateVector& psi, int qubit);

/// Multiply amplitudes whose control and target bits are both set by e^{i phi}.
void apply_controlled_phase_serial(StateVector& psi, int control, int target, double phi);
void apply_controlled_phase_omp(StateVector& psi, int control, int target, double phi);

void apply_swap_serial(StateVector& psi, int q1, int q2);
void apply_swap_omp(StateVector& psi, int q1, int q2);

/// Apply U (dim x dim, dim = 2^system_qubits) to the low system register on
/// the branch where the control bit is set.
void apply_controlled_system_unitary_serial(StateVector& psi, int control, const Eigen::MatrixXcd& U);
void apply_controlled_system_unitary_omp(StateVector& psi, int control, const Eigen::MatrixXcd& U);

/// Ancilla rotation conditioned on the clock register value l:
///   |0> -> sqrt(1-f_l^2)|0> + f_l|1>,  |1> -> -f_l|0> + sqrt(1-f_l^2)|1>.
/// The clock occupies bits [clock_offset, clock_offset + log2(f.size())).
void apply_eigen_rotation_serial(StateVector& psi, int ancilla, int clock_offset, const std::vector<double>& f);
void apply_eigen_rotation_omp(StateVector& psi, int ancilla, int clock_offset, const std::vector<double>& f);

void apply_hadamard(StateVector& psi, int qubit, Exec exec);
void apply_controlled_phase(StateVector& psi, int control, int target, double phi, Exec exec);
void apply_swap(StateVector& psi, int q1, int q2, Exec exec);
void apply_controlled_system_unitary(StateVector& psi, int control, const Eigen::MatrixXcd& U, Exec exec);
void apply_eigen_rotation(StateVector& psi, int ancilla, int clock_offset, const std::vector<double>& f, Exec exec);

}  // namespace qipm::kernels
