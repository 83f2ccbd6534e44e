#pragma once

#include <complex>
#include <cstdint>
#include <set>
#include <vector>

#include "scpsim/backends.hpp"
#include "scpsim/circuit.hpp"

// Small dense-matrix helpers backing the brute-force checks (conjugated
// observables, operator supports, assembled ECS matrices). Row-major,
// dimension 2^n, same index convention as StateVector.

namespace scpsim::dense {

struct Matrix {
  std::size_t dim = 0;
  std::vector<std::complex<double>> entries;  // row-major

  std::complex<double>& at(std::size_t r, std::size_t c) { return entries[r * dim + c]; }
  std::complex<double> at(std::size_t r, std::size_t c) const { return entries[r * dim + c]; }
};

Matrix identity(std::size_t dim);
Matrix circuit_unitary(const QuantumCircuit& c);

// C^dag (Z(s) tensor I_{n-m}) C, built column-by-column with the fast engine.
Matrix conjugated_z_observable(const QuantumCircuit& c, const PauliZMask& s);

Matrix pauli_matrix(const PauliOperator& p);
Matrix ecs_matrix(const ECSOperation& a);

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& a);

double max_abs_diff(const Matrix& a, const Matrix& b);
double deviation_from_identity(const Matrix& a);
double deviation_from_hermitian(const Matrix& a);

// Qubits on which the operator acts non-trivially (entries coupling the two
// half-spaces of the qubit, or differing diagonal blocks), at tolerance tol.
std::set<int> support_of(const Matrix& a, int n, double tol);

}  // namespace scpsim::dense
