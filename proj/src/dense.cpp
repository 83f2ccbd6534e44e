#include "scpsim/dense.hpp"

#include <cmath>

#include "scpsim/oracle.hpp"

namespace scpsim::dense {

Matrix identity(std::size_t dim) {
  Matrix out;
  out.dim = dim;
  out.entries.assign(dim * dim, {0.0, 0.0});
  for (std::size_t i = 0; i < dim; ++i) out.at(i, i) = {1.0, 0.0};
  return out;
}

namespace {

StateVector basis_state(int n, std::uint64_t col) {
  StateVector state(n);
  for (int j = 0; j < n; ++j) {
    if (bit_of(col, j, n)) state.apply_gate({GateKind::X, {j}});
  }
  return state;
}

}  // namespace

Matrix circuit_unitary(const QuantumCircuit& c) {
  const std::size_t dim = std::size_t{1} << c.n;
  Matrix out;
  out.dim = dim;
  out.entries.assign(dim * dim, {0.0, 0.0});
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector state = basis_state(c.n, col);
    state.apply_circuit(c);
    for (std::size_t row = 0; row < dim; ++row) out.at(row, col) = state.amp(row);
  }
  return out;
}

Matrix conjugated_z_observable(const QuantumCircuit& c, const PauliZMask& s) {
  const std::size_t dim = std::size_t{1} << c.n;
  Matrix out;
  out.dim = dim;
  out.entries.assign(dim * dim, {0.0, 0.0});
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector state = basis_state(c.n, col);
    state.apply_circuit(c);
    state.apply_z_mask_prefix(s);
    state.apply_circuit(c, /*inverse=*/true);
    for (std::size_t row = 0; row < dim; ++row) out.at(row, col) = state.amp(row);
  }
  return out;
}

Matrix pauli_matrix(const PauliOperator& p) {
  const int n = p.n();
  const std::size_t dim = std::size_t{1} << n;
  Matrix out;
  out.dim = dim;
  out.entries.assign(dim * dim, {0.0, 0.0});
  for (std::uint64_t col = 0; col < dim; ++col) {
    std::complex<double> factor = p.phase();
    std::uint64_t row = col;
    for (int j = 0; j < n; ++j) {
      const int bit = bit_of(col, j, n);
      switch (p.letters[static_cast<std::size_t>(j)]) {
        case PauliLetter::I:
          break;
        case PauliLetter::X:
          row ^= std::uint64_t{1} << (n - 1 - j);
          break;
        case PauliLetter::Z:
          if (bit) factor = -factor;
          break;
        case PauliLetter::Y:
          row ^= std::uint64_t{1} << (n - 1 - j);
          factor *= bit ? std::complex<double>{0.0, -1.0} : std::complex<double>{0.0, 1.0};
          break;
      }
    }
    out.at(row, col) = factor;
  }
  return out;
}

Matrix ecs_matrix(const ECSOperation& a) {
  const std::size_t dim = std::size_t{1} << a.n;
  Matrix out;
  out.dim = dim;
  out.entries.assign(dim * dim, {0.0, 0.0});
  for (std::size_t col = 0; col < dim; ++col) {
    for (int j = 0; j < a.sparsity; ++j) {
      const auto b = a.beta(j, col);
      if (b == std::complex<double>{0.0, 0.0}) continue;
      out.at(a.gamma(j, col), col) += b;
    }
  }
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix out;
  out.dim = a.dim;
  out.entries.assign(a.dim * a.dim, {0.0, 0.0});
  for (std::size_t i = 0; i < a.dim; ++i) {
    for (std::size_t k = 0; k < a.dim; ++k) {
      const auto aik = a.at(i, k);
      if (aik == std::complex<double>{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < a.dim; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  }
  return out;
}

Matrix adjoint(const Matrix& a) {
  Matrix out;
  out.dim = a.dim;
  out.entries.assign(a.dim * a.dim, {0.0, 0.0});
  for (std::size_t i = 0; i < a.dim; ++i) {
    for (std::size_t j = 0; j < a.dim; ++j) out.at(j, i) = std::conj(a.at(i, j));
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
  }
  return worst;
}

double deviation_from_identity(const Matrix& a) { return max_abs_diff(a, identity(a.dim)); }

double deviation_from_hermitian(const Matrix& a) { return max_abs_diff(a, adjoint(a)); }

std::set<int> support_of(const Matrix& a, int n, double tol) {
  std::set<int> support;
  for (int j = 0; j < n; ++j) {
    const std::size_t mask = std::size_t{1} << (n - 1 - j);
    bool trivial = true;
    for (std::size_t r = 0; r < a.dim && trivial; ++r) {
      for (std::size_t c = 0; c < a.dim; ++c) {
        if ((r & mask) != (c & mask)) {
          // Entries coupling the two half-spaces of qubit j.
          if (std::abs(a.at(r, c)) > tol) {
            trivial = false;
            break;
          }
        } else if (!(r & mask)) {
          // The two diagonal blocks must coincide.
          if (std::abs(a.at(r, c) - a.at(r | mask, c | mask)) > tol) {
            trivial = false;
            break;
          }
        }
      }
    }
    if (!trivial) support.insert(j);
  }
  return support;
}

}  // namespace scpsim::dense
