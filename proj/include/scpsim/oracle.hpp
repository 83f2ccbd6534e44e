#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "scpsim/boolfn.hpp"
#include "scpsim/circuit.hpp"

namespace scpsim {

constexpr int kOracleMaxQubits = 24;

// Dense amplitudes of C|0^n>, indexed with qubit 0 as the most significant
// bit of the index.
class StateVector {
 public:
  explicit StateVector(int n);

  int n() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amps() const { return amps_; }
  std::complex<double> amp(std::uint64_t x) const { return amps_[x]; }

  void apply_gate(const Gate& g, bool inverse = false);
  void apply_circuit(const QuantumCircuit& c, bool inverse = false);

  // Z(s) on the measured prefix of width s.m (self-inverse diagonal).
  void apply_z_mask_prefix(const PauliZMask& s);

  double norm_squared() const;

 private:
  std::size_t qubit_mask(int qubit) const { return std::size_t{1} << (n_ - 1 - qubit); }

  int n_;
  std::vector<std::complex<double>> amps_;
};

struct OutputDistribution {
  int m = 0;
  std::vector<double> probs;  // 2^m entries
};

// C|0^n> by sequential gate application; rejects n > 24.
StateVector run(const QuantumCircuit& c);

// Marginal of |amps|^2 over the measured prefix.
OutputDistribution output_distribution(const QuantumCircuit& c);

// <0^n| C^dag (Z(s) tensor I_{n-m}) C |0^n> = sum_x (-1)^(s.x) p_m(x).
double pauli_expectation_exact(const QuantumCircuit& c, const PauliZMask& s);

// p(C, f) = sum_x f(x) p_m(x); rejects f.m != c.m.
double acceptance_probability_exact(const QuantumCircuit& c, const BooleanFunction& f);

}  // namespace scpsim
