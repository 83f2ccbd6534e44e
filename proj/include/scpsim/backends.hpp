#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scpsim/circuit.hpp"
#include "scpsim/rng.hpp"

namespace scpsim {

// ---------------------------------------------------------------------------
// Pauli operators with exact phase tracking (phase is a power of i).

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

struct PauliOperator {
  int phase_exponent = 0;            // operator = i^phase_exponent * product of letters
  std::vector<PauliLetter> letters;  // length n

  int n() const { return static_cast<int>(letters.size()); }
  bool is_hermitian() const { return phase_exponent % 2 == 0; }
  std::complex<double> phase() const;
  std::string to_string() const;

  bool operator==(const PauliOperator& other) const = default;
};

PauliOperator identity_pauli(int n);
PauliOperator pauli_from_zmask(int n, const PauliZMask& s);

// Product with correct phase, (a*b)(x) = a(b(x)).
PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);

// E^dag p E for a Clifford gate list E over {H, S, CZ}, by tableau update
// rules applied gate-by-gate from the last gate to the first.
PauliOperator conjugate_pauli_through_clifford(const std::vector<Gate>& clifford_gates,
                                               const PauliOperator& p);

// ---------------------------------------------------------------------------
// CT states: classically samplable distribution + computable amplitudes.

struct CTState {
  int n = 0;
  std::function<std::uint64_t(RandomStream&)> sample;      // x ~ |<x|phi>|^2
  std::function<std::complex<double>(std::uint64_t)> amplitude;  // <x|phi>
  std::optional<double> flat_magnitude;  // set when all non-zero amplitudes share one magnitude
};

enum class QubitPrep { Zero, PlusState, MagicT };  // |0>, H|0>, TH|0>

CTState product_ct_state(const std::vector<QubitPrep>& preps);

// ---------------------------------------------------------------------------
// ECS operations: unitaries with sparse, efficiently computable columns.
// Column x holds entries beta_j(x) at rows gamma_j(x), j = 0..sparsity-1,
// with beta_j(x) = 0 forcing gamma_j(x) = 0. `hermitian` is declared by the
// constructor (observables must be Hermitian; basis-preserving circuit
// sections need not be).

struct ECSOperation {
  int n = 0;
  int sparsity = 1;
  std::function<std::complex<double>(int j, std::uint64_t x)> beta;
  std::function<std::uint64_t(int j, std::uint64_t x)> gamma;
  bool basis_preserving = true;
  bool hermitian = true;
};

ECSOperation ecs_identity(int n);

// Pauli observable as a sparsity-1 ECS operation; rejects phase +/-i.
ECSOperation ecs_from_pauli(const PauliOperator& p);

// H_R (Z(s) tensor I) H_R: X on masked qubits in R, Z on masked qubits
// outside R, identity elsewhere.
ECSOperation ecs_for_simon_type(const std::vector<int>& r_qubits, const PauliZMask& s, int n);

// Basis-preserving section of a circuit (no H gates) as a sparsity-1 ECS
// operation: gamma flips the accumulated X mask, beta replays the diagonal
// phases. Hermitian only when the section is a real diagonal.
ECSOperation ecs_from_basis_preserving_circuit(const std::vector<Gate>& gates, int n);

// U|phi> for a basis-preserving U whose column map is an involution
// (guaranteed for Hermitian U; spot-checked here). Sampling and amplitude
// evaluation stay polynomial; flat magnitude is preserved.
CTState apply_basis_preserving(const CTState& phi, const ECSOperation& u);

// ---------------------------------------------------------------------------
// Expectation estimation.

struct ExpectationEstimate {
  double value = 0.0;
  std::uint64_t samples = 0;
  std::string method;  // "hoeffding" | "median-of-means" | "exact" | "identity"
};

// <phi|A|phi> for Hermitian A with ||A|| <= 1 by importance sampling:
// draw x ~ p_phi and average Y(x) = <x|A|phi> / <x|phi>, which has mean
// <phi|A|phi> and second moment <= 1. When phi is flat and A basis-preserving
// |Y| <= 1 holds pointwise and a Hoeffding sample count
// K = ceil(2 ln(2/delta) / epsilon^2) suffices; otherwise median-of-means
// with 18 ceil(ln(1/delta)) groups of ceil(6 / epsilon^2) samples.
ExpectationEstimate estimate_ct_ecs(const CTState& phi, const ECSOperation& a, double epsilon,
                                    double delta, std::uint64_t seed);

// Exact <phi|P|phi> for a product state and a Pauli observable (the Clifford
// conjugation backend path); no sampling.
double product_state_pauli_expectation(const std::vector<QubitPrep>& preps,
                                       const PauliOperator& p);

// Family dispatcher for sampled Pauli-expectation estimation: Simon-type circuits use
// phi = D H_Q|0^n> and A = H_R (Z(s) tensor I) H_R; Clifford Magic uses
// phi = T^n H^n|0^n> and A = E^dag (Z(s) tensor I) E. Generic circuits are
// rejected. s = 0^m returns 1 without sampling.
ExpectationEstimate backend_expectation(const QuantumCircuit& c, const PauliZMask& s,
                                        double epsilon, double delta, std::uint64_t seed);

// Deterministic Clifford-conjugation backend; requires a Clifford Magic
// circuit.
ExpectationEstimate clifford_backend_expectation(const QuantumCircuit& c, const PauliZMask& s);

}  // namespace scpsim
