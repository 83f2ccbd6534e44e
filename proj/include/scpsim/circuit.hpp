#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "scpsim/bits.hpp"
#include "scpsim/errors.hpp"

namespace scpsim {

enum class GateKind { H, T, S, Z, X, CZ, CCZ };

int gate_arity(GateKind kind);
std::string gate_name(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<int> qubits;  // distinct, within [0, n)

  bool operator==(const Gate& other) const = default;
};

using Layer = std::vector<Gate>;

// A named group of consecutive layers, used by the circuit-family builders
// (Q/D/R for Simon-type circuits, H/T/E for Clifford Magic).
struct Section {
  std::string tag;
  std::size_t first_layer = 0;
  std::size_t layer_count = 0;

  bool operator==(const Section& other) const = default;
};

enum class CircuitFamily { Generic, SimonType, Iqp, CliffordMagic };

std::string family_name(CircuitFamily family);

// Layered gate list over {H, T, CZ} plus the derived S, Z, X and CCZ, with a
// measured prefix of m qubits (qubits 0..m-1).
struct QuantumCircuit {
  int n = 0;
  int m = 0;
  std::vector<Layer> layers;
  std::vector<Section> sections;

  std::size_t size() const;  // total gate count

  bool operator==(const QuantumCircuit& other) const = default;
};

// Z(s) on the measured prefix, padded by identity on the rest.
struct PauliZMask {
  int m = 0;
  std::uint64_t s = 0;
};

// Text format: header `qc n=<int> m=<int>`, layers separated by `/` or
// newlines, gates within a layer separated by `;`, `#section <tag>` comment
// lines carrying builder metadata. Throws validation_error with the line
// number on malformed input.
QuantumCircuit parse_circuit(const std::string& text);
std::string render_circuit(const QuantumCircuit& c);

// Number of layers after greedy left-packing of the serialized gate order
// (each gate goes right after the last earlier gate sharing a qubit).
int depth(const QuantumCircuit& c);

// Backward lightcone of output qubit j through the stored layer structure.
// supp(C^dag (Z_j tensor I) C) is always contained in the result; the size is
// at most min(n, a^d) where a is the largest gate arity in the circuit.
std::set<int> lightcone(const QuantumCircuit& c, int j);

// Family detected from section metadata: Q/D/R -> Simon-type (promoted to IQP
// when Q = R = all qubits and D is diagonal), H/T/E -> Clifford Magic.
CircuitFamily circuit_family(const QuantumCircuit& c);

std::vector<int> section_hadamard_qubits(const QuantumCircuit& c, const std::string& tag);
std::vector<Gate> section_gates(const QuantumCircuit& c, const std::string& tag);
bool has_section(const QuantumCircuit& c, const std::string& tag);

// H_R . D . H_Q with section metadata. D must be basis-preserving: any gate
// from the set except H. Throws validation_error otherwise.
QuantumCircuit build_simon_type(int n, int m, const std::vector<int>& q_qubits,
                                const std::vector<int>& r_qubits,
                                const std::vector<Layer>& d_layers);

// E . T^n . H^n with section metadata. E must use only H, S, CZ.
QuantumCircuit build_clifford_magic(int n, int m, const std::vector<Gate>& e_gates);

// Random brickwork of H/T/S/CZ with exactly d layers (every qubit is covered
// in every layer, so greedy re-layering preserves d). Deterministic in seed.
QuantumCircuit build_random_constant_depth(int n, int m, int d, std::uint64_t seed);

// Unstructured random gate sequence (all seven kinds), greedy-packed.
// Test-corpus generator for the identity and estimator checks.
QuantumCircuit build_random_circuit(int n, int m, int gate_count, std::uint64_t seed);

}  // namespace scpsim
