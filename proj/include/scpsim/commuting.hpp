#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scpsim/backends.hpp"
#include "scpsim/boolfn.hpp"
#include "scpsim/circuit.hpp"
#include "scpsim/oracle.hpp"

namespace scpsim {

// One-ancilla interference circuit on n+1 qubits: H on the ancilla alongside
// C, then CZ(ancilla, j) for each masked j, then H alongside C^dag. The
// ancilla is qubit index n.
struct HadamardTestCircuit {
  QuantumCircuit base;
  PauliZMask s;
  int ancilla = 0;
  std::size_t gate_count = 0;  // 2|C| + |s| + 2
};

HadamardTestCircuit build_hadamard_test(const QuantumCircuit& c, const PauliZMask& s);

// Dense (n+1)-qubit state after the Hadamard test.
StateVector hadamard_test_state(const HadamardTestCircuit& h);

// Probability of measuring 0 on the ancilla, equal to (1 + <Z(s)>)/2.
// Computed both from the ancilla marginal of the dense state and from the
// base-circuit expectation; the two routes must agree within 1e-9.
double ancilla_prob0(const HadamardTestCircuit& h);

// Composite commuting gate G_j = (H tensor C^dag)(CZ_j tensor I)(H tensor C),
// supported on {ancilla} union lightcone(C, j).
struct CompositeGate {
  int j = 0;
  std::vector<int> support;
};

struct CommutingCircuit {
  int n_plus_1 = 0;
  QuantumCircuit base;
  PauliZMask s;
  int ancilla = 0;
  std::vector<CompositeGate> gates;
  int gate_count = 0;
  int locality = 0;  // max support size over composite gates
};

// Regroups the Hadamard test into |s| mutually commuting composite gates with
// the same output distribution.
CommutingCircuit regroup_commuting(const HadamardTestCircuit& h);

// Applies one composite gate by its defining elementary sequence.
void apply_composite_gate(StateVector& state, const CommutingCircuit& cc, int j);

// Dense (n+1)-qubit state after applying every composite gate in order.
StateVector commuting_circuit_state(const CommutingCircuit& cc);

// Ancilla-sample estimator: K = 4 ceil(2 ln(2/delta) / epsilon^2) Bernoulli
// draws from the oracle-computed ancilla marginal, returning
// 1 - 2 (frequency of outcome 1). Rejects s = 0^m and n+1 > 24.
ExpectationEstimate estimate_expectation_commuting(const QuantumCircuit& c, const PauliZMask& s,
                                                   double epsilon, double delta,
                                                   std::uint64_t seed);

struct ResourceReport {
  std::uint64_t s = 0;
  int m = 0;
  int gate_count = 0;
  int degree = 0;
  int locality = 0;
  int lightcone_bound = 0;        // 1 + max_j |lightcone(C, j)|
  int two_local_bound = 0;        // 2^d + 1; 0 when the base circuit has a CCZ
  bool gate_count_ok = false;     // gate_count <= degree
  bool locality_ok = false;       // locality <= lightcone_bound
  bool pass = false;
};

ResourceReport resource_report(const CommutingCircuit& cc, const BooleanFunction& f);

}  // namespace scpsim
