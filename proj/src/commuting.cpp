#include "scpsim/commuting.hpp"

#include <cmath>

namespace scpsim {

namespace {

constexpr double kDualRouteTolerance = 1e-9;

void check_mask(const QuantumCircuit& c, const PauliZMask& s, const char* what) {
  if (s.m != c.m) throw validation_error(std::string(what) + ": mask width != measured prefix");
  if (s.s >> s.m) throw validation_error(std::string(what) + ": mask has bits beyond m");
}

}  // namespace

HadamardTestCircuit build_hadamard_test(const QuantumCircuit& c, const PauliZMask& s) {
  check_mask(c, s, "build_hadamard_test");
  if (s.s == 0) {
    throw validation_error(
        "build_hadamard_test: s = 0^m needs no test, the expectation is 1");
  }
  HadamardTestCircuit h;
  h.base = c;
  h.s = s;
  h.ancilla = c.n;
  h.gate_count = 2 * c.size() + static_cast<std::size_t>(hamming_weight(s.s)) + 2;
  return h;
}

StateVector hadamard_test_state(const HadamardTestCircuit& h) {
  const int total = h.base.n + 1;
  if (total > kOracleMaxQubits) {
    throw capacity_error("hadamard_test_state: n + 1 exceeds the dense-oracle cap");
  }
  StateVector state(total);
  state.apply_gate({GateKind::H, {h.ancilla}});
  state.apply_circuit(h.base);
  for (int j = 0; j < h.s.m; ++j) {
    if (bit_of(h.s.s, j, h.s.m)) state.apply_gate({GateKind::CZ, {h.ancilla, j}});
  }
  state.apply_circuit(h.base, /*inverse=*/true);
  state.apply_gate({GateKind::H, {h.ancilla}});
  return state;
}

double ancilla_prob0(const HadamardTestCircuit& h) {
  const StateVector state = hadamard_test_state(h);
  // Ancilla is the last qubit, so its bit is the least significant one.
  double marginal = 0.0;
  for (std::uint64_t x = 0; x < state.dim(); ++x) {
    if ((x & 1u) == 0) marginal += std::norm(state.amp(x));
  }
  const double from_expectation = 0.5 * (1.0 + pauli_expectation_exact(h.base, h.s));
  if (std::abs(marginal - from_expectation) > kDualRouteTolerance) {
    throw validation_error("ancilla_prob0: marginal and expectation routes disagree by " +
                           std::to_string(std::abs(marginal - from_expectation)));
  }
  return marginal;
}

CommutingCircuit regroup_commuting(const HadamardTestCircuit& h) {
  CommutingCircuit cc;
  cc.n_plus_1 = h.base.n + 1;
  cc.base = h.base;
  cc.s = h.s;
  cc.ancilla = h.ancilla;
  int max_support = 0;
  for (int j = 0; j < h.s.m; ++j) {
    if (!bit_of(h.s.s, j, h.s.m)) continue;
    const auto cone = lightcone(h.base, j);
    CompositeGate gate;
    gate.j = j;
    gate.support.assign(cone.begin(), cone.end());
    gate.support.push_back(h.ancilla);
    max_support = std::max(max_support, static_cast<int>(gate.support.size()));
    cc.gates.push_back(std::move(gate));
  }
  cc.gate_count = static_cast<int>(cc.gates.size());
  cc.locality = max_support;
  return cc;
}

void apply_composite_gate(StateVector& state, const CommutingCircuit& cc, int j) {
  state.apply_gate({GateKind::H, {cc.ancilla}});
  state.apply_circuit(cc.base);
  state.apply_gate({GateKind::CZ, {cc.ancilla, j}});
  state.apply_circuit(cc.base, /*inverse=*/true);
  state.apply_gate({GateKind::H, {cc.ancilla}});
}

StateVector commuting_circuit_state(const CommutingCircuit& cc) {
  if (cc.n_plus_1 > kOracleMaxQubits) {
    throw capacity_error("commuting_circuit_state: n + 1 exceeds the dense-oracle cap");
  }
  StateVector state(cc.n_plus_1);
  for (const auto& gate : cc.gates) apply_composite_gate(state, cc, gate.j);
  return state;
}

ExpectationEstimate estimate_expectation_commuting(const QuantumCircuit& c, const PauliZMask& s,
                                                   double epsilon, double delta,
                                                   std::uint64_t seed) {
  check_mask(c, s, "estimate_expectation_commuting");
  if (s.s == 0) return {1.0, 0, "identity"};
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw validation_error("estimate_expectation_commuting: epsilon must lie in (0, 1]");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw validation_error("estimate_expectation_commuting: delta must lie in (0, 1)");
  }
  const auto h = build_hadamard_test(c, s);
  const double prob0 = ancilla_prob0(h);

  // Quantum access is emulated by exact Bernoulli draws of the single ancilla
  // bit; the estimator consumes nothing but those bits. The factor 4 covers
  // the rescaling from outcome frequency to expectation.
  const auto k = 4 * static_cast<std::uint64_t>(
                         std::ceil(2.0 * std::log(2.0 / delta) / (epsilon * epsilon)));
  RandomStream stream = RandomStream::root(seed).derive("commuting-access").derive(s.s);
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (stream.next_bernoulli(1.0 - prob0)) ++ones;
  }
  const double freq1 = static_cast<double>(ones) / static_cast<double>(k);
  return {1.0 - 2.0 * freq1, k, "ancilla-sampling"};
}

ResourceReport resource_report(const CommutingCircuit& cc, const BooleanFunction& f) {
  if (f.m() != cc.s.m) throw validation_error("resource_report: f.m != mask width");
  ResourceReport report;
  report.s = cc.s.s;
  report.m = cc.s.m;
  report.gate_count = cc.gate_count;
  report.degree = f.degree();
  report.locality = cc.locality;
  int max_cone = 0;
  for (int j = 0; j < cc.s.m; ++j) {
    max_cone = std::max(max_cone, static_cast<int>(lightcone(cc.base, j).size()));
  }
  report.lightcone_bound = 1 + max_cone;
  bool has_ccz = false;
  for (const auto& layer : cc.base.layers) {
    for (const auto& g : layer) has_ccz = has_ccz || g.kind == GateKind::CCZ;
  }
  report.two_local_bound = has_ccz ? 0 : (1 << depth(cc.base)) + 1;
  report.gate_count_ok = report.gate_count <= report.degree;
  report.locality_ok = report.locality <= report.lightcone_bound;
  report.pass = report.gate_count_ok && report.locality_ok;
  return report;
}

}  // namespace scpsim
