#include "scpsim/oracle.hpp"

#include <cmath>
#include <numbers>

namespace scpsim {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

void check_capacity(int n, const char* what) {
  if (n > kOracleMaxQubits) {
    throw capacity_error(std::string(what) + ": n = " + std::to_string(n) +
                         " exceeds the dense-oracle cap of " + std::to_string(kOracleMaxQubits));
  }
}

}  // namespace

StateVector::StateVector(int n) : n_(n) {
  if (n < 1) throw validation_error("StateVector: n must be positive");
  check_capacity(n, "StateVector");
  amps_.assign(std::size_t{1} << n, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

void StateVector::apply_gate(const Gate& g, bool inverse) {
  const std::size_t dim = amps_.size();
  switch (g.kind) {
    case GateKind::H: {
      const std::size_t mask = qubit_mask(g.qubits[0]);
      const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
      for (std::size_t x = 0; x < dim; ++x) {
        if (x & mask) continue;
        const auto a = amps_[x];
        const auto b = amps_[x | mask];
        amps_[x] = (a + b) * inv_sqrt2;
        amps_[x | mask] = (a - b) * inv_sqrt2;
      }
      break;
    }
    case GateKind::X: {
      const std::size_t mask = qubit_mask(g.qubits[0]);
      for (std::size_t x = 0; x < dim; ++x) {
        if (x & mask) continue;
        std::swap(amps_[x], amps_[x | mask]);
      }
      break;
    }
    case GateKind::T: {
      const std::size_t mask = qubit_mask(g.qubits[0]);
      const double angle = inverse ? -std::numbers::pi / 4 : std::numbers::pi / 4;
      const std::complex<double> phase = std::polar(1.0, angle);
      for (std::size_t x = 0; x < dim; ++x) {
        if (x & mask) amps_[x] *= phase;
      }
      break;
    }
    case GateKind::S: {
      const std::size_t mask = qubit_mask(g.qubits[0]);
      const std::complex<double> phase = inverse ? -kImag : kImag;
      for (std::size_t x = 0; x < dim; ++x) {
        if (x & mask) amps_[x] *= phase;
      }
      break;
    }
    case GateKind::Z: {
      const std::size_t mask = qubit_mask(g.qubits[0]);
      for (std::size_t x = 0; x < dim; ++x) {
        if (x & mask) amps_[x] = -amps_[x];
      }
      break;
    }
    case GateKind::CZ: {
      const std::size_t mask = qubit_mask(g.qubits[0]) | qubit_mask(g.qubits[1]);
      for (std::size_t x = 0; x < dim; ++x) {
        if ((x & mask) == mask) amps_[x] = -amps_[x];
      }
      break;
    }
    case GateKind::CCZ: {
      const std::size_t mask =
          qubit_mask(g.qubits[0]) | qubit_mask(g.qubits[1]) | qubit_mask(g.qubits[2]);
      for (std::size_t x = 0; x < dim; ++x) {
        if ((x & mask) == mask) amps_[x] = -amps_[x];
      }
      break;
    }
  }
}

void StateVector::apply_circuit(const QuantumCircuit& c, bool inverse) {
  if (c.n > n_) throw validation_error("apply_circuit: circuit is wider than the state");
  if (!inverse) {
    for (const auto& layer : c.layers) {
      for (const auto& g : layer) apply_gate(g, false);
    }
  } else {
    for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) {
      for (auto git = it->rbegin(); git != it->rend(); ++git) apply_gate(*git, true);
    }
  }
}

void StateVector::apply_z_mask_prefix(const PauliZMask& s) {
  if (s.m > n_) throw validation_error("apply_z_mask_prefix: mask wider than the state");
  const int rest = n_ - s.m;
  for (std::uint64_t x = 0; x < amps_.size(); ++x) {
    if (dot_mod2(s.s, x >> rest)) amps_[x] = -amps_[x];
  }
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

StateVector run(const QuantumCircuit& c) {
  check_capacity(c.n, "run");
  StateVector state(c.n);
  state.apply_circuit(c);
  return state;
}

OutputDistribution output_distribution(const QuantumCircuit& c) {
  const StateVector state = run(c);
  const int rest = c.n - c.m;
  OutputDistribution dist;
  dist.m = c.m;
  dist.probs.assign(std::size_t{1} << c.m, 0.0);
  for (std::uint64_t x = 0; x < state.dim(); ++x) {
    dist.probs[x >> rest] += std::norm(state.amp(x));
  }
  return dist;
}

double pauli_expectation_exact(const QuantumCircuit& c, const PauliZMask& s) {
  if (s.m != c.m) throw validation_error("pauli_expectation_exact: mask width != measured prefix");
  if (s.s >> s.m) throw validation_error("pauli_expectation_exact: mask has bits beyond m");
  if (s.s == 0) return 1.0;  // Z(0^m) is the identity
  const StateVector state = run(c);
  const int rest = c.n - c.m;
  double acc = 0.0;
  for (std::uint64_t x = 0; x < state.dim(); ++x) {
    acc += parity_sign(s.s, x >> rest) * std::norm(state.amp(x));
  }
  return acc;
}

double acceptance_probability_exact(const QuantumCircuit& c, const BooleanFunction& f) {
  if (f.m() != c.m) {
    throw validation_error("acceptance_probability_exact: f.m = " + std::to_string(f.m()) +
                           " but the circuit measures m = " + std::to_string(c.m));
  }
  const auto dist = output_distribution(c);
  double acc = 0.0;
  for (std::uint64_t x = 0; x < dist.probs.size(); ++x) {
    if (f(x)) acc += dist.probs[x];
  }
  return acc;
}

}  // namespace scpsim
