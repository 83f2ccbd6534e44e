#include "scpsim/backends.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scpsim {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

int normalized_phase(int exponent) { return ((exponent % 4) + 4) % 4; }

}  // namespace

std::complex<double> PauliOperator::phase() const {
  switch (normalized_phase(phase_exponent)) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::string PauliOperator::to_string() const {
  static const char* kPhaseNames[] = {"+", "+i", "-", "-i"};
  std::string out = kPhaseNames[normalized_phase(phase_exponent)];
  static const char kLetters[] = {'I', 'X', 'Y', 'Z'};
  for (PauliLetter l : letters) out += kLetters[static_cast<int>(l)];
  return out;
}

PauliOperator identity_pauli(int n) {
  return {0, std::vector<PauliLetter>(static_cast<std::size_t>(n), PauliLetter::I)};
}

PauliOperator pauli_from_zmask(int n, const PauliZMask& s) {
  if (s.m > n) throw validation_error("pauli_from_zmask: mask wider than the register");
  if (s.s >> s.m) throw validation_error("pauli_from_zmask: mask has bits beyond m");
  PauliOperator p = identity_pauli(n);
  for (int j = 0; j < s.m; ++j) {
    if (bit_of(s.s, j, s.m)) p.letters[static_cast<std::size_t>(j)] = PauliLetter::Z;
  }
  return p;
}

namespace {

// (x, z) encoding: I=(0,0), X=(1,0), Y=(1,1), Z=(0,1).
void letter_bits(PauliLetter l, int& x, int& z) {
  x = 0;
  z = 0;
  switch (l) {
    case PauliLetter::I: x = 0; z = 0; break;
    case PauliLetter::X: x = 1; z = 0; break;
    case PauliLetter::Y: x = 1; z = 1; break;
    case PauliLetter::Z: x = 0; z = 1; break;
  }
}

PauliLetter letter_from_bits(int x, int z) {
  if (x && z) return PauliLetter::Y;
  if (x) return PauliLetter::X;
  if (z) return PauliLetter::Z;
  return PauliLetter::I;
}

// i-power picked up when multiplying single-qubit letters a*b.
int letter_product_phase(PauliLetter a, PauliLetter b) {
  if (a == PauliLetter::I || b == PauliLetter::I || a == b) return 0;
  // XY=iZ, YZ=iX, ZX=iY and the reversed orders pick up -i.
  const bool forward = (a == PauliLetter::X && b == PauliLetter::Y) ||
                       (a == PauliLetter::Y && b == PauliLetter::Z) ||
                       (a == PauliLetter::Z && b == PauliLetter::X);
  return forward ? 1 : 3;
}

}  // namespace

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
  if (a.n() != b.n()) throw validation_error("pauli multiply: width mismatch");
  PauliOperator out = identity_pauli(a.n());
  out.phase_exponent = a.phase_exponent + b.phase_exponent;
  for (int j = 0; j < a.n(); ++j) {
    const auto la = a.letters[static_cast<std::size_t>(j)];
    const auto lb = b.letters[static_cast<std::size_t>(j)];
    out.phase_exponent += letter_product_phase(la, lb);
    int xa, za, xb, zb;
    letter_bits(la, xa, za);
    letter_bits(lb, xb, zb);
    out.letters[static_cast<std::size_t>(j)] = letter_from_bits(xa ^ xb, za ^ zb);
  }
  out.phase_exponent = normalized_phase(out.phase_exponent);
  return out;
}

PauliOperator conjugate_pauli_through_clifford(const std::vector<Gate>& clifford_gates,
                                               const PauliOperator& p) {
  for (const auto& g : clifford_gates) {
    if (g.kind != GateKind::H && g.kind != GateKind::S && g.kind != GateKind::CZ) {
      throw validation_error("conjugate_pauli_through_clifford: gate " + gate_name(g.kind) +
                             " is outside {H, S, CZ}");
    }
  }
  PauliOperator out = p;
  // E = g_k ... g_1 (g_1 applied first), so E^dag p E folds in g_k first.
  for (auto it = clifford_gates.rbegin(); it != clifford_gates.rend(); ++it) {
    const Gate& g = *it;
    switch (g.kind) {
      case GateKind::H: {
        // H X H = Z, H Z H = X, H Y H = -Y.
        auto& l = out.letters[static_cast<std::size_t>(g.qubits[0])];
        int x, z;
        letter_bits(l, x, z);
        if (x && z) out.phase_exponent += 2;
        l = letter_from_bits(z, x);
        break;
      }
      case GateKind::S: {
        // S^dag X S = -Y, S^dag Y S = X, S^dag Z S = Z.
        auto& l = out.letters[static_cast<std::size_t>(g.qubits[0])];
        int x, z;
        letter_bits(l, x, z);
        if (x && !z) out.phase_exponent += 2;
        if (x) z ^= 1;
        l = letter_from_bits(x, z);
        break;
      }
      case GateKind::CZ: {
        auto& la = out.letters[static_cast<std::size_t>(g.qubits[0])];
        auto& lb = out.letters[static_cast<std::size_t>(g.qubits[1])];
        int xa, za, xb, zb;
        letter_bits(la, xa, za);
        letter_bits(lb, xb, zb);
        // X_a -> X_a Z_b and symmetrically; sign flips when both X parts are
        // set and the Z parts differ.
        if (xa && xb && (za ^ zb)) out.phase_exponent += 2;
        const int new_za = za ^ xb;
        const int new_zb = zb ^ xa;
        la = letter_from_bits(xa, new_za);
        lb = letter_from_bits(xb, new_zb);
        break;
      }
      default:
        break;
    }
  }
  out.phase_exponent = normalized_phase(out.phase_exponent);
  return out;
}

// ---------------------------------------------------------------------------
// CT states.

CTState product_ct_state(const std::vector<QubitPrep>& preps) {
  const int n = static_cast<int>(preps.size());
  if (n < 1 || n > 63) throw validation_error("product_ct_state: need between 1 and 63 qubits");

  std::uint64_t free_mask = 0;   // qubits in superposition (Plus or MagicT)
  std::uint64_t magic_mask = 0;  // qubits carrying the T phase
  for (int j = 0; j < n; ++j) {
    if (preps[static_cast<std::size_t>(j)] != QubitPrep::Zero) free_mask = set_bit(free_mask, j, n);
    if (preps[static_cast<std::size_t>(j)] == QubitPrep::MagicT) magic_mask = set_bit(magic_mask, j, n);
  }
  const int k = hamming_weight(free_mask);
  const double magnitude = std::pow(2.0, -0.5 * k);

  CTState state;
  state.n = n;
  state.flat_magnitude = magnitude;
  state.sample = [free_mask, n](RandomStream& rng) {
    return rng.next_bits(n) & free_mask;
  };
  state.amplitude = [free_mask, magic_mask, magnitude](std::uint64_t x) -> std::complex<double> {
    if (x & ~free_mask) return {0.0, 0.0};
    const int t_count = hamming_weight(x & magic_mask);
    return std::polar(magnitude, std::numbers::pi / 4 * t_count);
  };
  return state;
}

// ---------------------------------------------------------------------------
// ECS operations.

ECSOperation ecs_identity(int n) {
  ECSOperation u;
  u.n = n;
  u.sparsity = 1;
  u.beta = [](int, std::uint64_t) -> std::complex<double> { return {1.0, 0.0}; };
  u.gamma = [](int, std::uint64_t x) { return x; };
  u.basis_preserving = true;
  u.hermitian = true;
  return u;
}

ECSOperation ecs_from_pauli(const PauliOperator& p) {
  if (!p.is_hermitian()) {
    throw validation_error("ecs_from_pauli: phase must be +1 or -1 for an observable");
  }
  const int n = p.n();
  std::uint64_t x_mask = 0;
  std::uint64_t zy_mask = 0;
  int y_count = 0;
  for (int j = 0; j < n; ++j) {
    const auto l = p.letters[static_cast<std::size_t>(j)];
    if (l == PauliLetter::X || l == PauliLetter::Y) x_mask = set_bit(x_mask, j, n);
    if (l == PauliLetter::Z || l == PauliLetter::Y) zy_mask = set_bit(zy_mask, j, n);
    if (l == PauliLetter::Y) ++y_count;
  }
  // P|x> = phase * i^{#Y} * (-1)^{|x & (Z|Y)|} |x xor X-mask>.
  std::complex<double> base = p.phase();
  for (int i = 0; i < y_count; ++i) base *= kImag;

  ECSOperation u;
  u.n = n;
  u.sparsity = 1;
  u.basis_preserving = true;
  u.hermitian = true;
  u.gamma = [x_mask](int, std::uint64_t x) { return x ^ x_mask; };
  u.beta = [base, zy_mask](int, std::uint64_t x) -> std::complex<double> {
    return (std::popcount(x & zy_mask) & 1) ? -base : base;
  };
  return u;
}

ECSOperation ecs_for_simon_type(const std::vector<int>& r_qubits, const PauliZMask& s, int n) {
  if (s.m > n) throw validation_error("ecs_for_simon_type: mask wider than the register");
  PauliOperator p = identity_pauli(n);
  for (int j = 0; j < s.m; ++j) {
    if (!bit_of(s.s, j, s.m)) continue;
    const bool in_r = std::find(r_qubits.begin(), r_qubits.end(), j) != r_qubits.end();
    p.letters[static_cast<std::size_t>(j)] = in_r ? PauliLetter::X : PauliLetter::Z;
  }
  return ecs_from_pauli(p);
}

ECSOperation ecs_from_basis_preserving_circuit(const std::vector<Gate>& gates, int n) {
  std::uint64_t x_mask = 0;
  bool real_diagonal = true;
  for (const auto& g : gates) {
    switch (g.kind) {
      case GateKind::H:
        throw validation_error("basis-preserving section cannot contain H gates");
      case GateKind::X:
        x_mask ^= std::uint64_t{1} << (n - 1 - g.qubits[0]);
        real_diagonal = false;
        break;
      case GateKind::T:
      case GateKind::S:
        real_diagonal = false;
        break;
      default:
        break;
    }
  }
  const std::vector<Gate> gates_copy = gates;
  ECSOperation u;
  u.n = n;
  u.sparsity = 1;
  u.basis_preserving = true;
  u.hermitian = real_diagonal;
  u.gamma = [x_mask](int, std::uint64_t x) { return x ^ x_mask; };
  u.beta = [gates_copy, n](int, std::uint64_t x) -> std::complex<double> {
    std::uint64_t cur = x;
    std::complex<double> phase{1.0, 0.0};
    for (const auto& g : gates_copy) {
      switch (g.kind) {
        case GateKind::X:
          cur ^= std::uint64_t{1} << (n - 1 - g.qubits[0]);
          break;
        case GateKind::Z:
          if (bit_of(cur, g.qubits[0], n)) phase = -phase;
          break;
        case GateKind::S:
          if (bit_of(cur, g.qubits[0], n)) phase *= kImag;
          break;
        case GateKind::T:
          if (bit_of(cur, g.qubits[0], n)) phase *= std::polar(1.0, std::numbers::pi / 4);
          break;
        case GateKind::CZ:
          if (bit_of(cur, g.qubits[0], n) && bit_of(cur, g.qubits[1], n)) phase = -phase;
          break;
        case GateKind::CCZ:
          if (bit_of(cur, g.qubits[0], n) && bit_of(cur, g.qubits[1], n) &&
              bit_of(cur, g.qubits[2], n)) {
            phase = -phase;
          }
          break;
        case GateKind::H:
          break;
      }
    }
    return phase;
  };
  return u;
}

CTState apply_basis_preserving(const CTState& phi, const ECSOperation& u) {
  if (!u.basis_preserving || u.sparsity != 1) {
    throw validation_error("apply_basis_preserving: operation is not basis-preserving");
  }
  if (u.n != phi.n) throw validation_error("apply_basis_preserving: width mismatch");
  // The column map must be self-inverse so that amplitudes can be pulled back.
  for (std::uint64_t probe : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{5}}) {
    const std::uint64_t x = probe & ((phi.n >= 64) ? ~std::uint64_t{0}
                                                   : ((std::uint64_t{1} << phi.n) - 1));
    if (u.gamma(0, u.gamma(0, x)) != x) {
      throw validation_error("apply_basis_preserving: column map is not an involution");
    }
  }
  const auto base_sample = phi.sample;
  const auto base_amp = phi.amplitude;
  const auto gamma = u.gamma;
  const auto beta = u.beta;
  CTState out;
  out.n = phi.n;
  out.flat_magnitude = phi.flat_magnitude;
  out.sample = [base_sample, gamma](RandomStream& rng) { return gamma(0, base_sample(rng)); };
  out.amplitude = [base_amp, gamma, beta](std::uint64_t y) {
    const std::uint64_t x = gamma(0, y);
    return beta(0, x) * base_amp(x);
  };
  return out;
}

// ---------------------------------------------------------------------------
// Estimation.

namespace {

// Y(x) = <x|A|phi> / <x|phi> for x in the sampler support.
std::complex<double> importance_sample_value(const CTState& phi, const ECSOperation& a,
                                             std::uint64_t x) {
  const std::complex<double> denom = phi.amplitude(x);
  if (std::abs(denom) == 0.0) {
    throw validation_error("estimate_ct_ecs: sampler produced a zero-amplitude string");
  }
  std::complex<double> numer{0.0, 0.0};
  for (int j = 0; j < a.sparsity; ++j) {
    const std::complex<double> b = a.beta(j, x);
    if (b == std::complex<double>{0.0, 0.0}) continue;
    numer += std::conj(b) * phi.amplitude(a.gamma(j, x));
  }
  return numer / denom;
}

}  // namespace

ExpectationEstimate estimate_ct_ecs(const CTState& phi, const ECSOperation& a, double epsilon,
                                    double delta, std::uint64_t seed) {
  if (!a.hermitian) throw validation_error("estimate_ct_ecs: the observable must be Hermitian");
  if (a.n != phi.n) throw validation_error("estimate_ct_ecs: width mismatch");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw validation_error("estimate_ct_ecs: epsilon must lie in (0, 1]");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw validation_error("estimate_ct_ecs: delta must lie in (0, 1)");
  }
  RandomStream stream = RandomStream::root(seed).derive("ct-ecs");

  if (a.basis_preserving && phi.flat_magnitude.has_value()) {
    // |Y| <= 1 pointwise: plain Hoeffding.
    const auto k = static_cast<std::uint64_t>(
        std::ceil(2.0 * std::log(2.0 / delta) / (epsilon * epsilon)));
    double acc = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t x = phi.sample(stream);
      acc += importance_sample_value(phi, a, x).real();
    }
    return {acc / static_cast<double>(k), k, "hoeffding"};
  }

  // Second moment <= 1 only: median of group means.
  const auto groups = static_cast<std::uint64_t>(
      std::max(1.0, 18.0 * std::ceil(std::log(1.0 / delta))));
  const auto group_size =
      static_cast<std::uint64_t>(std::ceil(6.0 / (epsilon * epsilon)));
  std::vector<double> means;
  means.reserve(groups);
  for (std::uint64_t gidx = 0; gidx < groups; ++gidx) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < group_size; ++i) {
      const std::uint64_t x = phi.sample(stream);
      acc += importance_sample_value(phi, a, x).real();
    }
    means.push_back(acc / static_cast<double>(group_size));
  }
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  const double median = (means.size() % 2) ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
  return {median, groups * group_size, "median-of-means"};
}

double product_state_pauli_expectation(const std::vector<QubitPrep>& preps,
                                       const PauliOperator& p) {
  if (static_cast<int>(preps.size()) != p.n()) {
    throw validation_error("product_state_pauli_expectation: width mismatch");
  }
  if (!p.is_hermitian()) {
    throw validation_error("product_state_pauli_expectation: phase must be +1 or -1");
  }
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  double acc = p.phase().real();
  for (std::size_t j = 0; j < preps.size(); ++j) {
    double factor = 1.0;
    switch (p.letters[j]) {
      case PauliLetter::I: factor = 1.0; break;
      case PauliLetter::X:
        factor = preps[j] == QubitPrep::Zero ? 0.0
                 : preps[j] == QubitPrep::PlusState ? 1.0
                                                    : inv_sqrt2;
        break;
      case PauliLetter::Y:
        factor = preps[j] == QubitPrep::MagicT ? inv_sqrt2 : 0.0;
        break;
      case PauliLetter::Z:
        factor = preps[j] == QubitPrep::Zero ? 1.0 : 0.0;
        break;
    }
    acc *= factor;
    if (acc == 0.0) break;
  }
  return acc;
}

namespace {

struct SimonStructure {
  std::vector<int> q_qubits;
  std::vector<int> r_qubits;
  std::vector<Gate> d_gates;
};

SimonStructure simon_structure(const QuantumCircuit& c) {
  SimonStructure out;
  out.q_qubits = section_hadamard_qubits(c, "Q");
  out.r_qubits = section_hadamard_qubits(c, "R");
  out.d_gates = section_gates(c, "D");
  return out;
}

}  // namespace

ExpectationEstimate clifford_backend_expectation(const QuantumCircuit& c, const PauliZMask& s) {
  if (circuit_family(c) != CircuitFamily::CliffordMagic) {
    throw validation_error("clifford backend: circuit is not a Clifford Magic circuit");
  }
  if (s.s == 0) return {1.0, 0, "identity"};
  const auto e_gates = section_gates(c, "E");
  const PauliOperator conjugated =
      conjugate_pauli_through_clifford(e_gates, pauli_from_zmask(c.n, s));
  const std::vector<QubitPrep> preps(static_cast<std::size_t>(c.n), QubitPrep::MagicT);
  return {product_state_pauli_expectation(preps, conjugated), 0, "exact"};
}

ExpectationEstimate backend_expectation(const QuantumCircuit& c, const PauliZMask& s,
                                        double epsilon, double delta, std::uint64_t seed) {
  if (s.m != c.m) throw validation_error("backend_expectation: mask width != measured prefix");
  if (s.s >> s.m) throw validation_error("backend_expectation: mask has bits beyond m");
  if (s.s == 0) return {1.0, 0, "identity"};

  const CircuitFamily family = circuit_family(c);
  if (family == CircuitFamily::SimonType || family == CircuitFamily::Iqp) {
    const auto structure = simon_structure(c);
    std::vector<QubitPrep> preps(static_cast<std::size_t>(c.n), QubitPrep::Zero);
    for (int q : structure.q_qubits) preps[static_cast<std::size_t>(q)] = QubitPrep::PlusState;
    CTState phi = product_ct_state(preps);
    if (!structure.d_gates.empty()) {
      phi = apply_basis_preserving(phi, ecs_from_basis_preserving_circuit(structure.d_gates, c.n));
    }
    const ECSOperation observable = ecs_for_simon_type(structure.r_qubits, s, c.n);
    return estimate_ct_ecs(phi, observable, epsilon, delta, seed);
  }
  if (family == CircuitFamily::CliffordMagic) {
    const auto e_gates = section_gates(c, "E");
    const PauliOperator conjugated =
        conjugate_pauli_through_clifford(e_gates, pauli_from_zmask(c.n, s));
    const ECSOperation observable = ecs_from_pauli(conjugated);
    const std::vector<QubitPrep> preps(static_cast<std::size_t>(c.n), QubitPrep::MagicT);
    return estimate_ct_ecs(product_ct_state(preps), observable, epsilon, delta, seed);
  }
  throw validation_error(
      "backend_expectation: the ct-ecs backend supports Simon-type and Clifford Magic circuits "
      "only; use the exact or commuting backend for generic circuits");
}

}  // namespace scpsim
