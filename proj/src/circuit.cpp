#include "scpsim/circuit.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "scpsim/rng.hpp"

namespace scpsim {

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::T:
    case GateKind::S:
    case GateKind::Z:
    case GateKind::X:
      return 1;
    case GateKind::CZ:
      return 2;
    case GateKind::CCZ:
      return 3;
  }
  return 0;
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::T: return "T";
    case GateKind::S: return "S";
    case GateKind::Z: return "Z";
    case GateKind::X: return "X";
    case GateKind::CZ: return "CZ";
    case GateKind::CCZ: return "CCZ";
  }
  return "?";
}

std::string family_name(CircuitFamily family) {
  switch (family) {
    case CircuitFamily::Generic: return "generic";
    case CircuitFamily::SimonType: return "simon_type";
    case CircuitFamily::Iqp: return "iqp";
    case CircuitFamily::CliffordMagic: return "clifford_magic";
  }
  return "?";
}

std::size_t QuantumCircuit::size() const {
  std::size_t count = 0;
  for (const auto& layer : layers) count += layer.size();
  return count;
}

namespace {

bool is_diagonal(GateKind kind) {
  return kind == GateKind::T || kind == GateKind::S || kind == GateKind::Z ||
         kind == GateKind::CZ || kind == GateKind::CCZ;
}

std::optional<GateKind> gate_kind_from_name(const std::string& name) {
  if (name == "H") return GateKind::H;
  if (name == "T") return GateKind::T;
  if (name == "S") return GateKind::S;
  if (name == "Z") return GateKind::Z;
  if (name == "X") return GateKind::X;
  if (name == "CZ") return GateKind::CZ;
  if (name == "CCZ") return GateKind::CCZ;
  return std::nullopt;
}

void validate_gate(const Gate& g, int n, int line_no) {
  const std::string where = line_no > 0 ? " (line " + std::to_string(line_no) + ")" : "";
  if (static_cast<int>(g.qubits.size()) != gate_arity(g.kind)) {
    throw validation_error(gate_name(g.kind) + " takes " + std::to_string(gate_arity(g.kind)) +
                           " qubit(s), got " + std::to_string(g.qubits.size()) + where);
  }
  for (int q : g.qubits) {
    if (q < 0 || q >= n) {
      throw validation_error("qubit index " + std::to_string(q) + " out of range [0, " +
                             std::to_string(n) + ")" + where);
    }
  }
  auto sorted = g.qubits;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw validation_error("repeated qubit index in " + gate_name(g.kind) + where);
  }
}

void validate_layer_disjoint(const Layer& layer, int line_no) {
  std::vector<int> used;
  for (const auto& g : layer) used.insert(used.end(), g.qubits.begin(), g.qubits.end());
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end()) {
    const std::string where = line_no > 0 ? " (line " + std::to_string(line_no) + ")" : "";
    throw validation_error("gates within one layer must act on disjoint qubits" + where);
  }
}

Gate parse_gate(const std::string& text, int n, int line_no) {
  std::istringstream in(text);
  std::string name;
  in >> name;
  const auto kind = gate_kind_from_name(name);
  if (!kind) {
    throw validation_error("unknown gate '" + name + "' (line " + std::to_string(line_no) + ")");
  }
  Gate g{*kind, {}};
  int q = 0;
  while (in >> q) g.qubits.push_back(q);
  if (!in.eof()) {
    throw validation_error("malformed gate operands in '" + text + "' (line " +
                           std::to_string(line_no) + ")");
  }
  validate_gate(g, n, line_no);
  return g;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

QuantumCircuit parse_circuit(const std::string& text) {
  QuantumCircuit c;
  bool header_seen = false;
  std::optional<std::string> pending_section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream cs(line.substr(1));
      std::string word;
      cs >> word;
      if (word == "section") {
        std::string tag;
        cs >> tag;
        if (tag.empty()) {
          throw validation_error("#section needs a tag (line " + std::to_string(line_no) + ")");
        }
        if (pending_section) {
          // A section with no layers still counts (empty D, for instance).
          c.sections.push_back({*pending_section, c.layers.size(), 0});
        }
        pending_section = tag;
      }
      continue;
    }
    for (const std::string& segment_raw : split(line, '/')) {
      const std::string segment = trim(segment_raw);
      if (segment.empty()) continue;
      if (!header_seen) {
        std::istringstream hs(segment);
        std::string word, mtok, ntok;
        hs >> word >> ntok >> mtok;
        if (word != "qc" || ntok.rfind("n=", 0) != 0 || mtok.rfind("m=", 0) != 0) {
          throw validation_error("circuit file: header must be 'qc n=<int> m=<int>' (line " +
                                 std::to_string(line_no) + ")");
        }
        try {
          c.n = std::stoi(ntok.substr(2));
          c.m = std::stoi(mtok.substr(2));
        } catch (const std::exception&) {
          throw validation_error("circuit file: bad header integers (line " +
                                 std::to_string(line_no) + ")");
        }
        if (c.n < 1) throw validation_error("circuit file: n must be positive");
        if (c.m < 1 || c.m > c.n) {
          throw validation_error("circuit file: need 1 <= m <= n");
        }
        header_seen = true;
        continue;
      }
      Layer layer;
      for (const std::string& gate_text_raw : split(segment, ';')) {
        const std::string gate_text = trim(gate_text_raw);
        if (gate_text.empty()) continue;
        layer.push_back(parse_gate(gate_text, c.n, line_no));
      }
      if (layer.empty()) continue;
      validate_layer_disjoint(layer, line_no);
      if (pending_section) {
        c.sections.push_back({*pending_section, c.layers.size(), 0});
        pending_section.reset();
      }
      if (!c.sections.empty()) {
        auto& last = c.sections.back();
        if (last.first_layer + last.layer_count == c.layers.size()) ++last.layer_count;
      }
      c.layers.push_back(std::move(layer));
    }
  }
  if (!header_seen) throw validation_error("circuit file: missing 'qc n=<int> m=<int>' header");
  if (pending_section) c.sections.push_back({*pending_section, c.layers.size(), 0});
  return c;
}

std::string render_circuit(const QuantumCircuit& c) {
  std::ostringstream out;
  out << "qc n=" << c.n << " m=" << c.m << "\n";
  for (std::size_t i = 0; i <= c.layers.size(); ++i) {
    // Zero-layer sections anchor at a layer index too, so several markers can
    // share one position; emit them in declaration order.
    for (const auto& sec : c.sections) {
      if (sec.first_layer == i) out << "#section " << sec.tag << "\n";
    }
    if (i == c.layers.size()) break;
    const auto& layer = c.layers[i];
    for (std::size_t k = 0; k < layer.size(); ++k) {
      if (k) out << "; ";
      out << gate_name(layer[k].kind);
      for (int q : layer[k].qubits) out << " " << q;
    }
    out << "\n";
  }
  return out.str();
}

int depth(const QuantumCircuit& c) {
  std::vector<int> last_layer(static_cast<std::size_t>(c.n), 0);
  int depth_val = 0;
  for (const auto& layer : c.layers) {
    for (const auto& g : layer) {
      int at = 0;
      for (int q : g.qubits) at = std::max(at, last_layer[static_cast<std::size_t>(q)]);
      ++at;
      for (int q : g.qubits) last_layer[static_cast<std::size_t>(q)] = at;
      depth_val = std::max(depth_val, at);
    }
  }
  return depth_val;
}

std::set<int> lightcone(const QuantumCircuit& c, int j) {
  if (j < 0 || j >= c.n) throw validation_error("lightcone: qubit index out of range");
  std::set<int> cone{j};
  for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) {
    std::vector<int> grown;
    for (const auto& g : *it) {
      const bool touches = std::any_of(g.qubits.begin(), g.qubits.end(),
                                       [&](int q) { return cone.count(q) > 0; });
      if (touches) grown.insert(grown.end(), g.qubits.begin(), g.qubits.end());
    }
    cone.insert(grown.begin(), grown.end());
  }
  return cone;
}

bool has_section(const QuantumCircuit& c, const std::string& tag) {
  return std::any_of(c.sections.begin(), c.sections.end(),
                     [&](const Section& s) { return s.tag == tag; });
}

std::vector<Gate> section_gates(const QuantumCircuit& c, const std::string& tag) {
  std::vector<Gate> out;
  for (const auto& sec : c.sections) {
    if (sec.tag != tag) continue;
    for (std::size_t i = sec.first_layer; i < sec.first_layer + sec.layer_count; ++i) {
      out.insert(out.end(), c.layers[i].begin(), c.layers[i].end());
    }
  }
  return out;
}

std::vector<int> section_hadamard_qubits(const QuantumCircuit& c, const std::string& tag) {
  std::vector<int> out;
  for (const auto& g : section_gates(c, tag)) {
    if (g.kind != GateKind::H) {
      throw validation_error("section " + tag + " must contain only H gates");
    }
    out.push_back(g.qubits[0]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CircuitFamily circuit_family(const QuantumCircuit& c) {
  const bool simon = has_section(c, "Q") && has_section(c, "D") && has_section(c, "R");
  if (simon) {
    const auto q = section_hadamard_qubits(c, "Q");
    const auto r = section_hadamard_qubits(c, "R");
    bool all_qubits = static_cast<int>(q.size()) == c.n && q == r;
    bool diagonal = true;
    for (const auto& g : section_gates(c, "D")) {
      if (!is_diagonal(g.kind)) diagonal = false;
    }
    return (all_qubits && diagonal) ? CircuitFamily::Iqp : CircuitFamily::SimonType;
  }
  if (has_section(c, "H") && has_section(c, "T") && has_section(c, "E")) {
    return CircuitFamily::CliffordMagic;
  }
  return CircuitFamily::Generic;
}

namespace {

std::vector<Layer> greedy_pack(const std::vector<Gate>& gates, int n) {
  std::vector<Layer> layers;
  std::vector<int> last_layer(static_cast<std::size_t>(n), -1);
  for (const auto& g : gates) {
    int at = -1;
    for (int q : g.qubits) at = std::max(at, last_layer[static_cast<std::size_t>(q)]);
    ++at;
    if (at == static_cast<int>(layers.size())) layers.emplace_back();
    layers[static_cast<std::size_t>(at)].push_back(g);
    for (int q : g.qubits) last_layer[static_cast<std::size_t>(q)] = at;
  }
  return layers;
}

Layer hadamard_layer(const std::vector<int>& qubits) {
  Layer layer;
  for (int q : qubits) layer.push_back({GateKind::H, {q}});
  return layer;
}

void validate_qubit_set(const std::vector<int>& qubits, int n, const char* what) {
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw validation_error(std::string(what) + ": duplicate qubit");
  }
  for (int q : qubits) {
    if (q < 0 || q >= n) throw validation_error(std::string(what) + ": qubit out of range");
  }
}

}  // namespace

QuantumCircuit build_simon_type(int n, int m, const std::vector<int>& q_qubits,
                                const std::vector<int>& r_qubits,
                                const std::vector<Layer>& d_layers) {
  if (n < 1 || m < 1 || m > n) throw validation_error("build_simon_type: need 1 <= m <= n");
  validate_qubit_set(q_qubits, n, "build_simon_type Q");
  validate_qubit_set(r_qubits, n, "build_simon_type R");
  for (const auto& layer : d_layers) {
    for (const auto& g : layer) {
      if (g.kind == GateKind::H) {
        throw validation_error("build_simon_type: D must be basis-preserving (no H gates)");
      }
      validate_gate(g, n, 0);
    }
    validate_layer_disjoint(layer, 0);
  }
  QuantumCircuit c;
  c.n = n;
  c.m = m;
  auto q_sorted = q_qubits;
  auto r_sorted = r_qubits;
  std::sort(q_sorted.begin(), q_sorted.end());
  std::sort(r_sorted.begin(), r_sorted.end());
  c.sections.push_back({"Q", 0, q_sorted.empty() ? std::size_t{0} : std::size_t{1}});
  if (!q_sorted.empty()) c.layers.push_back(hadamard_layer(q_sorted));
  c.sections.push_back({"D", c.layers.size(), d_layers.size()});
  for (const auto& layer : d_layers) c.layers.push_back(layer);
  c.sections.push_back({"R", c.layers.size(), r_sorted.empty() ? std::size_t{0} : std::size_t{1}});
  if (!r_sorted.empty()) c.layers.push_back(hadamard_layer(r_sorted));
  return c;
}

QuantumCircuit build_clifford_magic(int n, int m, const std::vector<Gate>& e_gates) {
  if (n < 1 || m < 1 || m > n) throw validation_error("build_clifford_magic: need 1 <= m <= n");
  for (const auto& g : e_gates) {
    if (g.kind != GateKind::H && g.kind != GateKind::S && g.kind != GateKind::CZ) {
      throw validation_error("build_clifford_magic: E must use only H, S, CZ");
    }
    validate_gate(g, n, 0);
  }
  QuantumCircuit c;
  c.n = n;
  c.m = m;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
  c.sections.push_back({"H", 0, 1});
  c.layers.push_back(hadamard_layer(all));
  Layer t_layer;
  for (int q = 0; q < n; ++q) t_layer.push_back({GateKind::T, {q}});
  c.sections.push_back({"T", 1, 1});
  c.layers.push_back(std::move(t_layer));
  const auto packed = greedy_pack(e_gates, n);
  c.sections.push_back({"E", 2, packed.size()});
  for (const auto& layer : packed) c.layers.push_back(layer);
  return c;
}

QuantumCircuit build_random_constant_depth(int n, int m, int d, std::uint64_t seed) {
  if (n < 1 || m < 1 || m > n) throw validation_error("build_random_constant_depth: need 1 <= m <= n");
  if (d < 1 || d > 8) throw validation_error("build_random_constant_depth: need 1 <= d <= 8");
  RandomStream rng = RandomStream::root(seed).derive("random-constant-depth");
  QuantumCircuit c;
  c.n = n;
  c.m = m;
  const GateKind singles[] = {GateKind::H, GateKind::T, GateKind::S};
  for (int layer_idx = 0; layer_idx < d; ++layer_idx) {
    Layer layer;
    // Brickwork pairing with alternating offset; each pair becomes a CZ with
    // probability 1/2, the rest get single-qubit gates so every qubit is
    // covered (greedy re-layering then keeps exactly d layers).
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    const int offset = layer_idx % 2;
    for (int q = offset; q + 1 < n; q += 2) {
      if (rng.next_bernoulli(0.5)) {
        layer.push_back({GateKind::CZ, {q, q + 1}});
        used[static_cast<std::size_t>(q)] = used[static_cast<std::size_t>(q + 1)] = 1;
      }
    }
    for (int q = 0; q < n; ++q) {
      if (!used[static_cast<std::size_t>(q)]) {
        layer.push_back({singles[rng.next_below(3)], {q}});
      }
    }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

QuantumCircuit build_random_circuit(int n, int m, int gate_count, std::uint64_t seed) {
  if (n < 1 || m < 1 || m > n) throw validation_error("build_random_circuit: need 1 <= m <= n");
  RandomStream rng = RandomStream::root(seed).derive("random-circuit");
  const GateKind kinds[] = {GateKind::H,  GateKind::T,  GateKind::S, GateKind::Z,
                            GateKind::X,  GateKind::CZ, GateKind::CCZ};
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(gate_count));
  for (int i = 0; i < gate_count; ++i) {
    GateKind kind = kinds[rng.next_below(7)];
    const int arity = gate_arity(kind);
    if (arity > n) {
      kind = kinds[rng.next_below(5)];  // fall back to a single-qubit gate
    }
    Gate g{kind, {}};
    while (static_cast<int>(g.qubits.size()) < gate_arity(kind)) {
      const int q = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      if (std::find(g.qubits.begin(), g.qubits.end(), q) == g.qubits.end()) g.qubits.push_back(q);
    }
    gates.push_back(std::move(g));
  }
  QuantumCircuit c;
  c.n = n;
  c.m = m;
  c.layers = greedy_pack(gates, n);
  return c;
}

}  // namespace scpsim
