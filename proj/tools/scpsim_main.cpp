#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "scpsim/boolfn.hpp"
#include "scpsim/circuit.hpp"
#include "scpsim/commuting.hpp"
#include "scpsim/errors.hpp"
#include "scpsim/oracle.hpp"
#include "scpsim/sim.hpp"
#include "scpsim/verify.hpp"

namespace {

using nlohmann::json;
using namespace scpsim;

constexpr std::uint64_t kDefaultSeed = 12345;

struct RunConfig {
  std::string circuit_path;
  std::string fn_path;
  std::string backend = "exact";
  std::string s_bits;
  int p_target = 10;
  int q_l = 0;
  double delta = 0.01;
  double epsilon = 0.05;
  double theta = 4.0;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t max_samples = kDefaultMaxSamples;
  std::string out_path;
  bool audit = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

QuantumCircuit load_circuit(const RunConfig& config) {
  if (config.circuit_path.empty()) throw validation_error("--circuit <path> is required");
  return parse_circuit(read_file(config.circuit_path));
}

BooleanFunction load_function(const RunConfig& config) {
  if (config.fn_path.empty()) throw validation_error("--fn <path> is required");
  return BooleanFunction::parse(read_file(config.fn_path));
}

// One JSON record per line, to the file given by --out or to stdout.
void emit(const RunConfig& config, const json& record) {
  if (config.out_path.empty()) {
    std::cout << record.dump() << "\n";
    return;
  }
  std::ofstream out(config.out_path, std::ios::app);
  if (!out) throw validation_error("cannot open output file: " + config.out_path);
  out << record.dump() << "\n";
}

json result_to_json(const SimulationResult& result, int m) {
  json per_s = json::array();
  for (const auto& rec : result.per_s) {
    per_s.push_back({{"s", to_bit_string(rec.s, m)},
                     {"a", rec.a},
                     {"b", rec.b},
                     {"backend", rec.backend},
                     {"samples", rec.samples}});
  }
  json l_tilde = json::array();
  for (std::uint64_t s : result.l_tilde) l_tilde.push_back(to_bit_string(s, m));
  return {{"record", "simulation"},
          {"estimate", result.estimate},
          {"p_prime_estimate", result.p_prime_estimate},
          {"clamped", result.clamped},
          {"l_tilde", l_tilde},
          {"per_s", per_s},
          {"theta", result.theta},
          {"q", result.q},
          {"r", result.r},
          {"q_l", result.q_l},
          {"seed", result.seed},
          {"wall_time_s", result.wall_time_s}};
}

AccuracyBudget budget_from(const RunConfig& config) {
  AccuracyBudget budget;
  budget.p_target = config.p_target;
  budget.q_l = config.q_l;
  budget.delta = config.delta;
  budget.max_samples = config.max_samples;
  return budget;
}

int cmd_sim(const RunConfig& config) {
  const auto circuit = load_circuit(config);
  const auto fn = load_function(config);
  const auto backend = parse_backend_tag(config.backend);
  const auto budget = budget_from(config);
  const auto result = simulate(circuit, fn, backend, budget, config.seed);
  emit(config, result_to_json(result, fn.m()));
  if (config.audit) {
    const auto audit = error_budget_audit(circuit, fn, backend, budget, config.seed);
    emit(config, {{"record", "audit"},
                  {"tail_term", audit.tail_term},
                  {"backend_term", audit.backend_term},
                  {"coefficient_term", audit.coefficient_term},
                  {"bound", audit.bound},
                  {"pass", audit.pass},
                  {"estimate", audit.estimate},
                  {"exact_probability", audit.exact_probability}});
  }
  return 0;
}

int cmd_expect(const RunConfig& config) {
  const auto circuit = load_circuit(config);
  if (config.s_bits.empty()) throw validation_error("--s <bit-string> is required");
  if (static_cast<int>(config.s_bits.size()) != circuit.m) {
    throw validation_error("--s must have exactly m = " + std::to_string(circuit.m) + " bits");
  }
  const PauliZMask mask{circuit.m, parse_bit_string(config.s_bits)};
  const auto backend = parse_backend_tag(config.backend);
  const auto est = backend_pauli_expectation(circuit, mask, backend, config.epsilon, config.delta,
                                             config.seed);
  emit(config, {{"record", "expectation"},
                {"s", config.s_bits},
                {"value", est.value},
                {"backend", config.backend},
                {"method", est.method},
                {"samples", est.samples}});
  return 0;
}

int cmd_km(const RunConfig& config) {
  const auto fn = load_function(config);
  const auto g = lift_to_signed(fn);
  KMParams params;
  params.theta = config.theta;
  params.delta = config.delta;
  params.sample_budget = config.max_samples;
  const auto l_tilde = km_significant_set(g, params, config.seed);
  json members = json::array();
  for (std::uint64_t s : l_tilde) members.push_back(to_bit_string(s, fn.m()));
  emit(config, {{"record", "km"},
                {"theta", params.theta},
                {"delta", params.delta},
                {"l_tilde", members}});
  return 0;
}

int cmd_wht(const RunConfig& config) {
  const auto fn = load_function(config);
  const auto spectrum = wht_spectrum(fn);
  json coeffs = json::object();
  for (const auto& [s, c] : spectrum.coeffs()) coeffs[to_bit_string(s, fn.m())] = c;
  emit(config, {{"record", "spectrum"},
                {"m", fn.m()},
                {"support_size", spectrum.support_size()},
                {"degree", degree(spectrum)},
                {"coeffs", coeffs}});
  return 0;
}

int cmd_oracle(const RunConfig& config) {
  const auto circuit = load_circuit(config);
  json record{{"record", "oracle"}, {"n", circuit.n}, {"m", circuit.m},
              {"depth", depth(circuit)}, {"size", circuit.size()}};
  if (!config.s_bits.empty()) {
    const PauliZMask mask{circuit.m, parse_bit_string(config.s_bits)};
    record["s"] = config.s_bits;
    record["expectation"] = pauli_expectation_exact(circuit, mask);
  }
  if (!config.fn_path.empty()) {
    const auto fn = load_function(config);
    record["acceptance_probability"] = acceptance_probability_exact(circuit, fn);
  }
  if (config.s_bits.empty() && config.fn_path.empty()) {
    if (circuit.m > 16) throw capacity_error("oracle: distribution listing capped at m <= 16");
    const auto dist = output_distribution(circuit);
    json probs = json::object();
    for (std::uint64_t x = 0; x < dist.probs.size(); ++x) {
      if (dist.probs[x] > 1e-15) probs[to_bit_string(x, circuit.m)] = dist.probs[x];
    }
    record["distribution"] = probs;
  }
  emit(config, record);
  return 0;
}

int cmd_build(const RunConfig& config, const std::string& family, int n, int m, int d) {
  if (n < 1) throw validation_error("build: --n must be positive");
  QuantumCircuit circuit;
  RandomStream rng = RandomStream::root(config.seed).derive("build");
  if (family == "random") {
    circuit = build_random_constant_depth(n, m > 0 ? m : n, d, config.seed);
  } else if (family == "iqp") {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
    std::vector<Layer> d_layers;
    for (int l = 0; l < std::max(1, d); ++l) {
      Layer layer;
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      for (int q = 0; q + 1 < n; q += 2) {
        if (rng.next_bernoulli(0.5)) {
          layer.push_back({GateKind::CZ, {q, q + 1}});
          used[static_cast<std::size_t>(q)] = used[static_cast<std::size_t>(q + 1)] = 1;
        }
      }
      const GateKind singles[] = {GateKind::T, GateKind::S, GateKind::Z};
      for (int q = 0; q < n; ++q) {
        if (!used[static_cast<std::size_t>(q)] && rng.next_bernoulli(0.5)) {
          layer.push_back({singles[rng.next_below(3)], {q}});
        }
      }
      if (!layer.empty()) d_layers.push_back(std::move(layer));
    }
    circuit = build_simon_type(n, m > 0 ? m : n, all, all, d_layers);
  } else if (family == "simon_type") {
    const int half = std::max(1, n / 2);
    std::vector<int> first_half(static_cast<std::size_t>(half));
    for (int q = 0; q < half; ++q) first_half[static_cast<std::size_t>(q)] = q;
    std::vector<Layer> d_layers;
    Layer layer;
    for (int q = 0; q + 1 < n; q += 2) layer.push_back({GateKind::CZ, {q, q + 1}});
    if (!layer.empty()) d_layers.push_back(std::move(layer));
    circuit = build_simon_type(n, m > 0 ? m : half, first_half, first_half, d_layers);
  } else if (family == "clifford_magic") {
    std::vector<Gate> e_gates;
    for (int i = 0; i < 3 * n; ++i) {
      const int kind = n >= 2 ? static_cast<int>(rng.next_below(3)) : static_cast<int>(rng.next_below(2));
      if (kind == 0) {
        e_gates.push_back({GateKind::H, {static_cast<int>(rng.next_below(n))}});
      } else if (kind == 1) {
        e_gates.push_back({GateKind::S, {static_cast<int>(rng.next_below(n))}});
      } else {
        const int a = static_cast<int>(rng.next_below(n));
        int b = static_cast<int>(rng.next_below(n - 1));
        if (b >= a) ++b;
        e_gates.push_back({GateKind::CZ, {a, b}});
      }
    }
    circuit = build_clifford_magic(n, m > 0 ? m : n, e_gates);
  } else {
    throw validation_error("build: unknown family '" + family +
                           "' (expected random | iqp | simon_type | clifford_magic)");
  }
  const std::string text = render_circuit(circuit);
  if (config.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(config.out_path);
    if (!out) throw validation_error("cannot open output file: " + config.out_path);
    out << text;
  }
  return 0;
}

int cmd_commuting(const RunConfig& config) {
  const auto circuit = load_circuit(config);
  const auto fn = load_function(config);
  if (fn.m() != circuit.m) throw validation_error("commuting: f.m != circuit m");
  const auto spectrum = wht_spectrum(lift_to_signed(fn));
  bool any = false;
  for (const auto& [s, coeff] : spectrum.coeffs()) {
    if (s == 0) continue;
    any = true;
    const auto h = build_hadamard_test(circuit, PauliZMask{fn.m(), s});
    const auto cc = regroup_commuting(h);
    const auto report = resource_report(cc, fn);
    emit(config, {{"record", "commuting"},
                  {"s", to_bit_string(report.s, report.m)},
                  {"gate_count", report.gate_count},
                  {"degree", report.degree},
                  {"locality", report.locality},
                  {"lightcone_bound", report.lightcone_bound},
                  {"two_local_bound", report.two_local_bound},
                  {"pass", report.pass}});
  }
  if (!any) {
    emit(config, {{"record", "commuting"},
                  {"degenerate", true},
                  {"detail", "support of g^ is {0^m}; no commuting circuits are needed"}});
  }
  return 0;
}

int cmd_verify(const RunConfig& config, double scale) {
  const auto results = scpsim::verify::run_all(scale, config.seed);
  bool all_pass = true;
  for (const auto& r : results) {
    emit(config, {{"record", "verify"},
                  {"id", r.id},
                  {"name", r.name},
                  {"pass", r.pass},
                  {"detail", r.detail},
                  {"seconds", r.seconds}});
    std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ": " << r.name << " -- " << r.detail
              << "\n";
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scpsim: acceptance-probability estimation for quantum circuits followed by "
               "sparse classical post-processing"};
  app.require_subcommand(1);

  RunConfig config;
  std::string build_family = "random";
  int build_n = 4, build_m = 0, build_d = 2;
  double verify_scale = 1.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "master seed (default 12345)");
    cmd->add_option("--out", config.out_path, "append JSON-lines output to this file");
    cmd->add_option("--delta", config.delta, "failure probability");
    cmd->add_option("--max-samples", config.max_samples,
                    "cap on samples per estimate (0 = uncapped schedule)");
  };

  auto* sim = app.add_subcommand("sim", "run the Fourier-domain simulation pipeline");
  sim->add_option("--circuit", config.circuit_path)->required();
  sim->add_option("--fn", config.fn_path)->required();
  sim->add_option("--backend", config.backend, "exact | ct-ecs | clifford | commuting");
  sim->add_option("--p-target", config.p_target, "accuracy polynomial value p(n)");
  sim->add_option("--q-l", config.q_l,
                  "sparsity bound q_L (default: from the function's declared bound)");
  sim->add_flag("--audit", config.audit, "append an oracle-checked error-budget record");
  add_common(sim);

  auto* expect = app.add_subcommand("expect", "single Pauli expectation via a chosen backend");
  expect->add_option("--circuit", config.circuit_path)->required();
  expect->add_option("--s", config.s_bits, "m-bit Z mask")->required();
  expect->add_option("--backend", config.backend);
  expect->add_option("--epsilon", config.epsilon, "target accuracy");
  add_common(expect);

  auto* km = app.add_subcommand("km", "significant Fourier coefficients of the lifted function");
  km->add_option("--fn", config.fn_path)->required();
  km->add_option("--theta", config.theta, "threshold polynomial value");
  add_common(km);

  auto* wht = app.add_subcommand("wht", "exact spectrum of a function file (m <= 20)");
  wht->add_option("--fn", config.fn_path)->required();
  add_common(wht);

  auto* oracle = app.add_subcommand("oracle", "exact dense-statevector quantities");
  oracle->add_option("--circuit", config.circuit_path)->required();
  oracle->add_option("--fn", config.fn_path);
  oracle->add_option("--s", config.s_bits);
  add_common(oracle);

  auto* build = app.add_subcommand("build", "generate a circuit file");
  build->add_option("--family", build_family, "random | iqp | simon_type | clifford_magic");
  build->add_option("--n", build_n)->required();
  build->add_option("--m", build_m, "measured prefix (default: family-specific)");
  build->add_option("--d", build_d, "depth / diagonal layer count");
  add_common(build);

  auto* commuting = app.add_subcommand("commuting", "resource reports for every significant s");
  commuting->add_option("--circuit", config.circuit_path)->required();
  commuting->add_option("--fn", config.fn_path)->required();
  add_common(commuting);

  auto* verify = app.add_subcommand("verify", "run the full property suite");
  verify->add_option("--scale", verify_scale, "trial-count multiplier (default 1.0)");
  add_common(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_sim(config);
    if (expect->parsed()) return cmd_expect(config);
    if (km->parsed()) return cmd_km(config);
    if (wht->parsed()) return cmd_wht(config);
    if (oracle->parsed()) return cmd_oracle(config);
    if (build->parsed()) return cmd_build(config, build_family, build_n, build_m, build_d);
    if (commuting->parsed()) return cmd_commuting(config);
    if (verify->parsed()) return cmd_verify(config, verify_scale);
  } catch (const scpsim::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const scpsim::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
