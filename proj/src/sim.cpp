#include "scpsim/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "scpsim/commuting.hpp"
#include "scpsim/oracle.hpp"
#include "scpsim/parallel.hpp"

namespace scpsim {

BackendTag parse_backend_tag(const std::string& name) {
  if (name == "exact") return BackendTag::Exact;
  if (name == "ct-ecs") return BackendTag::CtEcs;
  if (name == "clifford") return BackendTag::Clifford;
  if (name == "commuting") return BackendTag::Commuting;
  throw validation_error("unknown backend '" + name +
                         "' (expected exact | ct-ecs | clifford | commuting)");
}

std::string backend_name(BackendTag tag) {
  switch (tag) {
    case BackendTag::Exact: return "exact";
    case BackendTag::CtEcs: return "ct-ecs";
    case BackendTag::Clifford: return "clifford";
    case BackendTag::Commuting: return "commuting";
  }
  return "?";
}

namespace {

// Relaxes a requested accuracy so that the tail-bound sample count
// K = ceil(factor * ln(2/delta) / eps^2) stays within the cap.
double capped_epsilon(double epsilon, double delta, double factor, std::uint64_t cap) {
  if (cap == 0) return epsilon;
  const double log_term = std::log(2.0 / delta);
  const double k = factor * log_term / (epsilon * epsilon);
  if (k <= static_cast<double>(cap)) return epsilon;
  // The tiny bump keeps the recomputed ceil(...) at or below the cap.
  return std::min(1.0, std::sqrt(factor * log_term / static_cast<double>(cap)) * (1.0 + 1e-12));
}

}  // namespace

ExpectationEstimate backend_pauli_expectation(const QuantumCircuit& c, const PauliZMask& s,
                                              BackendTag backend, double epsilon, double delta,
                                              std::uint64_t seed) {
  switch (backend) {
    case BackendTag::Exact:
      return {pauli_expectation_exact(c, s), 0, "exact"};
    case BackendTag::Clifford:
      return clifford_backend_expectation(c, s);
    case BackendTag::CtEcs:
      return backend_expectation(c, s, epsilon, delta, seed);
    case BackendTag::Commuting:
      return estimate_expectation_commuting(c, s, epsilon, delta, seed);
  }
  throw validation_error("backend_pauli_expectation: unreachable backend tag");
}

SimulationResult simulate(const QuantumCircuit& c, const BooleanFunction& f, BackendTag backend,
                          const AccuracyBudget& budget, std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  if (f.m() < 1 || f.m() > c.n) throw validation_error("simulate: need 1 <= f.m <= n");
  if (f.m() != c.m) {
    throw validation_error("simulate: f.m = " + std::to_string(f.m()) +
                           " but the circuit measures m = " + std::to_string(c.m));
  }
  if (budget.p_target < 1) throw validation_error("simulate: p_target must be >= 1");
  if (!(budget.delta > 0.0 && budget.delta < 1.0)) {
    throw validation_error("simulate: delta must lie in (0, 1)");
  }

  const SignedFunction g = lift_to_signed(f);
  const std::uint64_t q_l = budget.q_l > 0 ? static_cast<std::uint64_t>(budget.q_l)
                                           : f.sparsity_bound() + 1;

  SimulationResult result;
  result.seed = seed;
  result.q_l = q_l;
  result.theta = budget.theta(q_l);
  result.q = budget.q_poly(q_l);
  result.r = budget.r_poly(q_l);

  const RandomStream root = RandomStream::root(seed).derive("simulate");
  const bool exact_coefficients = budget.allow_exact_shortcut && g.has_truth_table();

  // Step 1: significant-set recovery at threshold theta, failure delta/3.
  KMParams km;
  km.theta = static_cast<double>(result.theta);
  km.delta = budget.delta / 3.0;
  km.allow_exact_shortcut = budget.allow_exact_shortcut;
  km.sample_budget = budget.max_samples;
  result.l_tilde = km_significant_set(g, km, root.derive("km").next_u64());

  const std::size_t count = result.l_tilde.size();
  result.per_s.assign(count, {});
  if (count > 0) {
    const double stage_delta = budget.delta / (3.0 * static_cast<double>(count));

    // Step 2: coefficient estimates at accuracy 1/q.
    std::optional<FourierSpectrum> exact_spectrum;
    if (exact_coefficients) exact_spectrum.emplace(wht_spectrum(g));
    const double eps_q = capped_epsilon(1.0 / static_cast<double>(result.q), stage_delta, 4.0,
                                        budget.max_samples);

    // Step 3: backend expectations at accuracy 1/r; B(0^m) = 1 exactly.
    const double backend_factor = backend == BackendTag::Commuting ? 8.0 : 2.0;
    const double eps_r = capped_epsilon(1.0 / static_cast<double>(result.r), stage_delta,
                                        backend_factor, budget.max_samples);

    parallel_for(count, [&](std::size_t i) {
      const std::uint64_t s = result.l_tilde[i];
      PerIndexRecord record;
      record.s = s;
      if (exact_spectrum) {
        record.a = exact_spectrum->at(s);
      } else {
        const auto est = estimate_fourier_coefficient_detail(
            g, s, eps_q, stage_delta, root.derive("coefficient").derive(s).next_u64());
        record.a = est.value;
        record.samples += est.samples;
      }
      if (s == 0) {
        record.b = 1.0;
        record.backend = "identity";
      } else {
        const auto est = backend_pauli_expectation(c, PauliZMask{f.m(), s}, backend, eps_r,
                                                   stage_delta,
                                                   root.derive("backend").derive(s).next_u64());
        record.b = est.value;
        record.backend = est.method;
        record.samples += est.samples;
      }
      result.per_s[i] = std::move(record);
    });
  }

  // Step 4: assemble, halve, clamp.
  double p_prime = 0.0;
  for (const auto& record : result.per_s) p_prime += record.a * record.b;
  result.p_prime_estimate = p_prime;
  const double raw = 0.5 - 0.5 * p_prime;
  result.estimate = std::clamp(raw, 0.0, 1.0);
  result.clamped = raw != result.estimate;

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

ErrorBudgetAudit error_budget_audit(const QuantumCircuit& c, const BooleanFunction& f,
                                    BackendTag backend, const AccuracyBudget& budget,
                                    std::uint64_t seed) {
  if (c.n > 12) throw capacity_error("error_budget_audit: requires n <= 12");
  if (f.m() > 10) throw capacity_error("error_budget_audit: requires m <= 10");

  const SimulationResult result = simulate(c, f, backend, budget, seed);
  const FourierSpectrum exact = wht_spectrum(lift_to_signed(f));

  ErrorBudgetAudit audit;
  audit.bound = 1.0 / (3.0 * budget.p_target);
  audit.estimate = result.estimate;
  audit.exact_probability = acceptance_probability_exact(c, f);

  std::map<std::uint64_t, const PerIndexRecord*> by_index;
  for (const auto& record : result.per_s) by_index.emplace(record.s, &record);

  double tail = 0.0;
  for (const auto& [s, coeff] : exact.coeffs()) {
    if (by_index.count(s)) continue;
    tail += coeff * pauli_expectation_exact(c, PauliZMask{f.m(), s});
  }
  double backend_term = 0.0;
  double coefficient_term = 0.0;
  for (const auto& record : result.per_s) {
    const double exact_coeff = exact.at(record.s);
    const double exact_expectation = pauli_expectation_exact(c, PauliZMask{f.m(), record.s});
    backend_term += exact_coeff * (exact_expectation - record.b);
    coefficient_term += (exact_coeff - record.a) * record.b;
  }

  audit.tail_term = std::abs(tail);
  audit.backend_term = std::abs(backend_term);
  audit.coefficient_term = std::abs(coefficient_term);
  audit.tail_ok = audit.tail_term < audit.bound;
  audit.backend_ok = audit.backend_term < audit.bound;
  audit.coefficient_ok = audit.coefficient_term < audit.bound;
  audit.pass = audit.tail_ok && audit.backend_ok && audit.coefficient_ok;
  return audit;
}

double pauli_expectation_via_simulation(const QuantumCircuit& c, const PauliZMask& s, BackendTag backend,
                               const AccuracyBudget& budget, std::uint64_t seed) {
  if (s.s == 0) throw validation_error("pauli_expectation_via_simulation: s must be non-zero");
  const BooleanFunction h = make_inner_product_function(s.m, s.s);
  const SimulationResult result = simulate(c, h, backend, budget, seed);
  return 1.0 - 2.0 * result.estimate;
}

}  // namespace scpsim
