#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scpsim/backends.hpp"
#include "scpsim/boolfn.hpp"
#include "scpsim/circuit.hpp"

namespace scpsim {

enum class BackendTag { Exact, CtEcs, Clifford, Commuting };

BackendTag parse_backend_tag(const std::string& name);
std::string backend_name(BackendTag tag);

constexpr std::uint64_t kDefaultMaxSamples = 1u << 16;

// Parameter schedule: theta = 3 p q_L, q = 24 p theta^2, r = 12 p theta^2.
// Estimator sample counts derived from 1/q and 1/r grow like theta^4 and are
// far beyond what any desk-scale run needs for its tolerance, so every
// sampling estimate is additionally capped at max_samples draws (0 removes
// the cap); the effective accuracy is recorded in the result.
struct AccuracyBudget {
  int p_target = 10;
  int q_l = 0;  // 0 = derive from f.sparsity_bound + 1
  double delta = 0.01;
  std::uint64_t max_samples = kDefaultMaxSamples;
  bool allow_exact_shortcut = true;

  std::int64_t theta(std::uint64_t q_l_effective) const {
    return 3ll * p_target * static_cast<std::int64_t>(q_l_effective);
  }
  std::int64_t q_poly(std::uint64_t q_l_effective) const {
    const std::int64_t t = theta(q_l_effective);
    return 24ll * p_target * t * t;
  }
  std::int64_t r_poly(std::uint64_t q_l_effective) const {
    const std::int64_t t = theta(q_l_effective);
    return 12ll * p_target * t * t;
  }
};

struct PerIndexRecord {
  std::uint64_t s = 0;
  double a = 0.0;  // estimate of g^(s)
  double b = 0.0;  // estimate of <Z(s)>
  std::string backend;
  std::uint64_t samples = 0;
};

struct SimulationResult {
  double estimate = 0.0;          // of p(C, f), clamped to [0, 1]
  double p_prime_estimate = 0.0;  // sum_s A(s) B(s)
  bool clamped = false;
  std::vector<std::uint64_t> l_tilde;
  std::vector<PerIndexRecord> per_s;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::int64_t theta = 0;
  std::int64_t q = 0;
  std::int64_t r = 0;
  std::uint64_t q_l = 0;
};

// The four-step estimator: KM significant set at threshold theta and failure
// delta/3; A(s) at accuracy 1/q and failure delta/(3 |L~|); B(s) from the
// chosen backend at accuracy 1/r and failure delta/(3 |L~|) with B(0^m) = 1
// fixed; output 1/2 - sum A(s)B(s) / 2. With the uncapped schedule the result
// is within 1/(2 p_target) of p(C, f) with probability >= 1 - delta.
SimulationResult simulate(const QuantumCircuit& c, const BooleanFunction& f, BackendTag backend,
                          const AccuracyBudget& budget, std::uint64_t seed);

struct ErrorBudgetAudit {
  double tail_term = 0.0;         // sum over L \ L~ of g^(s) <Z(s)>
  double backend_term = 0.0;      // sum over L~ of g^(s) (<Z(s)> - B(s))
  double coefficient_term = 0.0;  // sum over L~ of (g^(s) - A(s)) B(s)
  double bound = 0.0;             // 1 / (3 p_target)
  bool tail_ok = false;
  bool backend_ok = false;
  bool coefficient_ok = false;
  bool pass = false;
  double estimate = 0.0;
  double exact_probability = 0.0;
};

// Replays simulate(...) under the same seed and measures the three error
// terms of the decomposition exactly against the oracle. Requires n <= 12 and
// m <= 10.
ErrorBudgetAudit error_budget_audit(const QuantumCircuit& c, const BooleanFunction& f,
                                    BackendTag backend, const AccuracyBudget& budget,
                                    std::uint64_t seed);

// Runs simulate on the inner-product post-processing h^s and returns
// 1 - 2 estimate, the implied Pauli expectation <Z(s)>; within 2/p_target of
// the oracle value under the simulate guarantee.
double pauli_expectation_via_simulation(const QuantumCircuit& c, const PauliZMask& s, BackendTag backend,
                               const AccuracyBudget& budget, std::uint64_t seed);

// Routes a single expectation query to the chosen backend (used by simulate
// step 3 and by the CLI `expect` command).
ExpectationEstimate backend_pauli_expectation(const QuantumCircuit& c, const PauliZMask& s,
                                              BackendTag backend, double epsilon, double delta,
                                              std::uint64_t seed);

}  // namespace scpsim
