#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scpsim/oracle.hpp"
#include "scpsim/rng.hpp"
#include "scpsim/sim.hpp"

using namespace scpsim;

namespace {

QuantumCircuit random_iqp(int n, int m, RandomStream& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[q] = q;
  std::vector<Layer> d_layers;
  Layer layer;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (int q = 0; q + 1 < n; q += 2) {
    if (rng.next_bernoulli(0.5)) {
      layer.push_back({GateKind::CZ, {q, q + 1}});
      used[q] = used[q + 1] = 1;
    }
  }
  const GateKind singles[] = {GateKind::T, GateKind::S, GateKind::Z};
  for (int q = 0; q < n; ++q) {
    if (!used[q]) layer.push_back({singles[rng.next_below(3)], {q}});
  }
  d_layers.push_back(layer);
  return build_simon_type(n, m, all, all, d_layers);
}

BooleanFunction random_junta(int m, int k, RandomStream& rng) {
  k = std::min(k, m);
  std::vector<int> vars;
  while (static_cast<int>(vars.size()) < k) {
    const int v = static_cast<int>(rng.next_below(m));
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  for (;;) {
    std::vector<std::uint8_t> core(std::size_t{1} << k);
    bool nonzero = false;
    for (auto& v : core) {
      v = static_cast<std::uint8_t>(rng.next_bits(1));
      nonzero = nonzero || v;
    }
    if (nonzero) return BooleanFunction::junta(m, vars, std::move(core));
  }
}

}  // namespace

TEST_CASE("schedule arithmetic") {
  AccuracyBudget budget;
  budget.p_target = 7;
  CHECK(budget.theta(4) == 3 * 7 * 4);
  const std::int64_t theta = budget.theta(4);
  CHECK(budget.q_poly(4) == 24 * 7 * theta * theta);
  CHECK(budget.r_poly(4) == 12 * 7 * theta * theta);
}

TEST_CASE("simulate on degenerate inputs") {
  SUBCASE("constant-one function gives estimate 1") {
    const auto f = BooleanFunction::truth_table(2, {1, 1, 1, 1});
    const auto c = parse_circuit("qc n=3 m=2 / H 0 / CZ 0 1");
    AccuracyBudget budget;
    const auto result = simulate(c, f, BackendTag::Exact, budget, 1);
    CHECK(result.estimate == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(result.l_tilde.size() == 1);
    CHECK(result.l_tilde[0] == 0);
    CHECK(result.per_s[0].b == 1.0);  // B(0^m) = 1 by definition
    CHECK(result.per_s[0].a == doctest::Approx(-1.0));
  }
  SUBCASE("identity circuit with parity gives estimate 0") {
    const auto c = parse_circuit("qc n=4 m=4");
    AccuracyBudget budget;
    const auto result = simulate(c, BooleanFunction::parity(4), BackendTag::Exact, budget, 2);
    CHECK(result.estimate == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("f.m must match the measured prefix") {
    const auto c = parse_circuit("qc n=4 m=3");
    AccuracyBudget budget;
    CHECK_THROWS_AS(
        static_cast<void>(simulate(c, BooleanFunction::parity(4), BackendTag::Exact, budget, 3)),
        validation_error);
  }
}

TEST_CASE("simulate end to end against the oracle, small corpus") {
  RandomStream rng = RandomStream::root(301).derive("sim-small");
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(5));
    const int m = 2 + static_cast<int>(rng.next_below(std::min(n, 6) - 1));
    const auto c = random_iqp(n, m, rng);
    const auto f = random_junta(m, 3, rng);
    AccuracyBudget budget;
    budget.p_target = 10;
    budget.delta = 0.01;
    const auto result = simulate(c, f, BackendTag::CtEcs, budget, rng.next_u64());
    const double truth = acceptance_probability_exact(c, f);
    CHECK(std::abs(result.estimate - truth) <= 0.05);
    CHECK(result.estimate >= 0.0);
    CHECK(result.estimate <= 1.0);
  }
}

TEST_CASE("simulate IQP n=10 with 4-junta post-processing") {
  RandomStream rng = RandomStream::root(337).derive("iqp-4junta");
  int hits = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const int m = 4 + static_cast<int>(rng.next_below(5));
    const auto c = random_iqp(10, m, rng);
    const auto f = random_junta(m, 4, rng);
    AccuracyBudget budget;
    budget.p_target = 10;
    budget.delta = 0.01;
    const auto result = simulate(c, f, BackendTag::CtEcs, budget, rng.next_u64());
    if (std::abs(result.estimate - acceptance_probability_exact(c, f)) <= 0.05) ++hits;
  }
  CHECK(hits == trials);
}

TEST_CASE("determinism across worker counts and reruns") {
  RandomStream rng = RandomStream::root(303).derive("det");
  const auto c = random_iqp(8, 6, rng);
  const auto f = random_junta(6, 3, rng);
  AccuracyBudget budget;
  const auto a = simulate(c, f, BackendTag::CtEcs, budget, 12345);
  const auto b = simulate(c, f, BackendTag::CtEcs, budget, 12345);
  CHECK(a.estimate == b.estimate);
  CHECK(a.p_prime_estimate == b.p_prime_estimate);
  REQUIRE(a.per_s.size() == b.per_s.size());
  for (std::size_t i = 0; i < a.per_s.size(); ++i) {
    CHECK(a.per_s[i].s == b.per_s[i].s);
    CHECK(a.per_s[i].a == b.per_s[i].a);
    CHECK(a.per_s[i].b == b.per_s[i].b);
  }
}

TEST_CASE("error budget audit") {
  SUBCASE("exact backend and exact shortcut zero the tail and backend terms") {
    RandomStream rng = RandomStream::root(307).derive("audit");
    const auto c = build_random_circuit(6, 4, 25, rng.next_u64());
    const auto f = random_junta(4, 3, rng);
    AccuracyBudget budget;
    budget.p_target = 5;
    const auto audit = error_budget_audit(c, f, BackendTag::Exact, budget, 11);
    CHECK(audit.backend_term <= 1e-12);
    CHECK(audit.coefficient_term <= 1e-12);
    CHECK(audit.pass);
  }
  SUBCASE("AND post-processing at p_target = 5 keeps all three terms under 1/15") {
    RandomStream rng = RandomStream::root(311).derive("audit-and");
    const auto c = build_random_circuit(8, 4, 30, rng.next_u64());
    const auto f = BooleanFunction::conjunction(4);
    AccuracyBudget budget;
    budget.p_target = 5;
    const auto audit = error_budget_audit(c, f, BackendTag::Exact, budget, 13);
    CHECK(audit.bound == doctest::Approx(1.0 / 15.0));
    CHECK(audit.tail_term < audit.bound);
    CHECK(audit.backend_term < audit.bound);
    CHECK(audit.coefficient_term < audit.bound);
  }
  SUBCASE("parity keeps the tail empty") {
    const auto c = build_random_circuit(6, 6, 20, 17);
    AccuracyBudget budget;
    budget.p_target = 5;
    const auto audit = error_budget_audit(c, BooleanFunction::parity(6), BackendTag::Exact,
                                          budget, 19);
    CHECK(audit.tail_term <= 1e-12);
  }
}

TEST_CASE("monotone accuracy in p_target with the exact backend") {
  RandomStream rng = RandomStream::root(313).derive("monotone");
  double total_small = 0.0;
  double total_large = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(4));
    const int m = 2 + static_cast<int>(rng.next_below(3));
    const auto c = build_random_circuit(n, m, 25, rng.next_u64());
    const auto f = random_junta(m, std::min(3, m), rng);
    const double truth = acceptance_probability_exact(c, f);
    AccuracyBudget small;
    small.p_target = 2;
    AccuracyBudget large;
    large.p_target = 4;
    const std::uint64_t seed = rng.next_u64();
    total_small += std::abs(simulate(c, f, BackendTag::Exact, small, seed).estimate - truth);
    total_large += std::abs(simulate(c, f, BackendTag::Exact, large, seed).estimate - truth);
  }
  CHECK(total_large <= total_small + 1e-12);
}

TEST_CASE("pauli expectation recovered through the simulation pipeline") {
  SUBCASE("identity circuit") {
    const auto c = parse_circuit("qc n=3 m=3");
    AccuracyBudget budget;
    const double value = pauli_expectation_via_simulation(c, {3, 0b101}, BackendTag::Exact, budget, 3);
    CHECK(value == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("uniform superposition") {
    const auto c = parse_circuit("qc n=3 m=3 / H 0; H 1; H 2");
    AccuracyBudget budget;
    const double value = pauli_expectation_via_simulation(c, {3, 0b111}, BackendTag::Exact, budget, 4);
    CHECK(std::abs(value) <= 1e-9);
  }
  SUBCASE("X0 flips the sign") {
    const auto c = parse_circuit("qc n=2 m=2 / X 0");
    AccuracyBudget budget;
    const double value = pauli_expectation_via_simulation(c, {2, 0b10}, BackendTag::Exact, budget, 5);
    CHECK(value == doctest::Approx(-1.0).epsilon(1e-9));
  }
  SUBCASE("sampling backend stays within 2/p_target of the oracle") {
    RandomStream rng = RandomStream::root(317).derive("fwd");
    const auto c = random_iqp(8, 8, rng);
    AccuracyBudget budget;
    budget.p_target = 10;
    std::uint64_t s = 0;
    while (s == 0) s = rng.next_bits(8);
    const double value = pauli_expectation_via_simulation(c, {8, s}, BackendTag::CtEcs, budget,
                                                 rng.next_u64());
    const double truth = pauli_expectation_exact(c, {8, s});
    CHECK(std::abs(value - truth) <= 2.0 / budget.p_target);
  }
}

TEST_CASE("backend routing and compatibility") {
  const auto cm = build_clifford_magic(4, 4, {{GateKind::H, {0}}, {GateKind::CZ, {1, 2}}});
  SUBCASE("all backends agree on a Clifford Magic circuit") {
    const PauliZMask s{4, 0b1010};
    const double truth = pauli_expectation_exact(cm, s);
    CHECK(backend_pauli_expectation(cm, s, BackendTag::Exact, 0.05, 0.01, 1).value ==
          doctest::Approx(truth).epsilon(1e-9));
    CHECK(backend_pauli_expectation(cm, s, BackendTag::Clifford, 0.05, 0.01, 2).value ==
          doctest::Approx(truth).epsilon(1e-9));
    CHECK(std::abs(backend_pauli_expectation(cm, s, BackendTag::CtEcs, 0.05, 1e-4, 3).value -
                   truth) <= 0.05);
    CHECK(std::abs(backend_pauli_expectation(cm, s, BackendTag::Commuting, 0.05, 1e-4, 4).value -
                   truth) <= 0.05);
  }
  SUBCASE("clifford backend rejects other families") {
    const auto generic = build_random_constant_depth(4, 4, 2, 3);
    CHECK_THROWS_AS(
        static_cast<void>(backend_pauli_expectation(generic, {4, 0b1000}, BackendTag::Clifford,
                                                    0.05, 0.01, 1)),
        validation_error);
  }
  SUBCASE("simulate over every compatible family-backend pair stays near the oracle") {
    RandomStream rng = RandomStream::root(331).derive("pairs");
    AccuracyBudget budget;
    budget.p_target = 10;
    budget.delta = 0.01;
    const int n = 6;
    const int m = 4;
    const auto iqp = random_iqp(n, m, rng);
    const auto magic = build_clifford_magic(n, m, {{GateKind::H, {1}}, {GateKind::CZ, {0, 1}},
                                                   {GateKind::S, {3}}});
    const auto generic = build_random_constant_depth(n, m, 2, rng.next_u64());
    const auto f = random_junta(m, 3, rng);
    struct Pair { const QuantumCircuit* c; BackendTag backend; };
    const Pair pairs[] = {
        {&iqp, BackendTag::Exact},      {&iqp, BackendTag::CtEcs},
        {&iqp, BackendTag::Commuting},  {&magic, BackendTag::Exact},
        {&magic, BackendTag::CtEcs},    {&magic, BackendTag::Clifford},
        {&magic, BackendTag::Commuting}, {&generic, BackendTag::Exact},
        {&generic, BackendTag::Commuting}};
    for (const auto& pair : pairs) {
      const double truth = acceptance_probability_exact(*pair.c, f);
      int failures = 0;
      for (int trial = 0; trial < 10; ++trial) {
        const auto result = simulate(*pair.c, f, pair.backend, budget, rng.next_u64());
        if (std::abs(result.estimate - truth) > 0.05) ++failures;
      }
      CHECK(failures <= 1);  // delta-fraction of trials plus binomial slack
    }
  }
}
