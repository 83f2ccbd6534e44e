#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "scpsim/backends.hpp"
#include "scpsim/dense.hpp"
#include "scpsim/oracle.hpp"
#include "scpsim/rng.hpp"

using namespace scpsim;

namespace {

std::vector<Gate> random_clifford_gates(int n, int count, RandomStream& rng) {
  std::vector<Gate> gates;
  for (int i = 0; i < count; ++i) {
    const int kind = n >= 2 ? static_cast<int>(rng.next_below(3)) : static_cast<int>(rng.next_below(2));
    if (kind == 0) {
      gates.push_back({GateKind::H, {static_cast<int>(rng.next_below(n))}});
    } else if (kind == 1) {
      gates.push_back({GateKind::S, {static_cast<int>(rng.next_below(n))}});
    } else {
      const int a = static_cast<int>(rng.next_below(n));
      int b = static_cast<int>(rng.next_below(n - 1));
      if (b >= a) ++b;
      gates.push_back({GateKind::CZ, {a, b}});
    }
  }
  return gates;
}

double state_overlap_expectation(const CTState& phi, const ECSOperation& a) {
  // <phi|A|phi> by enumeration.
  std::complex<double> acc{0, 0};
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << phi.n); ++x) {
    const auto amp = phi.amplitude(x);
    if (amp == std::complex<double>{0, 0}) continue;
    for (int j = 0; j < a.sparsity; ++j) {
      const auto b = a.beta(j, x);
      if (b == std::complex<double>{0, 0}) continue;
      acc += std::conj(phi.amplitude(a.gamma(j, x))) * b * amp;
    }
  }
  return acc.real();
}

}  // namespace

TEST_CASE("pauli products track phases") {
  PauliOperator x{0, {PauliLetter::X}};
  PauliOperator y{0, {PauliLetter::Y}};
  PauliOperator z{0, {PauliLetter::Z}};
  CHECK(multiply(x, y) == PauliOperator{1, {PauliLetter::Z}});   // XY = iZ
  CHECK(multiply(y, x) == PauliOperator{3, {PauliLetter::Z}});   // YX = -iZ
  CHECK(multiply(y, z) == PauliOperator{1, {PauliLetter::X}});
  CHECK(multiply(z, x) == PauliOperator{1, {PauliLetter::Y}});
  CHECK(multiply(x, x) == identity_pauli(1));
  // Associativity spot check with dense matrices.
  RandomStream rng = RandomStream::root(71).derive("pauli-mult");
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(3));
    PauliOperator a = identity_pauli(n), b = identity_pauli(n);
    const PauliLetter letters[] = {PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
    for (int j = 0; j < n; ++j) {
      a.letters[j] = letters[rng.next_below(4)];
      b.letters[j] = letters[rng.next_below(4)];
    }
    a.phase_exponent = static_cast<int>(rng.next_below(4));
    b.phase_exponent = static_cast<int>(rng.next_below(4));
    const auto product = multiply(a, b);
    const auto dense_product = dense::multiply(dense::pauli_matrix(a), dense::pauli_matrix(b));
    CHECK(dense::max_abs_diff(dense_product, dense::pauli_matrix(product)) <= 1e-12);
  }
}

TEST_CASE("clifford conjugation rules") {
  SUBCASE("H maps Z to X") {
    const auto out = conjugate_pauli_through_clifford({{GateKind::H, {0}}}, {0, {PauliLetter::Z}});
    CHECK(out == PauliOperator{0, {PauliLetter::X}});
  }
  SUBCASE("CZ fixes Z0") {
    const auto out = conjugate_pauli_through_clifford(
        {{GateKind::CZ, {0, 1}}}, {0, {PauliLetter::Z, PauliLetter::I}});
    CHECK(out == PauliOperator{0, {PauliLetter::Z, PauliLetter::I}});
  }
  SUBCASE("CZ grows X0 to X0 Z1") {
    const auto out = conjugate_pauli_through_clifford(
        {{GateKind::CZ, {0, 1}}}, {0, {PauliLetter::X, PauliLetter::I}});
    CHECK(out == PauliOperator{0, {PauliLetter::X, PauliLetter::Z}});
  }
  SUBCASE("non-Clifford gates are rejected") {
    CHECK_THROWS_AS(static_cast<void>(conjugate_pauli_through_clifford({{GateKind::T, {0}}},
                                                                       identity_pauli(1))),
                    validation_error);
  }
  SUBCASE("matches dense conjugation on random circuits") {
    RandomStream rng = RandomStream::root(73).derive("tableau");
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + static_cast<int>(rng.next_below(4));
      const auto gates = random_clifford_gates(n, static_cast<int>(rng.next_below(13)), rng);
      PauliOperator p = identity_pauli(n);
      const PauliLetter letters[] = {PauliLetter::I, PauliLetter::X, PauliLetter::Y,
                                     PauliLetter::Z};
      for (int j = 0; j < n; ++j) p.letters[j] = letters[rng.next_below(4)];
      p.phase_exponent = static_cast<int>(rng.next_below(4));
      QuantumCircuit c;
      c.n = n;
      c.m = n;
      for (const auto& g : gates) c.layers.push_back({g});
      const auto u = dense::circuit_unitary(c);
      const auto expected =
          dense::multiply(dense::multiply(dense::adjoint(u), dense::pauli_matrix(p)), u);
      const auto tableau = conjugate_pauli_through_clifford(gates, p);
      CHECK(dense::max_abs_diff(expected, dense::pauli_matrix(tableau)) <= 1e-9);
    }
  }
}

TEST_CASE("product CT states") {
  SUBCASE("all zero preps: point mass") {
    const auto phi = product_ct_state({QubitPrep::Zero, QubitPrep::Zero});
    RandomStream rng = RandomStream::root(1).derive("s");
    for (int i = 0; i < 10; ++i) CHECK(phi.sample(rng) == 0);
    CHECK(phi.amplitude(0) == std::complex<double>{1, 0});
    CHECK(phi.amplitude(2) == std::complex<double>{0, 0});
  }
  SUBCASE("all plus preps: flat") {
    const auto phi = product_ct_state(std::vector<QubitPrep>(3, QubitPrep::PlusState));
    CHECK(phi.flat_magnitude.has_value());
    for (std::uint64_t x = 0; x < 8; ++x) {
      CHECK(std::abs(phi.amplitude(x) - std::complex<double>{1.0 / std::sqrt(8.0), 0}) <= 1e-12);
    }
  }
  SUBCASE("magic prep carries the T phase") {
    const auto phi = product_ct_state({QubitPrep::MagicT});
    CHECK(std::abs(phi.amplitude(0) - std::complex<double>{1.0 / std::sqrt(2.0), 0}) <= 1e-12);
    const auto expected = std::polar(1.0 / std::sqrt(2.0), std::numbers::pi / 4);
    CHECK(std::abs(phi.amplitude(1) - expected) <= 1e-12);
  }
  SUBCASE("sampler matches |amplitude|^2 (chi-square)") {
    const auto phi = product_ct_state(
        {QubitPrep::MagicT, QubitPrep::Zero, QubitPrep::PlusState, QubitPrep::MagicT});
    RandomStream rng = RandomStream::root(77).derive("chisq");
    const int draws = 100000;
    std::map<std::uint64_t, int> counts;
    for (int i = 0; i < draws; ++i) ++counts[phi.sample(rng)];
    double statistic = 0.0;
    int cells = 0;
    for (std::uint64_t x = 0; x < 16; ++x) {
      const double expected = std::norm(phi.amplitude(x)) * draws;
      if (expected < 1e-9) {
        CHECK(counts[x] == 0);
        continue;
      }
      ++cells;
      const double observed = counts[x];
      statistic += (observed - expected) * (observed - expected) / expected;
    }
    // Wilson-Hilferty critical value at significance 1e-3.
    const double k = cells - 1;
    const double z = 3.0902;
    const double critical = k * std::pow(1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k)), 3);
    CHECK(statistic <= critical);
  }
  SUBCASE("normalization") {
    const auto phi = product_ct_state(
        {QubitPrep::PlusState, QubitPrep::Zero, QubitPrep::MagicT});
    double total = 0.0;
    for (std::uint64_t x = 0; x < 8; ++x) total += std::norm(phi.amplitude(x));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ecs operations assemble to the expected matrices") {
  SUBCASE("Z0 on one qubit") {
    const auto u = ecs_from_pauli({0, {PauliLetter::Z}});
    CHECK(u.beta(0, 0) == std::complex<double>{1, 0});
    CHECK(u.beta(0, 1) == std::complex<double>{-1, 0});
    CHECK(u.gamma(0, 0) == 0);
    CHECK(u.gamma(0, 1) == 1);
  }
  SUBCASE("X0 on one qubit") {
    const auto u = ecs_from_pauli({0, {PauliLetter::X}});
    CHECK(u.beta(0, 0) == std::complex<double>{1, 0});
    CHECK(u.gamma(0, 0) == 1);
    CHECK(u.gamma(0, 1) == 0);
  }
  SUBCASE("X0 Z1 equals the dense Kronecker product") {
    const PauliOperator p{0, {PauliLetter::X, PauliLetter::Z}};
    CHECK(dense::max_abs_diff(dense::ecs_matrix(ecs_from_pauli(p)), dense::pauli_matrix(p)) <=
          1e-12);
  }
  SUBCASE("phase +/-i is rejected") {
    CHECK_THROWS_AS(static_cast<void>(ecs_from_pauli({1, {PauliLetter::X}})), validation_error);
  }
  SUBCASE("hermiticity and unitarity of constructed observables") {
    RandomStream rng = RandomStream::root(79).derive("ecs-herm");
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + static_cast<int>(rng.next_below(5));
      PauliOperator p = identity_pauli(n);
      const PauliLetter letters[] = {PauliLetter::I, PauliLetter::X, PauliLetter::Y,
                                     PauliLetter::Z};
      for (int j = 0; j < n; ++j) p.letters[j] = letters[rng.next_below(4)];
      p.phase_exponent = 2 * static_cast<int>(rng.next_below(2));
      const auto matrix = dense::ecs_matrix(ecs_from_pauli(p));
      CHECK(dense::deviation_from_hermitian(matrix) <= 1e-9);
      CHECK(dense::deviation_from_identity(dense::multiply(dense::adjoint(matrix), matrix)) <=
            1e-9);
    }
  }
}

TEST_CASE("ecs for simon-type conjugated observables") {
  SUBCASE("all qubits in R turns Z(s) into X(s)") {
    const auto u = ecs_for_simon_type({0, 1, 2}, {3, 0b111}, 3);
    const PauliOperator expected{0, {PauliLetter::X, PauliLetter::X, PauliLetter::X}};
    CHECK(dense::max_abs_diff(dense::ecs_matrix(u), dense::pauli_matrix(expected)) <= 1e-12);
  }
  SUBCASE("empty R leaves Z(s) unchanged") {
    const auto u = ecs_for_simon_type({}, {2, 0b10}, 3);
    const PauliOperator expected{0, {PauliLetter::Z, PauliLetter::I, PauliLetter::I}};
    CHECK(dense::max_abs_diff(dense::ecs_matrix(u), dense::pauli_matrix(expected)) <= 1e-12);
  }
  SUBCASE("mixed R verified densely") {
    // H on qubits {0, 2} conjugating Z0 Z1: qubit 0 in R -> X, qubit 1 not -> Z.
    const auto u = ecs_for_simon_type({0, 2}, {2, 0b11}, 3);
    const PauliOperator expected{0, {PauliLetter::X, PauliLetter::Z, PauliLetter::I}};
    CHECK(dense::max_abs_diff(dense::ecs_matrix(u), dense::pauli_matrix(expected)) <= 1e-12);
  }
}

TEST_CASE("basis-preserving circuit sections assemble to unitaries") {
  RandomStream rng = RandomStream::root(103).derive("bp-unitary");
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    std::vector<Gate> gates;
    const GateKind kinds[] = {GateKind::X, GateKind::Z, GateKind::S, GateKind::T};
    for (int i = 0; i < 8; ++i) {
      gates.push_back({kinds[rng.next_below(4)], {static_cast<int>(rng.next_below(n))}});
    }
    if (n >= 2) gates.push_back({GateKind::CZ, {0, 1}});
    const auto matrix = dense::ecs_matrix(ecs_from_basis_preserving_circuit(gates, n));
    CHECK(dense::deviation_from_identity(dense::multiply(dense::adjoint(matrix), matrix)) <= 1e-9);
  }
  // Real diagonals are additionally Hermitian and flagged as such.
  const auto diag = ecs_from_basis_preserving_circuit({{GateKind::Z, {0}}, {GateKind::CZ, {0, 1}}}, 2);
  CHECK(diag.hermitian);
  CHECK(dense::deviation_from_hermitian(dense::ecs_matrix(diag)) <= 1e-12);
}

TEST_CASE("apply_basis_preserving") {
  SUBCASE("identity leaves the state alone") {
    const auto phi = product_ct_state({QubitPrep::PlusState, QubitPrep::PlusState});
    const auto out = apply_basis_preserving(phi, ecs_identity(2));
    for (std::uint64_t x = 0; x < 4; ++x) {
      CHECK(std::abs(out.amplitude(x) - phi.amplitude(x)) <= 1e-12);
    }
  }
  SUBCASE("X on qubit 0 of the ground state moves the point mass") {
    const auto phi = product_ct_state({QubitPrep::Zero, QubitPrep::Zero, QubitPrep::Zero});
    const auto u = ecs_from_basis_preserving_circuit({{GateKind::X, {0}}}, 3);
    const auto out = apply_basis_preserving(phi, u);
    CHECK(std::abs(out.amplitude(0b100) - std::complex<double>{1, 0}) <= 1e-12);
    RandomStream rng = RandomStream::root(2).derive("x");
    CHECK(out.sample(rng) == 0b100);
  }
  SUBCASE("CCZ diagonal on the flat state matches the oracle") {
    for (int n : {3, 5}) {
      std::vector<Gate> d_gates{{GateKind::CCZ, {0, 1, 2}}};
      if (n >= 5) d_gates.push_back({GateKind::CZ, {3, 4}});
      const auto phi = apply_basis_preserving(
          product_ct_state(std::vector<QubitPrep>(n, QubitPrep::PlusState)),
          ecs_from_basis_preserving_circuit(d_gates, n));
      std::vector<int> all(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) all[q] = q;
      QuantumCircuit c = build_simon_type(n, n, all, {}, {d_gates});
      const auto state = run(c);
      for (std::uint64_t x = 0; x < state.dim(); ++x) {
        CHECK(std::abs(phi.amplitude(x) - state.amp(x)) <= 1e-9);
      }
    }
  }
  SUBCASE("non-basis-preserving operations are rejected") {
    ECSOperation u = ecs_identity(2);
    u.basis_preserving = false;
    const auto phi = product_ct_state({QubitPrep::Zero, QubitPrep::Zero});
    CHECK_THROWS_AS(static_cast<void>(apply_basis_preserving(phi, u)), validation_error);
  }
}

TEST_CASE("estimate_ct_ecs") {
  SUBCASE("diagonal observable on the ground state is deterministic") {
    const auto phi = product_ct_state(std::vector<QubitPrep>(4, QubitPrep::Zero));
    const auto a = ecs_from_pauli(pauli_from_zmask(4, {4, 0b1010}));
    const auto est = estimate_ct_ecs(phi, a, 0.1, 0.01, 3);
    CHECK(est.value == doctest::Approx(1.0));
    CHECK(est.method == "hoeffding");
  }
  SUBCASE("IQP pair within epsilon of the oracle") {
    RandomStream rng = RandomStream::root(83).derive("iqp");
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 4 + static_cast<int>(rng.next_below(7));  // n <= 10
      std::vector<Gate> d_gates;
      for (int q = 0; q + 1 < n; q += 2) d_gates.push_back({GateKind::CZ, {q, q + 1}});
      for (int q = 0; q < n; ++q) {
        if (rng.next_bernoulli(0.5)) d_gates.push_back({GateKind::T, {q}});
      }
      std::uint64_t s = 0;
      while (s == 0) s = rng.next_bits(n);

      std::vector<int> all(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) all[q] = q;
      auto phi = product_ct_state(std::vector<QubitPrep>(n, QubitPrep::PlusState));
      phi = apply_basis_preserving(phi, ecs_from_basis_preserving_circuit(d_gates, n));
      const auto a = ecs_for_simon_type(all, {n, s}, n);
      const auto est = estimate_ct_ecs(phi, a, 0.05, 1e-4, rng.next_u64());

      std::vector<Layer> d_layers;
      for (const auto& g : d_gates) d_layers.push_back({g});
      const auto c = build_simon_type(n, n, all, all, d_layers);
      const double truth = pauli_expectation_exact(c, {n, s});
      CHECK(std::abs(est.value - truth) <= 0.05);
    }
  }
  SUBCASE("unbiasedness by enumeration") {
    RandomStream rng = RandomStream::root(89).derive("unbiased");
    const int n = 6;
    const auto e_gates = random_clifford_gates(n, 12, rng);
    const auto p = conjugate_pauli_through_clifford(e_gates, pauli_from_zmask(n, {n, 0b101101}));
    const auto a = ecs_from_pauli(p);
    const auto phi = product_ct_state(std::vector<QubitPrep>(n, QubitPrep::MagicT));
    // E[Y] over the sampling distribution equals <phi|A|phi>.
    std::complex<double> mean{0, 0};
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const auto amp = phi.amplitude(x);
      const double prob = std::norm(amp);
      if (prob == 0.0) continue;
      std::complex<double> numer{0, 0};
      for (int j = 0; j < a.sparsity; ++j) {
        numer += std::conj(a.beta(j, x)) * phi.amplitude(a.gamma(j, x));
      }
      mean += prob * numer / amp;
    }
    CHECK(std::abs(mean.real() - state_overlap_expectation(phi, a)) <= 1e-9);
    CHECK(std::abs(mean.imag()) <= 1e-9);
  }
}

TEST_CASE("median-of-means path engages when the flat certificate is absent") {
  auto phi = product_ct_state(std::vector<QubitPrep>(3, QubitPrep::PlusState));
  phi.flat_magnitude.reset();  // drop the certificate, keep the state
  const auto a = ecs_from_pauli(pauli_from_zmask(3, {3, 0b110}));
  const auto est = estimate_ct_ecs(phi, a, 0.1, 0.05, 31);
  CHECK(est.method == "median-of-means");
  const double truth = 0.0;  // <+++|Z Z I|+++> = 0
  CHECK(std::abs(est.value - truth) <= 0.1);
}

TEST_CASE("product-state pauli expectations") {
  const std::vector<QubitPrep> magic(1, QubitPrep::MagicT);
  CHECK(product_state_pauli_expectation(magic, {0, {PauliLetter::Z}}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(product_state_pauli_expectation(magic, {0, {PauliLetter::X}}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(product_state_pauli_expectation(magic, {0, {PauliLetter::Y}}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(product_state_pauli_expectation({QubitPrep::Zero}, {0, {PauliLetter::Z}}) ==
        doctest::Approx(1.0));
}

TEST_CASE("backend dispatcher") {
  SUBCASE("zero mask returns one without sampling") {
    const auto c = build_clifford_magic(3, 3, {});
    const auto est = backend_expectation(c, {3, 0}, 0.1, 0.01, 1);
    CHECK(est.value == 1.0);
    CHECK(est.samples == 0);
  }
  SUBCASE("rejects generic circuits") {
    const auto c = build_random_constant_depth(4, 4, 2, 9);
    CHECK_THROWS_AS(static_cast<void>(backend_expectation(c, {4, 0b1000}, 0.1, 0.01, 1)),
                    validation_error);
  }
  SUBCASE("IQP and Clifford Magic near the oracle at n = 10") {
    RandomStream rng = RandomStream::root(97).derive("dispatch");
    const int n = 10;
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) all[q] = q;
    std::vector<Layer> d_layers;
    Layer layer;
    for (int q = 0; q + 1 < n; q += 2) layer.push_back({GateKind::CZ, {q, q + 1}});
    d_layers.push_back(layer);
    Layer t_layer;
    for (int q = 0; q < n; q += 2) t_layer.push_back({GateKind::T, {q}});
    d_layers.push_back(t_layer);
    const auto iqp = build_simon_type(n, n, all, all, d_layers);
    const auto cm = build_clifford_magic(n, n, random_clifford_gates(n, 30, rng));
    for (const auto& c : {iqp, cm}) {
      std::uint64_t s = 0;
      while (s == 0) s = rng.next_bits(n);
      const auto est = backend_expectation(c, {n, s}, 0.02, 1e-4, rng.next_u64());
      const double truth = pauli_expectation_exact(c, {n, s});
      CHECK(std::abs(est.value - truth) <= 0.02);
    }
  }
  SUBCASE("asymmetric Simon-type circuits (Q != R) near the oracle") {
    RandomStream rng = RandomStream::root(107).derive("asym");
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 4 + static_cast<int>(rng.next_below(5));
      const int half = n / 2;
      std::vector<int> q_set, r_set;
      for (int q = 0; q < n; ++q) {
        if (rng.next_bernoulli(0.6)) q_set.push_back(q);
        if (rng.next_bernoulli(0.6)) r_set.push_back(q);
      }
      std::vector<Gate> d_gates;
      for (int q = 0; q + 1 < n; q += 2) {
        if (rng.next_bernoulli(0.5)) d_gates.push_back({GateKind::CZ, {q, q + 1}});
      }
      for (int q = 0; q < n; ++q) {
        if (rng.next_bernoulli(0.3)) d_gates.push_back({GateKind::X, {q}});
        if (rng.next_bernoulli(0.3)) d_gates.push_back({GateKind::T, {q}});
      }
      std::vector<Layer> d_layers;
      for (const auto& g : d_gates) d_layers.push_back({g});
      const int m = std::max(1, half);
      const auto c = build_simon_type(n, m, q_set, r_set, d_layers);
      std::uint64_t s = 0;
      while (s == 0) s = rng.next_bits(m);
      const auto est = backend_expectation(c, {m, s}, 0.05, 1e-4, rng.next_u64());
      CHECK(std::abs(est.value - pauli_expectation_exact(c, {m, s})) <= 0.05);
    }
  }
  SUBCASE("half-register shape with measured prefix m = n/2") {
    RandomStream rng = RandomStream::root(109).derive("simon-shape");
    const int n = 8;
    const int m = 4;
    std::vector<int> first_half{0, 1, 2, 3};
    std::vector<Layer> d_layers{{{GateKind::X, {4}}},
                                {{GateKind::CZ, {0, 4}}, {GateKind::CZ, {1, 5}}},
                                {{GateKind::CZ, {2, 6}}, {GateKind::CZ, {3, 7}}}};
    const auto c = build_simon_type(n, m, first_half, first_half, d_layers);
    CHECK(circuit_family(c) == CircuitFamily::SimonType);
    for (std::uint64_t s = 1; s < 16; ++s) {
      const auto est = backend_expectation(c, {m, s}, 0.05, 1e-4, rng.next_u64());
      CHECK(std::abs(est.value - pauli_expectation_exact(c, {m, s})) <= 0.05);
    }
  }
  SUBCASE("clifford backend is exact for Clifford Magic") {
    RandomStream rng = RandomStream::root(101).derive("clifford-backend");
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 2 + static_cast<int>(rng.next_below(7));
      const auto c = build_clifford_magic(n, n, random_clifford_gates(n, 3 * n, rng));
      std::uint64_t s = rng.next_bits(n);
      const auto est = clifford_backend_expectation(c, {n, s});
      CHECK(est.value == doctest::Approx(pauli_expectation_exact(c, {n, s})).epsilon(1e-9));
      CHECK(est.samples == 0);
    }
  }
}
