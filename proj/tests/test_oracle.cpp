#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scpsim/boolfn.hpp"
#include "scpsim/circuit.hpp"
#include "scpsim/oracle.hpp"
#include "scpsim/rng.hpp"

using namespace scpsim;

TEST_CASE("run on elementary circuits") {
  SUBCASE("H on one qubit") {
    const auto state = run(parse_circuit("qc n=1 m=1 / H 0"));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(state.amp(0) - std::complex<double>{inv_sqrt2, 0}) <= 1e-12);
    CHECK(std::abs(state.amp(1) - std::complex<double>{inv_sqrt2, 0}) <= 1e-12);
  }
  SUBCASE("empty circuit stays in the ground state") {
    const auto state = run(parse_circuit("qc n=2 m=2"));
    CHECK(state.amp(0) == std::complex<double>{1, 0});
    for (std::uint64_t x = 1; x < 4; ++x) CHECK(state.amp(x) == std::complex<double>{0, 0});
  }
  SUBCASE("H tensor H then CZ") {
    const auto state = run(parse_circuit("qc n=2 m=2 / H 0; H 1 / CZ 0 1"));
    CHECK(state.amp(0b00).real() == doctest::Approx(0.5));
    CHECK(state.amp(0b01).real() == doctest::Approx(0.5));
    CHECK(state.amp(0b10).real() == doctest::Approx(0.5));
    CHECK(state.amp(0b11).real() == doctest::Approx(-0.5));
  }
  SUBCASE("sequential H 0, CZ, H 1 differs from the layered variant") {
    const auto state = run(parse_circuit("qc n=2 m=2 / H 0 / CZ 0 1 / H 1"));
    // CZ sees qubit 1 still in |0>, so no sign appears anywhere.
    CHECK(state.amp(0b11).real() == doctest::Approx(0.5));
  }
}

TEST_CASE("gate definitions against hand values") {
  SUBCASE("T phase") {
    const auto state = run(parse_circuit("qc n=1 m=1 / H 0 / T 0"));
    const auto expected = std::polar(1.0 / std::sqrt(2.0), std::numbers::pi / 4);
    CHECK(std::abs(state.amp(1) - expected) <= 1e-12);
  }
  SUBCASE("S = T^2 and Z = T^4") {
    const auto s_state = run(parse_circuit("qc n=1 m=1 / H 0 / S 0"));
    const auto tt_state = run(parse_circuit("qc n=1 m=1 / H 0 / T 0 / T 0"));
    CHECK(std::abs(s_state.amp(1) - tt_state.amp(1)) <= 1e-12);
    const auto z_state = run(parse_circuit("qc n=1 m=1 / H 0 / Z 0"));
    CHECK(z_state.amp(1).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  }
  SUBCASE("X = HZH") {
    const auto x_state = run(parse_circuit("qc n=1 m=1 / X 0"));
    const auto hzh_state = run(parse_circuit("qc n=1 m=1 / H 0 / Z 0 / H 0"));
    CHECK(std::abs(x_state.amp(0) - hzh_state.amp(0)) <= 1e-12);
    CHECK(std::abs(x_state.amp(1) - hzh_state.amp(1)) <= 1e-12);
  }
  SUBCASE("CCZ flips only the all-ones amplitude") {
    const auto state = run(parse_circuit("qc n=3 m=3 / H 0; H 1; H 2 / CCZ 0 1 2"));
    for (std::uint64_t x = 0; x < 8; ++x) {
      const double expected = x == 0b111 ? -1.0 : 1.0;
      CHECK(state.amp(x).real() == doctest::Approx(expected / std::sqrt(8.0)));
    }
  }
}

TEST_CASE("inverse application undoes a circuit") {
  RandomStream rng = RandomStream::root(61).derive("inverse");
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(6));
    const auto c = build_random_circuit(n, n, 25, rng.next_u64());
    StateVector state(n);
    state.apply_circuit(c);
    state.apply_circuit(c, /*inverse=*/true);
    CHECK(std::abs(state.amp(0) - std::complex<double>{1, 0}) <= 1e-9);
    CHECK(state.norm_squared() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("norm is preserved gate by gate") {
  RandomStream rng = RandomStream::root(67).derive("norm");
  const auto c = build_random_circuit(5, 5, 40, rng.next_u64());
  StateVector state(5);
  for (const auto& layer : c.layers) {
    for (const auto& g : layer) {
      state.apply_gate(g);
      CHECK(std::abs(state.norm_squared() - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("output distribution") {
  SUBCASE("H^2 with m=1 is uniform") {
    const auto dist = output_distribution(parse_circuit("qc n=2 m=1 / H 0; H 1"));
    CHECK(dist.probs[0] == doctest::Approx(0.5));
    CHECK(dist.probs[1] == doctest::Approx(0.5));
  }
  SUBCASE("identity concentrates at zero") {
    const auto dist = output_distribution(parse_circuit("qc n=3 m=2"));
    CHECK(dist.probs[0] == doctest::Approx(1.0));
    CHECK(dist.probs[1] + dist.probs[2] + dist.probs[3] == doctest::Approx(0.0));
  }
  SUBCASE("simon-type with empty D is a point mass at zero") {
    const auto c = build_simon_type(3, 3, {0, 1, 2}, {0, 1, 2}, {});
    const auto dist = output_distribution(c);
    CHECK(dist.probs[0] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pauli expectations") {
  const auto h1 = parse_circuit("qc n=1 m=1 / H 0");
  CHECK(pauli_expectation_exact(h1, {1, 0}) == doctest::Approx(1.0));  // Z(0) = I
  CHECK(pauli_expectation_exact(h1, {1, 1}) == doctest::Approx(0.0).epsilon(1e-12));

  const auto x0 = parse_circuit("qc n=2 m=2 / X 0");
  CHECK(pauli_expectation_exact(x0, {2, 0b10}) == doctest::Approx(-1.0));
  CHECK(pauli_expectation_exact(x0, {2, 0b01}) == doctest::Approx(1.0));
}

TEST_CASE("acceptance probability") {
  SUBCASE("constant-one function accepts everything") {
    const auto f = BooleanFunction::truth_table(2, {1, 1, 1, 1});
    const auto c = build_random_circuit(4, 2, 20, 5);
    CHECK(acceptance_probability_exact(c, f) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("identity circuit with parity") {
    const auto c = parse_circuit("qc n=3 m=3");
    CHECK(acceptance_probability_exact(c, BooleanFunction::parity(3)) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("uniform distribution with parity is one half") {
    const auto c = parse_circuit("qc n=3 m=3 / H 0; H 1; H 2");
    CHECK(acceptance_probability_exact(c, BooleanFunction::parity(3)) == doctest::Approx(0.5));
  }
  SUBCASE("dimension mismatch is rejected") {
    const auto c = parse_circuit("qc n=3 m=2");
    CHECK_THROWS_AS(static_cast<void>(acceptance_probability_exact(c, BooleanFunction::parity(3))),
                    validation_error);
  }
}

TEST_CASE("capacity errors") {
  QuantumCircuit c;
  c.n = 25;
  c.m = 1;
  CHECK_THROWS_AS(static_cast<void>(run(c)), capacity_error);
}
