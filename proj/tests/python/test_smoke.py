"""Smoke tests for the python bindings."""

import math
import sys

import scpsim


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def test_circuit_parse_render_roundtrip():
    c = scpsim.Circuit.parse("qc n=2 m=2 / H 0; H 1 / CZ 0 1")
    assert c.n == 2 and c.m == 2
    assert c.depth() == 2
    again = scpsim.Circuit.parse(c.render())
    assert again.render() == c.render()


def test_statevector_and_expectation():
    c = scpsim.Circuit.parse("qc n=1 m=1 / H 0")
    amps = scpsim.statevector(c)
    approx(abs(amps[0] - 1 / math.sqrt(2)), 0.0)
    approx(scpsim.pauli_expectation_exact(c, "1"), 0.0)
    approx(scpsim.pauli_expectation_exact(c, "0"), 1.0)


def test_wht_of_parity():
    f = scpsim.BooleanFunction.parity(4)
    spectrum = scpsim.wht_spectrum(f)
    assert set(spectrum) == {"0000", "1111"}
    approx(spectrum["0000"], 0.5)
    approx(spectrum["1111"], -0.5)
    assert f.degree() == 4


def test_km_returns_the_character_index():
    f = scpsim.BooleanFunction.inner_product(6, "101100")
    found = scpsim.km_significant_set(f, theta=2.0)
    assert found == ["101100"]


def test_simulate_identity_parity():
    c = scpsim.Circuit.parse("qc n=3 m=3")
    f = scpsim.BooleanFunction.parity(3)
    result = scpsim.simulate(c, f, backend="exact")
    approx(result["estimate"], 0.0)


def test_simulate_ct_ecs_close_to_oracle():
    c = scpsim.build_clifford_magic_random(6, 4, seed=7)
    assert c.family() == "clifford_magic"
    f = scpsim.BooleanFunction.junta(4, [0, 2], [0, 1, 1, 0])
    result = scpsim.simulate(c, f, backend="ct-ecs", seed=11)
    truth = scpsim.acceptance_probability_exact(c, f)
    assert abs(result["estimate"] - truth) <= 0.05


def test_hadamard_test_prob0():
    c = scpsim.Circuit.parse("qc n=1 m=1 / H 0")
    approx(scpsim.ancilla_prob0(c, "1"), 0.5)


def test_resource_report():
    c = scpsim.build_random_constant_depth(5, 5, 2, seed=3)
    f = scpsim.BooleanFunction.parity(5)
    report = scpsim.resource_report(c, f, "11111")
    assert report["gate_count"] == 5
    assert report["pass"]


def test_errors_are_python_exceptions():
    try:
        scpsim.Circuit.parse("qc n=1 m=1 / W 0")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for an unknown gate")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
