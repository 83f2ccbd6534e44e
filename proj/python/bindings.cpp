#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scpsim/boolfn.hpp"
#include "scpsim/circuit.hpp"
#include "scpsim/commuting.hpp"
#include "scpsim/oracle.hpp"
#include "scpsim/sim.hpp"
#include "scpsim/verify.hpp"

namespace py = pybind11;
using namespace scpsim;

namespace {

py::dict result_to_dict(const SimulationResult& result, int m) {
  py::dict out;
  out["estimate"] = result.estimate;
  out["p_prime_estimate"] = result.p_prime_estimate;
  out["clamped"] = result.clamped;
  py::list l_tilde;
  for (std::uint64_t s : result.l_tilde) l_tilde.append(to_bit_string(s, m));
  out["l_tilde"] = l_tilde;
  py::list per_s;
  for (const auto& rec : result.per_s) {
    py::dict entry;
    entry["s"] = to_bit_string(rec.s, m);
    entry["a"] = rec.a;
    entry["b"] = rec.b;
    entry["backend"] = rec.backend;
    entry["samples"] = rec.samples;
    per_s.append(entry);
  }
  out["per_s"] = per_s;
  out["theta"] = result.theta;
  out["q"] = result.q;
  out["r"] = result.r;
  out["q_l"] = result.q_l;
  out["seed"] = result.seed;
  return out;
}

AccuracyBudget budget_from_kwargs(int p_target, double delta, std::uint64_t max_samples) {
  AccuracyBudget budget;
  budget.p_target = p_target;
  budget.delta = delta;
  budget.max_samples = max_samples;
  return budget;
}

}  // namespace

PYBIND11_MODULE(_scpsim, m) {
  m.doc() = "Classical simulation of quantum circuits followed by sparse post-processing";

  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<capacity_error>(m, "CapacityError", PyExc_RuntimeError);

  py::class_<QuantumCircuit>(m, "Circuit")
      .def_static("parse", &parse_circuit, py::arg("text"))
      .def_property_readonly("n", [](const QuantumCircuit& c) { return c.n; })
      .def_property_readonly("m", [](const QuantumCircuit& c) { return c.m; })
      .def("render", &render_circuit)
      .def("depth", &depth)
      .def("size", &QuantumCircuit::size)
      .def("family", [](const QuantumCircuit& c) { return family_name(circuit_family(c)); })
      .def("lightcone",
           [](const QuantumCircuit& c, int j) {
             const auto cone = lightcone(c, j);
             return std::vector<int>(cone.begin(), cone.end());
           },
           py::arg("qubit"))
      .def("__repr__", [](const QuantumCircuit& c) {
        return "<Circuit n=" + std::to_string(c.n) + " m=" + std::to_string(c.m) +
               " size=" + std::to_string(c.size()) + ">";
      });

  py::class_<BooleanFunction>(m, "BooleanFunction")
      .def_static("parse", &BooleanFunction::parse, py::arg("text"))
      .def_static("parity", &BooleanFunction::parity, py::arg("m"))
      .def_static("conjunction", &BooleanFunction::conjunction, py::arg("m"))
      .def_static("inner_product",
                  [](int m, const std::string& s) {
                    return BooleanFunction::inner_product(m, parse_bit_string(s));
                  },
                  py::arg("m"), py::arg("s"))
      .def_static("truth_table", &BooleanFunction::truth_table, py::arg("m"), py::arg("table"))
      .def_static("junta", &BooleanFunction::junta, py::arg("m"), py::arg("vars"),
                  py::arg("core_table"))
      .def_property_readonly("m", &BooleanFunction::m)
      .def_property_readonly("sparsity_bound", &BooleanFunction::sparsity_bound)
      .def("render", &BooleanFunction::render)
      .def("degree", &BooleanFunction::degree)
      .def("__call__",
           [](const BooleanFunction& f, const std::string& x) {
             return f(parse_bit_string(x));
           })
      .def("__repr__", [](const BooleanFunction& f) {
        return "<BooleanFunction m=" + std::to_string(f.m()) +
               " family=" + family_name(f.family()) + ">";
      });

  m.def("build_random_constant_depth", &build_random_constant_depth, py::arg("n"), py::arg("m"),
        py::arg("d"), py::arg("seed"));
  m.def("build_clifford_magic_random",
        [](int n, int m, std::uint64_t seed) {
          RandomStream rng = RandomStream::root(seed).derive("py-build-cm");
          std::vector<Gate> gates;
          for (int i = 0; i < 3 * n; ++i) {
            const int kind = n >= 2 ? static_cast<int>(rng.next_below(3))
                                    : static_cast<int>(rng.next_below(2));
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
          return build_clifford_magic(n, m, gates);
        },
        py::arg("n"), py::arg("m"), py::arg("seed"));

  m.def("wht_spectrum",
        [](const BooleanFunction& f) {
          const auto spectrum = wht_spectrum(f);
          py::dict out;
          for (const auto& [s, c] : spectrum.coeffs()) {
            out[py::str(to_bit_string(s, f.m()))] = c;
          }
          return out;
        },
        py::arg("f"), "Exact spectrum as a dict keyed by bit strings (m <= 20)");

  m.def("km_significant_set",
        [](const BooleanFunction& f, double theta, double delta, std::uint64_t seed) {
          KMParams params;
          params.theta = theta;
          params.delta = delta;
          const auto found = km_significant_set(lift_to_signed(f), params, seed);
          std::vector<std::string> out;
          out.reserve(found.size());
          for (std::uint64_t s : found) out.push_back(to_bit_string(s, f.m()));
          return out;
        },
        py::arg("f"), py::arg("theta"), py::arg("delta") = 0.01, py::arg("seed") = 12345);

  m.def("statevector",
        [](const QuantumCircuit& c) {
          const auto state = run(c);
          return state.amps();
        },
        py::arg("circuit"), "Dense amplitudes of C|0^n> (qubit 0 = most significant bit)");

  m.def("output_distribution",
        [](const QuantumCircuit& c) { return output_distribution(c).probs; }, py::arg("circuit"));

  m.def("pauli_expectation_exact",
        [](const QuantumCircuit& c, const std::string& s) {
          return pauli_expectation_exact(c, PauliZMask{c.m, parse_bit_string(s)});
        },
        py::arg("circuit"), py::arg("s"));

  m.def("acceptance_probability_exact", &acceptance_probability_exact, py::arg("circuit"),
        py::arg("f"));

  m.def("expectation",
        [](const QuantumCircuit& c, const std::string& s, const std::string& backend,
           double epsilon, double delta, std::uint64_t seed) {
          const auto est = backend_pauli_expectation(c, PauliZMask{c.m, parse_bit_string(s)},
                                                     parse_backend_tag(backend), epsilon, delta,
                                                     seed);
          py::dict out;
          out["value"] = est.value;
          out["samples"] = est.samples;
          out["method"] = est.method;
          return out;
        },
        py::arg("circuit"), py::arg("s"), py::arg("backend") = "exact",
        py::arg("epsilon") = 0.05, py::arg("delta") = 0.01, py::arg("seed") = 12345);

  m.def("simulate",
        [](const QuantumCircuit& c, const BooleanFunction& f, const std::string& backend,
           int p_target, double delta, std::uint64_t max_samples, std::uint64_t seed) {
          const auto result = simulate(c, f, parse_backend_tag(backend),
                                       budget_from_kwargs(p_target, delta, max_samples), seed);
          return result_to_dict(result, f.m());
        },
        py::arg("circuit"), py::arg("f"), py::arg("backend") = "exact", py::arg("p_target") = 10,
        py::arg("delta") = 0.01, py::arg("max_samples") = kDefaultMaxSamples,
        py::arg("seed") = 12345);

  m.def("ancilla_prob0",
        [](const QuantumCircuit& c, const std::string& s) {
          return ancilla_prob0(build_hadamard_test(c, PauliZMask{c.m, parse_bit_string(s)}));
        },
        py::arg("circuit"), py::arg("s"));

  m.def("resource_report",
        [](const QuantumCircuit& c, const BooleanFunction& f, const std::string& s) {
          const auto h = build_hadamard_test(c, PauliZMask{c.m, parse_bit_string(s)});
          const auto report = resource_report(regroup_commuting(h), f);
          py::dict out;
          out["s"] = to_bit_string(report.s, report.m);
          out["gate_count"] = report.gate_count;
          out["degree"] = report.degree;
          out["locality"] = report.locality;
          out["lightcone_bound"] = report.lightcone_bound;
          out["two_local_bound"] = report.two_local_bound;
          out["pass"] = report.pass;
          return out;
        },
        py::arg("circuit"), py::arg("f"), py::arg("s"));

  m.def("run_verification",
        [](int id, double scale, std::uint64_t seed) {
          const auto result = scpsim::verify::run_check(id, scale, seed);
          py::dict out;
          out["id"] = result.id;
          out["name"] = result.name;
          out["pass"] = result.pass;
          out["detail"] = result.detail;
          out["seconds"] = result.seconds;
          return out;
        },
        py::arg("id"), py::arg("scale") = 1.0, py::arg("seed") = 20250808);
}
