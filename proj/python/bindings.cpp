#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qwoa/bench.hpp"
#include "qwoa/cli.hpp"
#include "qwoa/error.hpp"
#include "qwoa/instances.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/local_search.hpp"
#include "qwoa/qwoa_sim.hpp"
#include "qwoa/schedule.hpp"

namespace py = pybind11;
using namespace qwoa;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::complex<double>> to_numpy(const Statevector& psi) {
  const auto a = psi.amplitudes();
  return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(a.size()), a.data());
}

Statevector from_numpy(int n, const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a) {
  return Statevector(n, std::vector<Amplitude>(a.data(), a.data() + a.size()));
}

std::vector<Edge> edges_from(const std::vector<std::tuple<int, int, double>>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [i, j, w] : edges) out.push_back({i, j, w});
  return out;
}

std::map<int, PLevelStats> levels_from(const std::map<int, std::tuple<double, double, double>>& means) {
  std::map<int, PLevelStats> out;
  for (const auto& [p, v] : means) {
    const auto& [m, lo, hi] = v;
    out[p] = {p, m, {lo, hi}, 0};
  }
  return out;
}

py::dict p_star_dict(const PStarEstimate& e) {
  py::dict d;
  d["p_star"] = e.p_star;
  d["ci"] = py::make_tuple(e.ci.lo, e.ci.hi);
  d["p_lo"] = e.p_lo;
  d["p_hi"] = e.p_hi;
  d["at_boundary"] = e.at_boundary;
  return d;
}

} // namespace

PYBIND11_MODULE(_qwoa, m) {
  m.doc() = "Non-variational QWOA benchmark core";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);

  py::class_<WeightedGraph>(m, "WeightedGraph")
      .def(py::init([](int n, const std::vector<std::tuple<int, int, double>>& edges) {
             return WeightedGraph(n, edges_from(edges));
           }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &WeightedGraph::num_vertices)
      .def_property_readonly("edges",
                             [](const WeightedGraph& g) {
                               std::vector<std::tuple<int, int, double>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.i, e.j, e.w);
                               return out;
                             })
      .def("scaled", &WeightedGraph::scaled)
      .def("to_text", [](const WeightedGraph& g) { return format_instance(g); })
      .def_static("from_text", [](const std::string& s) { return parse_instance(s); })
      .def("__eq__", [](const WeightedGraph& a, const WeightedGraph& b) { return a == b; })
      .def("__repr__", [](const WeightedGraph& g) {
        return "WeightedGraph(n=" + std::to_string(g.num_vertices()) +
               ", m=" + std::to_string(g.num_edges()) + ")";
      });

  m.def(
      "generate_instance",
      [](int n, double edge_prob, const std::string& weight_dist, std::uint64_t seed) {
        Rng rng(seed);
        auto g = generate_instance(n, edge_prob, WeightDistribution::parse(weight_dist), rng);
        return py::make_tuple(g.graph, g.resamples);
      },
      py::arg("n"), py::arg("edge_prob") = 0.5, py::arg("weight_dist") = "uniform",
      py::arg("seed") = 0, "Random G(n, edge_prob) graph; returns (graph, zero-edge resamples).");

  m.def(
      "library_instance",
      [](std::uint64_t seed, int n, int id, double edge_prob, const std::string& weight_dist) {
        return regenerate_instance({seed, {n}, id + 1, edge_prob, weight_dist}, n, id).graph;
      },
      py::arg("seed"), py::arg("n"), py::arg("id"), py::arg("edge_prob") = 0.5,
      py::arg("weight_dist") = "uniform");

  m.def(
      "load_library",
      [](const std::filesystem::path& dir) {
        const auto lib = load_library(dir);
        py::list out;
        for (const auto& e : lib.instances) out.append(py::make_tuple(e.n, e.id, e.graph));
        return out;
      },
      py::arg("path"), "List of (n, id, graph) from a library directory.");

  py::class_<ObjectiveTable>(m, "ObjectiveTable")
      .def_property_readonly("n", [](const ObjectiveTable& t) { return t.n; })
      .def_property_readonly("values", [](const ObjectiveTable& t) { return to_numpy(t.values); })
      .def_readonly("mean", &ObjectiveTable::mean)
      .def_readonly("sigma", &ObjectiveTable::sigma)
      .def_readonly("optimum", &ObjectiveTable::optimum)
      .def_readonly("minimum", &ObjectiveTable::minimum)
      .def_readonly("optima", &ObjectiveTable::optima)
      .def_property_readonly("degeneracy", &ObjectiveTable::degeneracy);

  m.def("objective_table", &build_objective_table, py::arg("graph"),
        py::arg("max_n") = kDefaultMaxQubits);
  m.def("count_local_optima", &count_local_optima, py::arg("table"));
  m.def("local_optima", &local_optima, py::arg("table"));

  m.def(
      "expand_schedule",
      [](double gamma, double t, double beta, int p, double sigma) {
        const auto s = expand_schedule({gamma, t, beta}, p, sigma);
        return py::make_tuple(s.gammas, s.times);
      },
      py::arg("gamma"), py::arg("t"), py::arg("beta"), py::arg("p"), py::arg("sigma"));

  m.def(
      "evolve",
      [](const ObjectiveTable& table, const std::vector<double>& gammas,
         const std::vector<double>& times) {
        Statevector psi(table.n);
        {
          py::gil_scoped_release release;
          psi = evolve(table, {gammas, times});
        }
        return to_numpy(psi);
      },
      py::arg("table"), py::arg("gammas"), py::arg("times"),
      "Final amplitudes from the equal superposition after the given layers.");

  m.def(
      "apply_mixer",
      [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a,
         double t) {
        int n = 0;
        while ((py::ssize_t{1} << n) < a.size()) ++n;
        return to_numpy(apply_mixer(from_numpy(n, a), t));
      },
      py::arg("amplitudes"), py::arg("t"));

  m.def(
      "expectation",
      [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a,
         const ObjectiveTable& t) { return expectation(from_numpy(t.n, a), t); },
      py::arg("amplitudes"), py::arg("table"));

  m.def(
      "optimal_probability",
      [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& a,
         const ObjectiveTable& t) { return optimal_probability(from_numpy(t.n, a), t); },
      py::arg("amplitudes"), py::arg("table"));

  m.def(
      "optimize",
      [](const ObjectiveTable& table, int p, int multistart, std::tuple<double, double, double> x0) {
        OptimizerConfig cfg;
        cfg.multistart = multistart;
        cfg.x0 = {std::get<0>(x0), std::get<1>(x0), std::get<2>(x0)};
        OptimizationResult r;
        {
          py::gil_scoped_release release;
          r = optimize(table, p, cfg);
        }
        const auto psi = evolve(table, expand_schedule(r.params, p, table.sigma));
        py::dict d;
        d["gamma"] = r.params.gamma;
        d["t"] = r.params.t;
        d["beta"] = r.params.beta;
        d["expectation"] = r.expectation;
        d["meas_prob"] = optimal_probability(psi, table);
        d["n_evals"] = r.n_evals;
        d["converged"] = r.converged;
        d["status"] = r.status;
        return d;
      },
      py::arg("table"), py::arg("p"), py::arg("multistart") = 4,
      py::arg("x0") = std::make_tuple(0.75, 0.35, 0.25));

  m.def(
      "local_search_solve_probability",
      [](const WeightedGraph& g, const std::string& variant, std::uint64_t runs, std::uint64_t seed) {
        const auto table = build_objective_table(g);
        const LocalSearch search(g, table.optimum);
        const auto e = estimate_solve_probability(search, parse_variant(variant), runs, Rng(seed));
        py::dict d;
        d["p_solve"] = e.p_solve;
        d["ci95"] = py::make_tuple(e.ci95.lo, e.ci95.hi);
        d["mean_evals"] = e.mean_evals;
        d["runs"] = e.runs;
        return d;
      },
      py::arg("graph"), py::arg("variant") = "steepest", py::arg("runs") = 1000, py::arg("seed") = 2);

  m.def(
      "exact_solve_probability",
      [](const WeightedGraph& g) {
        const auto table = build_objective_table(g);
        return exact_solve_probability(LocalSearch(g, table.optimum), table);
      },
      py::arg("graph"));

  m.def("grover_success_probability", &grover_success_probability, py::arg("search_space"),
        py::arg("marked"), py::arg("iterations"));
  m.def("grover_required_iterations", &grover_required_iterations, py::arg("search_space"),
        py::arg("marked"), py::arg("target"));

  m.def(
      "interpolate_p_star",
      [](const std::map<int, std::tuple<double, double, double>>& means, double target) {
        return p_star_dict(interpolate_p_star(levels_from(means), target));
      },
      py::arg("means"), py::arg("target"),
      "means maps p -> (mean, ci_lo, ci_hi).");

  m.def(
      "fit_required_iterations",
      [](const std::map<int, double>& p_star) {
        const auto f = fit_required_iterations(p_star);
        return py::make_tuple(f.a, f.b, f.c);
      },
      py::arg("p_star_by_n"));

  m.def("four_shot_probability", &four_shot_probability, py::arg("meas_prob"));
  m.def("amplification", &amplification, py::arg("meas_prob"), py::arg("degeneracy"), py::arg("n"));
  m.def("round_half_up", &round_half_up, py::arg("x"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one qwoa-bench command; returns (exit_code, stdout, stderr).");
}
