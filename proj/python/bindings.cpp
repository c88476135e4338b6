#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lipvol/exact_count.hpp"
#include "lipvol/experiments.hpp"
#include "lipvol/graph.hpp"
#include "lipvol/profile.hpp"
#include "lipvol/qseries.hpp"
#include "lipvol/rational.hpp"
#include "lipvol/version.hpp"
#include "lipvol/volume_mc.hpp"

namespace py = pybind11;
using namespace lipvol;

namespace {

// Arbitrary-precision integers cross as Python ints via their decimal form.
py::int_ to_py(const BigInt& z) { return py::int_(py::str(z.get_str(10))); }

py::dict estimate_dict(const mc::VolumeEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["stderr"] = e.stderr;
  d["samples"] = e.samples;
  d["zero_weight_fraction"] = e.zero_weight_fraction;
  d["seed"] = e.seed;
  return d;
}

py::dict log_estimate_dict(const mc::LogVolumeEstimate& e) {
  py::dict d;
  d["log_mean"] = e.log_mean;
  d["stderr_log"] = e.stderr_log;
  d["samples"] = e.samples;
  d["zero_weight_fraction"] = e.zero_weight_fraction;
  d["seed"] = e.seed;
  return d;
}

profile::ProfileParams params(double d, std::optional<double> T) {
  return T ? profile::ProfileParams(d, *T) : profile::ProfileParams::with_default_window(d);
}

}  // namespace

PYBIND11_MODULE(_lipvol, m) {
  m.doc() = "Lipschitz polytope volumes and growth constants";
  m.attr("__version__") = kVersion;

  py::register_exception<exact::ResourceError>(m, "ResourceError", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def(py::init<std::size_t, std::vector<Edge>, std::vector<Vertex>>(), py::arg("n"),
           py::arg("edges"), py::arg("loops") = std::vector<Vertex>{})
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("edges", &Graph::edges)
      .def_property_readonly("loops", &Graph::loops)
      .def("degree", &Graph::degree)
      .def("adjacent", &Graph::adjacent)
      .def("__eq__", &Graph::operator==)
      .def("__repr__", [](const Graph& g) {
        return "Graph(n=" + std::to_string(g.num_vertices()) +
               ", edges=" + std::to_string(g.num_edges()) + ")";
      });

  m.def("make_path", &make_path);
  m.def("make_cycle", &make_cycle);
  m.def("make_complete", &make_complete);
  m.def("make_complete_bipartite", &make_complete_bipartite);
  m.def("make_hypercube", &make_hypercube);
  m.def("gen_gnp", &gen_gnp, py::arg("n"), py::arg("d"), py::arg("seed"));
  m.def("graph_spec", [](const std::string& s) { return resolve_graph_spec(s); },
        "Graph from a spec such as 'builtin:gnp:400,8,5' or 'circ:10,2'.");
  m.def("giant_fraction_fixed_point", &giant_fraction_fixed_point);

  m.def("count_lipschitz",
        [](const Graph& g, unsigned h, std::uint64_t budget) {
          exact::CountOptions opts;
          opts.work_budget = budget;
          return to_py(exact::count_lipschitz(g, h, opts));
        },
        py::arg("g"), py::arg("h"), py::arg("budget") = exact::kDefaultWorkBudget);
  m.def("ehrhart_c",
        [](const Graph& g, std::uint64_t budget) {
          exact::CountOptions opts;
          opts.work_budget = budget;
          const auto e = exact::ehrhart_c(g, opts);
          py::list counts;
          for (const auto& c : e.counts) counts.append(to_py(c));
          py::dict d;
          d["counts"] = counts;
          d["D"] = e.D;
          d["leading"] = to_fraction_string(e.leading);
          d["c"] = e.c;
          d["volume"] = e.volume;
          return d;
        },
        py::arg("g"), py::arg("budget") = exact::kDefaultWorkBudget);
  m.def("count_hom", [](const Graph& g, const Graph& t) { return to_py(exact::count_hom(g, t).count); });
  m.def("lifting_check", [](const Graph& g, unsigned h, unsigned L) {
    return exact::lifting_check(g, h, L).pass;
  });
  m.def("kdd_volume_exact", [](unsigned d) { return to_fraction_string(exact::kdd_volume_exact(d)); });

  m.def("sis_volume",
        [](const Graph& g, std::uint64_t samples, std::uint64_t seed) {
          return estimate_dict(mc::sis_volume(g, samples, seed));
        },
        py::arg("g"), py::arg("samples"), py::arg("seed") = 1);
  m.def("smc_log_volume",
        [](const Graph& g, std::uint64_t particles, std::uint64_t seed) {
          return log_estimate_dict(mc::smc_log_volume(g, particles, seed));
        },
        py::arg("g"), py::arg("particles"), py::arg("seed") = 1);
  m.def("count_violating_pairs",
        [](const std::vector<double>& x) { return mc::count_violating_pairs(x); });
  m.def("flatness_anchor", [](const std::vector<double>& x) {
    const auto a = mc::flatness_anchor(x);
    return py::make_tuple(a.anchor_index, a.outside_count);
  });
  m.def("tail_census", [](const std::vector<double>& x, std::size_t anchor) {
    const auto c = mc::tail_census(x, anchor);
    py::dict d;
    d["S"] = c.S;
    d["U"] = c.U;
    d["W"] = c.W;
    d["D"] = c.D;
    return d;
  });
  m.def("annealed_slice_mean",
        [](std::size_t n, double graph_d, double d, std::optional<double> T,
           std::uint64_t samples, std::uint64_t seed) {
          const auto r = mc::annealed_slice_mean(n, graph_d, params(d, T), samples, seed);
          py::dict out;
          out["log_mean_over_n"] = r.log_mean_over_n;
          out["stderr_log"] = r.stderr_log;
          out["profile_prediction"] = r.profile_prediction;
          out["samples"] = r.samples;
          return out;
        },
        py::arg("n"), py::arg("graph_d"), py::arg("d"), py::arg("T") = py::none(),
        py::arg("samples") = 2000, py::arg("seed") = 1);

  m.def("profile_gain",
        [](double d, std::optional<double> T, bool truncated) {
          const auto s = profile::profile_gain(
              params(d, T), truncated ? profile::Mode::Truncated : profile::Mode::Untruncated);
          py::dict out;
          out["H"] = s.H;
          out["Q"] = s.Q;
          out["gain"] = s.gain;
          out["norm_defect"] = s.norm_defect;
          return out;
        },
        py::arg("d"), py::arg("T") = py::none(), py::arg("truncated") = false);

  m.def("q_pochhammer_inf", [](double q) {
    const auto v = qseries::q_pochhammer_inf(q);
    return py::make_tuple(v.value, v.err);
  });
  m.def("log_q_pochhammer_inf", [](double q) {
    const auto v = qseries::log_q_pochhammer_inf(q);
    return py::make_tuple(v.value, v.err);
  });
  m.def("zeta_integral", [] { return qseries::zeta_integral().value; });

  m.def("run_experiment",
        [](const std::map<std::string, std::string>& settings) {
          experiments::ExperimentConfig cfg;
          for (const auto& [k, v] : settings) experiments::apply_setting(cfg, k, v);
          std::string text;
          {
            py::gil_scoped_release release;
            text = experiments::to_json(experiments::run_experiment(cfg)).dump();
          }
          return py::module_::import("json").attr("loads")(text);
        },
        "Runs an experiment from key=value settings and returns the report as a dict.");
}
