#include "odlinbai/bench.hpp"
#include "odlinbai/geometry.hpp"
#include "odlinbai/hardness.hpp"
#include "odlinbai/instances.hpp"
#include "odlinbai/io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace odlinbai;

namespace {

ArmSet to_arms(const Matrix& m) { return ArmSet(m); }

py::dict trace_to_dict(const RunTrace& trace) {
  py::list phases;
  for (const auto& ph : trace.phases) {
    py::dict p;
    p["phase"] = ph.phase;
    p["active"] = ph.active;
    p["reduced_dim"] = ph.reduced_dim;
    p["weights"] = ph.weights;
    p["counts"] = ph.counts;
    p["estimated_rewards"] = ph.estimated_rewards;
    p["eliminated"] = ph.eliminated;
    p["pulls"] = ph.pulls;
    phases.append(p);
  }
  py::dict out;
  out["algorithm"] = trace.algorithm;
  out["output_arm"] = trace.output_arm;
  out["total_pulls"] = trace.total_pulls;
  out["m"] = trace.m;
  out["dim"] = trace.dim;
  out["phases"] = phases;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fixed-budget best arm identification in linear bandits";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ZeroSpanError>(m, "ZeroSpanError", base.ptr());
  py::register_exception<RankDeficientError>(m, "RankDeficientError", base.ptr());
  py::register_exception<BudgetTooSmallError>(m, "BudgetTooSmallError", base.ptr());

  m.def("effective_dimension",
        [](const Matrix& arms, double tol) { return geometry::effective_dimension(to_arms(arms), tol); },
        py::arg("arms"), py::arg("tol") = geometry::kDefaultRankTol);
  m.def("orthonormal_basis",
        [](const Matrix& arms, double tol) {
          return geometry::orthonormal_basis(to_arms(arms), tol).columns;
        },
        py::arg("arms"), py::arg("tol") = geometry::kDefaultRankTol);

  py::class_<design::Design>(m, "Design")
      .def_readonly("weights", &design::Design::weights)
      .def_readonly("info_matrix", &design::Design::info_matrix)
      .def_readonly("g_value", &design::Design::g_value)
      .def("support", &design::Design::support, py::arg("threshold") = 0.0);

  m.def("solve_g_optimal",
        [](const Matrix& arms, double eps, std::size_t max_iterations) {
          design::SolverOptions opts;
          opts.eps = eps;
          opts.max_iterations = max_iterations;
          return design::solve_g_optimal(to_arms(arms), opts);
        },
        py::arg("arms"), py::arg("eps") = design::kDefaultEps,
        py::arg("max_iterations") = design::kDefaultMaxIterations);
  m.def("g_of", [](const Vector& w, const Matrix& arms) { return design::g_of(w, to_arms(arms)); },
        py::arg("weights"), py::arg("arms"));
  m.def("prune_support",
        [](const design::Design& d, const Matrix& arms, std::size_t max_support, double eps) {
          return design::prune_support(d, to_arms(arms), max_support, eps);
        },
        py::arg("design"), py::arg("arms"), py::arg("max_support"),
        py::arg("eps") = design::kDefaultEps);

  py::class_<LinearBanditInstance>(m, "LinearBanditInstance")
      .def(py::init([](const Matrix& arms, const Vector& theta, double noise_std) {
             return LinearBanditInstance(to_arms(arms), theta, noise_std);
           }),
           py::arg("arms"), py::arg("theta"), py::arg("noise_std") = 1.0)
      .def_property_readonly("arms", [](const LinearBanditInstance& i) { return i.arms().matrix(); })
      .def_property_readonly("theta", &LinearBanditInstance::theta)
      .def_property_readonly("noise_std", &LinearBanditInstance::noise_std)
      .def_property_readonly("labels", &LinearBanditInstance::labels)
      .def_property_readonly("expected_rewards", &LinearBanditInstance::expected_rewards)
      .def_property_readonly("best_arm", &LinearBanditInstance::best_arm)
      .def_property_readonly("num_arms", &LinearBanditInstance::num_arms)
      .def("gaps", [](const LinearBanditInstance& i) { return gaps(i); })
      .def("save", [](const LinearBanditInstance& i, const std::string& path) {
        io::write_instance(i, path);
      });

  m.def("load_instance", &io::read_instance, py::arg("path"));
  m.def("instance_from_spec",
        [](const std::string& spec, std::uint64_t seed) {
          Rng rng = make_rng(seed, 0);
          return bench::parse_instance_spec(spec).make(rng);
        },
        py::arg("spec"), py::arg("seed") = 0);
  m.def("gen_hard_instance",
        [](std::size_t k, double phi_std, std::uint64_t seed, double noise) {
          Rng rng = make_rng(seed, 0);
          return instances::gen_hard_instance(k, phi_std, rng, noise);
        },
        py::arg("K"), py::arg("phi_std") = 0.3, py::arg("seed") = 0, py::arg("noise_std") = 1.0);
  m.def("gen_sphere_instance",
        [](std::size_t d, std::size_t c, std::uint64_t seed, double noise) {
          Rng rng = make_rng(seed, 0);
          return instances::gen_sphere_instance(d, c, rng, noise);
        },
        py::arg("d"), py::arg("c"), py::arg("seed") = 0, py::arg("noise_std") = 1.0);
  m.def("gen_mab_embedding",
        [](const std::vector<double>& means, std::optional<std::size_t> pad, double noise) {
          return instances::gen_mab_embedding(means, pad, noise);
        },
        py::arg("means"), py::arg("pad_to") = py::none(), py::arg("noise_std") = 1.0);

  m.def("compute_m", &hardness::compute_m, py::arg("budget"), py::arg("K"), py::arg("d"));
  m.def("hardness_profile",
        [](const Vector& gaps, std::size_t d) {
          const auto p = hardness::hardness_profile(gaps, d);
          py::dict out;
          out["H1"] = p.h1;
          out["H2"] = p.h2;
          out["H1_lin"] = p.h1_lin;
          out["H2_lin"] = p.h2_lin;
          return out;
        },
        py::arg("gaps"), py::arg("d"));
  m.def("theorem2_bound", &hardness::theorem2_bound, py::arg("budget"), py::arg("K"),
        py::arg("d"), py::arg("h2_lin"));

  m.def("algorithms", [] {
    std::vector<std::string> names;
    for (auto a : all_algorithms()) names.emplace_back(algorithm_name(a));
    return names;
  });
  m.def("run",
        [](const std::string& algo, const LinearBanditInstance& inst, std::uint64_t budget,
           std::uint64_t seed, double eps) {
          const Algorithm a = parse_algorithm(algo);
          Rng rng = make_rng(seed, bench::algorithm_stream(a, budget));
          RunResult result;
          {
            py::gil_scoped_release release;
            result = run_algorithm(a, inst, budget, rng, eps, false);
          }
          return trace_to_dict(result.trace);
        },
        py::arg("algo"), py::arg("instance"), py::arg("budget"), py::arg("seed") = 0,
        py::arg("eps") = design::kDefaultEps);

  m.def("bench",
        [](const std::vector<std::string>& instance_specs, const std::vector<std::string>& algos,
           const std::vector<std::uint64_t>& budgets, std::size_t trials, std::uint64_t seed,
           std::size_t jobs) {
          bench::BenchConfig cfg;
          for (const auto& s : instance_specs) cfg.instances.push_back(bench::parse_instance_spec(s));
          for (const auto& a : algos) cfg.algorithms.push_back(parse_algorithm(a));
          cfg.budgets = budgets;
          cfg.n_trials = trials;
          cfg.base_seed = seed;
          cfg.jobs = jobs;
          bench::BenchReport report;
          {
            py::gil_scoped_release release;
            report = bench::run_benchmark(cfg);
          }
          py::list rows;
          for (const auto& c : report.cells) {
            py::dict row;
            row["instance"] = c.instance;
            row["algo"] = c.algorithm;
            row["budget"] = c.budget;
            row["trials"] = c.trials;
            row["errors"] = c.errors;
            row["error_rate"] = c.error_rate;
            row["ci_lo"] = c.ci_lo;
            row["ci_hi"] = c.ci_hi;
            row["failure"] = c.failure ? py::object(py::str(*c.failure)) : py::object(py::none());
            rows.append(row);
          }
          return rows;
        },
        py::arg("instances"), py::arg("algos"), py::arg("budgets"), py::arg("trials") = 1024,
        py::arg("seed") = 0, py::arg("jobs") = 1);
}
