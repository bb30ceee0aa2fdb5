#include "odlinbai/bench.hpp"
#include "odlinbai/geometry.hpp"
#include "odlinbai/hardness.hpp"
#include "odlinbai/instances.hpp"
#include "odlinbai/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace odlinbai;

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

LinearBanditInstance load_instance(const std::string& text, std::uint64_t seed,
                                   const std::string& data_path = {}) {
  auto spec = bench::parse_instance_spec(text);
  if (!data_path.empty()) spec.params["path"] = data_path;
  Rng rng = make_rng(seed, 0);
  return spec.make(rng);
}

int cmd_design(const std::string& arms_path, double eps, const std::string& max_support_text,
               const std::string& out_path) {
  const ArmSet arms = io::read_arm_set(arms_path);
  const auto basis = geometry::orthonormal_basis(arms);
  const std::size_t d = basis.effective_dim;
  const bool reduced = d < arms.dim();
  const ArmSet work = reduced ? geometry::reduce(arms, basis) : arms;

  std::size_t max_support = design::max_support_bound(d);
  if (max_support_text == "none") {
    max_support = 0;
  } else if (!max_support_text.empty()) {
    max_support = std::stoul(max_support_text);
  }

  design::SolverStats stats;
  design::SolverOptions opts;
  opts.eps = eps;
  design::Design result = design::solve_g_optimal(work, opts, &stats);
  bool pruned = false;
  if (max_support > 0 && result.support_size(design::kPruneThreshold) > max_support) {
    result = design::prune_support(result, work, max_support, eps);
    pruned = true;
  }

  const double bound = (1.0 + (pruned ? 2.0 : 1.0) * eps) * static_cast<double>(d);
  std::ostream& cert = std::cout;
  cert << "# arms=" << arms.size() << " ambient_dim=" << arms.dim() << " effective_dim=" << d
       << (reduced ? " (reduced)" : "") << '\n'
       << "# g=" << io::format_double(result.g_value) << " bound=" << io::format_double(bound)
       << " certified=" << (result.g_value <= bound ? "yes" : "no") << '\n'
       << "# support=" << result.support_size() << " iterations=" << stats.iterations << '\n';
  if (out_path.empty()) {
    io::write_design_csv(result, std::cout);
  } else {
    auto out = open_output(out_path);
    io::write_design_csv(result, out);
  }
  return 0;
}

int cmd_hardness(const std::string& instance_text, std::uint64_t seed,
                 std::optional<std::uint64_t> budget) {
  const auto inst = load_instance(instance_text, seed);
  const std::size_t d = geometry::effective_dimension(inst.arms());
  const Vector g = gaps(inst);
  const auto prof = hardness::hardness_profile(g, d);
  std::cout << "K=" << inst.num_arms() << " d=" << d << '\n' << "delta=";
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    std::cout << (i ? "," : "") << io::format_double(g(i));
  }
  std::cout << '\n'
            << "H1=" << io::format_double(prof.h1) << '\n'
            << "H2=" << io::format_double(prof.h2) << '\n'
            << "H1_lin=" << io::format_double(prof.h1_lin) << '\n'
            << "H2_lin=" << io::format_double(prof.h2_lin) << '\n';
  if (budget) {
    const double m = hardness::compute_m(*budget, inst.num_arms(), d);
    std::cout << "T=" << *budget << " m=" << io::format_double(m) << '\n'
              << "error_bound=" << io::format_double(hardness::theorem2_bound(
                                       *budget, inst.num_arms(), d, prof.h2_lin))
              << '\n';
  }
  return 0;
}

int cmd_gen(const std::string& instance_text, std::uint64_t seed, const std::string& out_path,
            const std::string& data_path) {
  const auto inst = load_instance(instance_text, seed, data_path);
  if (out_path.empty()) {
    io::write_instance_csv(inst, std::cout);
  } else {
    io::write_instance(inst, out_path, seed);
    std::cerr << "wrote " << out_path << " and " << io::sidecar_path(out_path) << " (K="
              << inst.num_arms() << ", d=" << inst.dim() << ")\n";
  }
  return 0;
}

int cmd_run(const std::string& algo_name, const std::string& instance_text,
            std::uint64_t budget, std::uint64_t seed, double eps, const std::string& trace_path) {
  const Algorithm algo = parse_algorithm(algo_name);
  const auto inst = load_instance(instance_text, seed);
  Rng rng = make_rng(seed, bench::algorithm_stream(algo, budget));
  const auto result = run_algorithm(algo, inst, budget, rng, eps, !trace_path.empty());
  std::cout << "algo=" << algorithm_name(algo) << " output_arm=" << result.output_arm
            << " best_arm=" << inst.best_arm()
            << " correct=" << (result.output_arm == inst.best_arm() ? 1 : 0)
            << " total_pulls=" << result.trace.total_pulls << " budget=" << budget << '\n';
  if (!trace_path.empty()) {
    auto out = open_output(trace_path);
    io::write_trace_csv(result.trace, out);
  }
  return 0;
}

struct BenchFlags {
  std::string config;
  std::vector<std::string> algos;
  std::vector<std::uint64_t> budgets;
  std::vector<std::string> instances;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string out_csv;
  std::string out_plot;
  std::optional<std::size_t> jobs;
  std::optional<double> eps;
  bool timing = false;
  bool log_y = false;
};

int cmd_bench(const BenchFlags& f) {
  bench::BenchConfig config;
  if (const char* env = std::getenv("ODLINBAI_JOBS"); env && *env) {
    config.jobs = std::stoul(env);
  }
  if (!f.config.empty()) bench::apply_key_values(config, io::read_key_values(f.config));
  if (!f.instances.empty()) {
    config.instances.clear();
    for (const auto& s : f.instances) config.instances.push_back(bench::parse_instance_spec(s));
  }
  if (!f.algos.empty()) {
    config.algorithms.clear();
    for (const auto& a : f.algos) config.algorithms.push_back(parse_algorithm(a));
  }
  if (config.algorithms.empty()) config.algorithms = all_algorithms();
  if (!f.budgets.empty()) config.budgets = f.budgets;
  if (f.trials) config.n_trials = *f.trials;
  if (f.seed) config.base_seed = *f.seed;
  if (!f.out_csv.empty()) config.out_csv = f.out_csv;
  if (!f.out_plot.empty()) config.out_plot = f.out_plot;
  if (f.jobs) config.jobs = *f.jobs;
  if (f.eps) config.eps = *f.eps;
  if (f.timing) config.timing = true;
  if (f.log_y) config.log_y = true;

  const auto report = bench::run_benchmark(config);
  for (const auto& s : report.instances) {
    std::cerr << "instance " << s.instance << ": K=" << s.num_arms << " d=" << s.dim
              << " mean_delta1=" << io::format_double(s.mean_gap1)
              << " H1=" << io::format_double(s.mean_profile.h1)
              << " H2=" << io::format_double(s.mean_profile.h2)
              << " H1_lin=" << io::format_double(s.mean_profile.h1_lin)
              << " H2_lin=" << io::format_double(s.mean_profile.h2_lin) << '\n';
  }
  if (config.out_csv.empty()) {
    bench::write_csv(report, std::cout);
  } else {
    bench::write_csv(report, config.out_csv);
  }
  if (!config.out_plot.empty()) {
    for (const auto& file : bench::render_plot(report, config.out_plot, config.log_y)) {
      std::cerr << "wrote " << file << '\n';
    }
  }
  for (const auto& c : report.cells) {
    if (c.failure) {
      std::cerr << "failed cell " << c.instance << " " << c.algorithm << " T=" << c.budget
                << ": " << *c.failure << '\n';
    }
  }
  return report.has_failures() ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-budget best arm identification for linear bandits"};
  app.require_subcommand(1);

  std::string arms_path, out_path, max_support;
  double eps = design::kDefaultEps;
  auto* design_cmd = app.add_subcommand("design", "G-optimal design of an arm set");
  design_cmd->add_option("arms", arms_path, "arm-set CSV, one arm per row")->required();
  design_cmd->add_option("--eps", eps, "certificate tolerance")->capture_default_str();
  design_cmd->add_option("--max-support", max_support,
                         "support cap (default d(d+1)/2, or 'none')");
  design_cmd->add_option("--out", out_path, "weights CSV (default stdout)");

  std::string instance, data_path, algo = "odlinbai", trace_path;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget_opt;
  auto* hard_cmd = app.add_subcommand("hardness", "gaps and hardness quantities of an instance");
  hard_cmd->add_option("--instance", instance, "instance file or generator spec")->required();
  hard_cmd->add_option("--budget", budget_opt, "budget T for the error bound");
  hard_cmd->add_option("--seed", seed, "seed for generator specs");

  auto* gen_cmd = app.add_subcommand("gen", "generate an instance file");
  gen_cmd->add_option("--instance", instance,
                      "hard:K=..;phi_std=.. | sphere:d=..;c=.. | mab:means=a/b;pad=.. | abalone")
      ->required();
  gen_cmd->add_option("--seed", seed, "random seed");
  gen_cmd->add_option("--out", out_path, "instance CSV (default stdout)");
  gen_cmd->add_option("--data", data_path, "abalone data file");

  std::uint64_t budget = 0;
  auto* run_cmd = app.add_subcommand("run", "run one algorithm once");
  run_cmd->add_option("--algo", algo, "odlinbai | sh | bayesgap-oracle | bayesgap-adaptive")
      ->capture_default_str();
  run_cmd->add_option("--instance", instance, "instance file or generator spec")->required();
  run_cmd->add_option("--budget", budget, "budget T")->required();
  run_cmd->add_option("--seed", seed, "random seed");
  run_cmd->add_option("--eps", eps, "design tolerance");
  run_cmd->add_option("--trace", trace_path, "per-phase trace CSV");

  BenchFlags bf;
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo error-rate benchmark");
  bench_cmd->add_option("--config", bf.config, "key=value config file");
  bench_cmd->add_option("--instance", bf.instances, "instance spec (repeatable)");
  bench_cmd->add_option("--algo", bf.algos, "algorithm (repeatable)");
  bench_cmd->add_option("--budget", bf.budgets, "budget (repeatable)");
  bench_cmd->add_option("--trials", bf.trials, "trials per cell (default 1024)");
  bench_cmd->add_option("--seed", bf.seed, "base seed");
  bench_cmd->add_option("--out-csv", bf.out_csv, "report CSV (default stdout)");
  bench_cmd->add_option("--out-plot", bf.out_plot, "SVG plot path");
  bench_cmd->add_option("--jobs", bf.jobs, "worker threads (default $ODLINBAI_JOBS or 1)");
  bench_cmd->add_option("--eps", bf.eps, "design tolerance");
  bench_cmd->add_flag("--timing", bf.timing, "record wall-clock per trial");
  bench_cmd->add_flag("--log-y", bf.log_y, "log-scale y axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*design_cmd) return cmd_design(arms_path, eps, max_support, out_path);
    if (*hard_cmd) return cmd_hardness(instance, seed, budget_opt);
    if (*gen_cmd) return cmd_gen(instance, seed, out_path, data_path);
    if (*run_cmd) return cmd_run(algo, instance, budget, seed, eps, trace_path);
    if (*bench_cmd) return cmd_bench(bf);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
