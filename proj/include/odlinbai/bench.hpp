#pragma once

#include "odlinbai/algorithms.hpp"
#include "odlinbai/hardness.hpp"
#include "odlinbai/io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace odlinbai::bench {

/// Instance description: `kind[:key=value[;key=value...]]`, list values
/// separated by '/'. Kinds:
///   hard:K=50;phi_std=0.3          sphere:d=2;c=2
///   mab:means=0.9/0.5;pad=5        abalone:path=abalone.data;top_n=400
///   file:instance.csv  (or a bare path)
/// Every kind accepts noise_std=<sigma>.
struct InstanceSpec {
  std::string text;
  std::string kind;
  std::map<std::string, std::string> params;

  /// Generators draw a fresh instance per trial; files are fixed.
  bool is_random() const;
  LinearBanditInstance make(Rng& rng) const;
};

InstanceSpec parse_instance_spec(std::string_view text);

/// RNG stream of an algorithm's reward noise within a trial; instance draws
/// use stream = instance position in the config.
std::uint64_t algorithm_stream(Algorithm algo, std::uint64_t budget);

struct BenchConfig {
  std::vector<InstanceSpec> instances;
  std::vector<Algorithm> algorithms;
  std::vector<std::uint64_t> budgets;
  std::size_t n_trials = 1024;
  std::uint64_t base_seed = 0;
  std::string out_csv;
  std::string out_plot;
  std::size_t jobs = 1;
  double eps = design::kDefaultEps;
  bool timing = false;  // record wall-clock per trial (makes the CSV non-reproducible)
  bool log_y = false;

  void validate() const;
};

/// Applies `key=value` settings (instance, algo, budget, trials, seed, out_csv,
/// out_plot, jobs, eps, timing, log_y) on top of `config`. Keys given in
/// `kv` replace the corresponding lists.
void apply_key_values(BenchConfig& config, const io::KeyValues& kv);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};
WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

struct CellResult {
  std::string instance;
  std::string algorithm;
  std::uint64_t budget = 0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  double error_rate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double mean_trial_ms = 0.0;
  std::optional<std::string> failure;
};

struct InstanceSummary {
  std::string instance;
  std::size_t num_arms = 0;
  std::size_t dim = 0;
  double mean_gap1 = 0.0;  // Delta_1 averaged over trial instances
  hardness::HardnessProfile mean_profile;
};

struct BenchReport {
  std::vector<CellResult> cells;
  std::vector<InstanceSummary> instances;

  bool has_failures() const;
};

/// Trial t seeds every random stream it uses from base_seed + t, so results
/// do not depend on `jobs` or on execution order.
BenchReport run_benchmark(const BenchConfig& config);

/// Columns: instance,algo,budget,trials,errors,error_rate,ci_lo,ci_hi,mean_trial_ms.
void write_csv(const BenchReport& report, std::ostream& out);
void write_csv(const BenchReport& report, const std::string& path);
BenchReport read_csv(const std::string& path);

/// SVG line plot of error rate against budget, one series per algorithm.
/// When the report sweeps several instances at a single budget the x axis is
/// the instance instead. Several instances with several budgets produce one
/// file per instance (`<stem>-<i>.svg`). Returns the files written.
std::vector<std::string> render_plot(const BenchReport& report, const std::string& path,
                                     bool log_y = false);

}  // namespace odlinbai::bench
