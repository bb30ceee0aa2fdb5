#include "odlinbai/algorithms.hpp"
#include "odlinbai/bench.hpp"
#include "odlinbai/design.hpp"
#include "odlinbai/geometry.hpp"
#include "odlinbai/hardness.hpp"
#include "odlinbai/instances.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

using namespace odlinbai;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " AC" << id << ": " << detail << std::endl;
  if (!ok) ++failures;
}

// Runs one criterion; an exception counts as a failure.
void check(int id, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, ok, detail);
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

LinearBanditInstance random_instance(std::size_t k, std::size_t d, double sigma, Rng& rng) {
  Matrix arms = normal_matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d), rng);
  Vector theta = normal_matrix(static_cast<Eigen::Index>(d), 1, rng).col(0);
  return LinearBanditInstance(ArmSet(std::move(arms)), std::move(theta), sigma);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double e = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, e);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::pair<bool, std::string> ac1() {
  Rng rng = make_rng(101);
  std::size_t bad_g = 0, slow = 0;
  double worst_ratio = 0, worst_time = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 2 + static_cast<std::size_t>(rep % 11);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(d, 10 * d)(rng);
    const ArmSet arms(normal_matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d), rng));
    const auto start = Clock::now();
    const auto des = design::solve_g_optimal(arms, 1e-7);
    const double dt = seconds_since(start);
    const double g = oracle::g_explicit(des.weights, arms.matrix());
    const double ratio = g / static_cast<double>(d);
    worst_ratio = std::max(worst_ratio, ratio);
    worst_time = std::max(worst_time, dt);
    bad_g += !(g <= (1 + 1e-6) * static_cast<double>(d));
    slow += !(dt < 1.0);
  }
  double basis_dev = 0;
  for (std::size_t d = 2; d <= 12; ++d) {
    const auto des = design::solve_g_optimal(ArmSet(Matrix::Identity(d, d)), 1e-7);
    basis_dev = std::max(basis_dev, (des.weights.array() - 1.0 / d).abs().maxCoeff());
  }
  const bool ok = bad_g == 0 && slow == 0 && basis_dev <= 1e-9;
  return {ok, fmt("200 sets, max g/d = %.9f, slowest solve %.4f s, basis deviation %.2e",
                  worst_ratio, worst_time, basis_dev) +
                  (bad_g ? ", " + std::to_string(bad_g) + " uncertified" : "") +
                  (slow ? ", " + std::to_string(slow) + " slow" : "")};
}

std::pair<bool, std::string> ac2() {
  Rng rng = make_rng(202);
  double worst = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index k = 2 + rep % 3;
    const ArmSet arms(normal_matrix(k, 2, rng));
    const double solver = design::solve_g_optimal(arms, 1e-7).g_value;
    const double grid = oracle::grid_min_g2(arms.matrix(), 1e-3);
    worst = std::max(worst, std::abs(solver - grid));
  }
  return {worst <= 1e-3, fmt("50 sets with K in {2,3,4}, max |g_solver - g_grid| = %.3e", worst)};
}

std::pair<bool, std::string> ac3() {
  std::size_t runs = 0, over_budget = 0, wrong_phases = 0;
  for (std::size_t d = 2; d <= 16; ++d) {
    for (std::size_t mult : {1u, 2u, 4u}) {
      const std::size_t k = mult * d;
      for (std::size_t tm : {4u, 16u}) {
        const std::uint64_t t = tm * k;
        for (std::uint64_t s = 0; s < 20; ++s) {
          Rng rng = make_rng(3000 + d * 1000 + k * 10 + tm, s);
          const auto inst = random_instance(k, d, 1.0, rng);
          const auto res = run_od_linbai(inst, t, rng, {design::kDefaultEps, false});
          ++runs;
          over_budget += res.trace.total_pulls > t;
          wrong_phases += res.trace.phases.size() != hardness::ceil_log2(d);
        }
      }
    }
  }
  return {over_budget == 0 && wrong_phases == 0,
          std::to_string(runs) + " runs, " + std::to_string(over_budget) + " over budget, " +
              std::to_string(wrong_phases) + " with a wrong phase count"};
}

std::pair<bool, std::string> ac4() {
  const double a = hardness::compute_m(25, 25, 2);
  const double b = hardness::compute_m(100, 10, 4);
  bool threw = false;
  try {
    hardness::compute_m(3, 3, 2);
  } catch (const Error&) {
    threw = true;
  }
  return {a == 22.0 && b == 44.0 && threw,
          fmt("m(25,25,2) = %g, m(100,10,4) = %g", a, b) +
              (threw ? ", m(3,3,2) rejected" : ", m(3,3,2) accepted")};
}

std::pair<bool, std::string> ac5() {
  std::size_t runs = 0, non_uniform = 0, mismatched = 0;
  double worst = 0;
  for (std::size_t k : {4u, 8u, 16u}) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng = make_rng(5000 + k, s);
      std::vector<double> means(k);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (auto& m : means) m = u(rng);
      const auto inst = instances::gen_mab_embedding(means, std::nullopt, 1.0);
      const std::uint64_t t = 10 * k + s;
      const auto res = run_od_linbai(inst, t, rng);
      ++runs;
      bool uniform = true, equal = true;
      for (const auto& ph : res.trace.phases) {
        const auto n = static_cast<double>(ph.active.size());
        for (Eigen::Index j = 0; j < ph.weights.size(); ++j)
          uniform &= std::abs(ph.weights(j) - 1.0 / n) <= 1e-12;
        for (std::size_t j = 0; j < ph.counts.size(); ++j) uniform &= ph.counts[j] == ph.counts[0];
        for (std::size_t j = 0; j < ph.active.size(); ++j) {
          double sum = 0;
          std::size_t cnt = 0;
          for (std::size_t p = 0; p < ph.log.size(); ++p) {
            if (ph.log.arm_indices[p] == ph.active[j]) sum += ph.log.rewards[p], ++cnt;
          }
          const double dev = std::abs(ph.estimated_rewards(static_cast<Eigen::Index>(j)) - sum / cnt);
          worst = std::max(worst, dev);
          equal &= cnt > 0 && dev <= 1e-10;
        }
      }
      non_uniform += !uniform;
      mismatched += !equal;
    }
  }
  return {non_uniform == 0 && mismatched == 0,
          std::to_string(runs) + " runs, " + std::to_string(non_uniform) + " non-uniform, " +
              std::to_string(mismatched) + " mismatched, max |estimate - mean| = " +
              fmt("%.2e", worst)};
}

std::pair<bool, std::string> ac6() {
  const auto start = Clock::now();
  std::size_t runs = 0, wrong = 0;
  auto run_all = [&](const LinearBanditInstance& inst, std::uint64_t t, std::uint64_t seed) {
    for (Algorithm algo : all_algorithms()) {
      Rng rng = make_rng(seed, static_cast<std::uint64_t>(algo));
      ++runs;
      wrong += run_algorithm(algo, inst, t, rng, design::kDefaultEps, false).output_arm !=
               inst.best_arm();
    }
  };
  for (std::size_t d = 2; d <= 16; ++d) {
    for (std::size_t mult : {1u, 2u, 4u}) {
      const std::size_t k = mult * d;
      for (std::size_t tm : {4u, 16u}) {
        for (std::uint64_t s = 0; s < 3; ++s) {
          Rng rng = make_rng(6000 + d * 1000 + k * 10 + tm, s);
          run_all(random_instance(k, d, 0.0, rng), tm * k, s);
        }
      }
    }
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng = make_rng(6100, s);
    run_all(instances::gen_hard_instance(50, 0.3, rng, 0.0), 100, s);
    run_all(instances::gen_sphere_instance(2, 3, rng, 0.0), 40, s);
    run_all(instances::gen_sphere_instance(3, 3, rng, 0.0), 120, s);
  }
  const double secs = seconds_since(start);
  return {wrong == 0 && secs < 60.0, std::to_string(runs) + " noiseless runs, " +
                                         std::to_string(wrong) + " wrong, " + fmt("%.1f s", secs)};
}

std::pair<bool, std::string> ac7() {
  const std::vector<double> means{1.0, 0.0};
  const auto inst = instances::gen_mab_embedding(means, std::nullopt, 1.0);
  const auto prof = hardness::hardness_profile(gaps(inst), 2);
  const double bound = hardness::theorem2_bound(450, 2, 2, prof.h2_lin);
  const std::size_t trials = 4096;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = make_rng(7000, i);
    errors += run_od_linbai(inst, 450, rng, {design::kDefaultEps, false}).output_arm != 0;
  }
  const double rate = static_cast<double>(errors) / trials;
  const double limit = bound + 3 * std::sqrt(bound * (1 - bound) / trials);
  const bool ok = std::abs(bound - 7 * std::exp(-7.0)) < 1e-12 && rate <= limit;
  return {ok, fmt("bound %.6f, error rate %.6f (%g / 4096), limit %.6f", bound, rate,
                  static_cast<double>(errors), limit)};
}

std::pair<bool, std::string> ac8() {
  Rng rng = make_rng(808);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  std::size_t violations = 0;
  for (auto [k, d] : {std::pair<std::size_t, std::size_t>{10, 5}, {50, 10}, {100, 10}}) {
    for (int rep = 0; rep < 1000; ++rep) {
      std::vector<double> g(k);
      for (auto& x : g) x = u(rng);
      std::sort(g.begin(), g.end());
      g[0] = g[1];
      const auto p = hardness::hardness_profile(Eigen::Map<Vector>(g.data(), static_cast<Eigen::Index>(k)), d);
      const double kd = static_cast<double>(k) / static_cast<double>(d);
      const double sl = 1e-12;
      violations += !(p.h2_lin <= p.h2 * (1 + sl));
      violations += !(p.h2 <= kd * p.h2_lin * (1 + sl));
      violations += !(p.h2 <= p.h1 * (1 + sl) && p.h1 <= std::log(2.0 * k) * p.h2 * (1 + sl));
      violations +=
          !(p.h2_lin <= p.h1_lin * (1 + sl) && p.h1_lin <= std::log(2.0 * d) * p.h2_lin * (1 + sl));
      violations += !(p.h1_lin <= p.h1);
      violations += !(p.h2_lin <= p.h1_lin * (1 + sl));
    }
  }
  Vector ex(4);
  ex << 0.1, 0.1, 0.2, 0.3;
  const auto p = hardness::hardness_profile(ex, 3);
  const bool example = std::abs(p.h2_lin - 200) < 1e-6 && std::abs(p.h1_lin - 225) < 1e-6 &&
                       std::abs(p.h1 - 236.11111111111111) < 1e-6;
  return {violations == 0 && example,
          std::to_string(violations) + " violations over 3000 vectors; example H2_lin = " +
              fmt("%.6f, H1_lin = %.6f, H1 = %.6f", p.h2_lin, p.h1_lin, p.h1)};
}

std::pair<bool, std::string> ac9() {
  bench::BenchConfig c;
  c.instances = {bench::parse_instance_spec("hard:K=50")};
  c.algorithms = {Algorithm::OdLinBai, Algorithm::SequentialHalving};
  c.budgets = {100};
  c.n_trials = 1024;
  c.base_seed = 0;
  c.jobs = worker_count();
  const auto start = Clock::now();
  const auto r = bench::run_benchmark(c);
  const double secs = seconds_since(start);
  const auto& od = r.cells.at(0);
  const auto& sh = r.cells.at(1);
  const bool ok = !od.failure && !sh.failure && od.error_rate < sh.error_rate &&
                  od.ci_hi < sh.ci_lo && secs < 600;
  return {ok, fmt("OD-LinBAI %.4f [%.4f, %.4f], ", od.error_rate, od.ci_lo, od.ci_hi) +
                  fmt("SH %.4f [%.4f, %.4f], %.1f s", sh.error_rate, sh.ci_lo, sh.ci_hi, secs)};
}

std::pair<bool, std::string> ac10() {
  Rng rng = make_rng(1010);
  double mean_gap = 0;
  std::size_t mislabeled = 0;
  const int draws = 1024;
  for (int i = 0; i < draws; ++i) {
    const auto inst = instances::gen_sphere_instance(2, 2, rng, 1.0);
    const auto p = inst.expected_rewards();
    bool ok = inst.best_arm() == 0;
    for (Eigen::Index j = 1; j < p.size(); ++j) ok &= p(0) > p(j);
    for (Eigen::Index j = 2; j < p.size(); ++j) ok &= p(1) > p(j);
    const Vector a1 = inst.arms().arm(0), a2 = inst.arms().arm(1);
    ok &= (inst.theta() - (a1 + 0.01 * (a1 - a2))).norm() < 1e-15;
    mislabeled += !ok;
    mean_gap += p(0) - p(1);
  }
  mean_gap /= draws;
  const bool ok = mislabeled == 0 && mean_gap >= 0.104 / 2 && mean_gap <= 0.104 * 2;
  return {ok, fmt("mean Delta_1 = %.4f over 1024 draws (reference 0.104), ", mean_gap) +
                  std::to_string(mislabeled) + " mislabeled"};
}

std::pair<bool, std::string> ac11() {
  const std::string cli = ODLINBAI_CLI;
  const auto dir = std::filesystem::temp_directory_path() / "odlinbai_acceptance";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "repro.cfg";
  {
    std::ofstream out(cfg);
    out << "instance=hard:K=12\ninstance=sphere:d=2;c=3\ninstance=mab:means=0.9/0.8/0.5\n"
           "algo=odlinbai,sh,bayesgap-oracle,bayesgap-adaptive\nbudget=40\nbudget=120\n"
           "trials=96\nseed=11\n";
  }
  std::vector<std::string> outputs;
  for (const char* jobs : {"1", "4", "1", "7"}) {
    const auto csv = dir / (std::string("out_") + jobs + "_" + std::to_string(outputs.size()) + ".csv");
    const std::string cmd = cli + " bench --config " + cfg.string() + " --jobs " + jobs +
                            " --out-csv " + csv.string() + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "bench exited nonzero with --jobs " + std::string(jobs)};
    outputs.push_back(slurp(csv));
  }
  bool same = !outputs[0].empty();
  for (const auto& o : outputs) same &= o == outputs[0];
  std::filesystem::remove_all(dir);
  return {same, std::to_string(outputs.size()) + " CLI runs (jobs 1, 4, 1, 7), " +
                    std::to_string(outputs[0].size()) + " bytes, " +
                    (same ? "identical" : "different")};
}

}  // namespace

int main() {
  check(1, ac1);
  check(2, ac2);
  check(3, ac3);
  check(4, ac4);
  check(5, ac5);
  check(6, ac6);
  check(7, ac7);
  check(8, ac8);
  check(9, ac9);
  check(10, ac10);
  check(11, ac11);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
