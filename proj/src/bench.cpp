#include "odlinbai/bench.hpp"

#include "odlinbai/geometry.hpp"
#include "odlinbai/instances.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace odlinbai::bench {
namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(sep, start);
    const auto end = pos == std::string_view::npos ? text.size() : pos;
    out.emplace_back(text.substr(start, end - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(what + ": expected a nonnegative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw Error("expected a boolean, got '" + text + "'");
}

const std::string* find_param(const InstanceSpec& spec, const std::string& key) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? nullptr : &it->second;
}

double real_param(const InstanceSpec& spec, const std::string& key, double fallback) {
  const auto* v = find_param(spec, key);
  return v ? parse_real(*v, spec.text + " " + key) : fallback;
}

std::size_t count_param(const InstanceSpec& spec, const std::string& key) {
  const auto* v = find_param(spec, key);
  if (!v) throw Error("instance '" + spec.text + "' needs " + key + "=");
  return static_cast<std::size_t>(parse_count(*v, spec.text + " " + key));
}

struct TrialOutcome {
  bool ran = false;
  bool error = false;
  double ms = 0.0;
  std::string failure;
};

struct TrialInstanceStats {
  bool ok = false;
  std::size_t num_arms = 0;
  std::size_t dim = 0;
  double gap1 = 0.0;
  hardness::HardnessProfile profile;
};

std::string fmt_cell(double v) {
  return std::isfinite(v) ? io::format_double(v) : std::string("nan");
}

double parse_cell(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  return parse_real(text, "report");
}

}  // namespace

std::uint64_t algorithm_stream(Algorithm algo, std::uint64_t budget) {
  return ((static_cast<std::uint64_t>(algo) + 1) << 48) ^ budget;
}

bool InstanceSpec::is_random() const { return kind == "hard" || kind == "sphere"; }

InstanceSpec parse_instance_spec(std::string_view text) {
  InstanceSpec spec;
  spec.text = std::string(text);
  if (spec.text.empty()) throw Error("empty instance spec");
  if (spec.text.find(',') != std::string::npos) {
    throw Error("instance spec '" + spec.text + "' must not contain commas (use ';')");
  }
  const auto colon = text.find(':');
  static const std::set<std::string> kinds{"hard", "sphere", "mab", "file", "abalone"};
  if (colon == std::string_view::npos && kinds.count(spec.text) && spec.text != "file") {
    spec.kind = spec.text;
    return spec;
  }
  if (colon == std::string_view::npos || !kinds.count(std::string(text.substr(0, colon)))) {
    spec.kind = "file";
    spec.params["path"] = spec.text;
    return spec;
  }
  spec.kind = std::string(text.substr(0, colon));
  const auto rest = text.substr(colon + 1);
  if (spec.kind == "file" && rest.find('=') == std::string_view::npos) {
    spec.params["path"] = std::string(rest);
    return spec;
  }
  for (const auto& item : split(rest, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error("instance spec '" + spec.text + "': expected key=value, got '" + item + "'");
    }
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
  }

  static const std::map<std::string, std::set<std::string>> allowed{
      {"hard", {"K", "phi_std", "noise_std"}},
      {"sphere", {"d", "c", "noise_std"}},
      {"mab", {"means", "pad", "noise_std"}},
      {"file", {"path", "noise_std"}},
      {"abalone", {"path", "top_n", "noise_std"}}};
  for (const auto& [key, value] : spec.params) {
    if (!allowed.at(spec.kind).count(key)) {
      throw Error("instance spec '" + spec.text + "': unknown key '" + key + "'");
    }
  }
  return spec;
}

LinearBanditInstance InstanceSpec::make(Rng& rng) const {
  if (kind == "hard") {
    return instances::gen_hard_instance(count_param(*this, "K"), real_param(*this, "phi_std", 0.3),
                                        rng, real_param(*this, "noise_std", 1.0));
  }
  if (kind == "sphere") {
    return instances::gen_sphere_instance(count_param(*this, "d"), count_param(*this, "c"), rng,
                                          real_param(*this, "noise_std", 1.0));
  }
  if (kind == "mab") {
    const auto* means_text = find_param(*this, "means");
    if (!means_text) throw Error("instance '" + text + "' needs means=");
    std::vector<double> means;
    for (const auto& m : split(*means_text, '/')) means.push_back(parse_real(m, text + " means"));
    std::optional<std::size_t> pad;
    if (find_param(*this, "pad")) pad = count_param(*this, "pad");
    return instances::gen_mab_embedding(means, pad, real_param(*this, "noise_std", 1.0));
  }
  const auto* path = find_param(*this, "path");
  if (!path) throw Error("instance '" + text + "' needs a path");
  if (kind == "abalone") {
    instances::AbaloneOptions opts;
    if (find_param(*this, "top_n")) opts.top_n = count_param(*this, "top_n");
    opts.noise_std = real_param(*this, "noise_std", opts.noise_std);
    return instances::load_abalone(*path, opts);
  }
  auto inst = io::read_instance(*path);
  if (find_param(*this, "noise_std")) {
    return inst.with_noise(real_param(*this, "noise_std", inst.noise_std()));
  }
  return inst;
}

void BenchConfig::validate() const {
  if (instances.empty()) throw Error("bench needs at least one instance");
  if (algorithms.empty()) throw Error("bench needs at least one algorithm");
  if (budgets.empty()) throw Error("bench needs at least one budget");
  for (auto b : budgets) {
    if (b == 0) throw Error("budgets must be positive");
  }
  if (n_trials == 0) throw Error("trials must be at least 1");
  if (jobs == 0) throw Error("jobs must be at least 1");
  if (!(eps > 0.0)) throw Error("eps must be positive");
}

void apply_key_values(BenchConfig& config, const io::KeyValues& kv) {
  std::set<std::string> cleared;
  auto fresh = [&](const std::string& key) {
    if (cleared.insert(key).second) return true;
    return false;
  };
  for (const auto& [key, value] : kv) {
    if (key == "instance") {
      if (fresh(key)) config.instances.clear();
      config.instances.push_back(parse_instance_spec(value));
    } else if (key == "algo" || key == "algorithms") {
      if (fresh("algo")) config.algorithms.clear();
      for (const auto& name : split(value, ',')) {
        if (!name.empty()) config.algorithms.push_back(parse_algorithm(name));
      }
    } else if (key == "budget" || key == "budgets") {
      if (fresh("budget")) config.budgets.clear();
      for (const auto& b : split(value, ',')) {
        if (!b.empty()) config.budgets.push_back(parse_count(b, "budget"));
      }
    } else if (key == "trials") {
      config.n_trials = static_cast<std::size_t>(parse_count(value, key));
    } else if (key == "seed") {
      config.base_seed = parse_count(value, key);
    } else if (key == "out_csv" || key == "out-csv") {
      config.out_csv = value;
    } else if (key == "out_plot" || key == "out-plot") {
      config.out_plot = value;
    } else if (key == "jobs") {
      config.jobs = static_cast<std::size_t>(parse_count(value, key));
    } else if (key == "eps") {
      config.eps = parse_real(value, key);
    } else if (key == "timing") {
      config.timing = parse_bool(value);
    } else if (key == "log_y" || key == "log-y") {
      config.log_y = parse_bool(value);
    } else {
      throw Error("unknown config key '" + key + "'");
    }
  }
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  WilsonInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

bool BenchReport::has_failures() const {
  return std::any_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.failure; });
}

BenchReport run_benchmark(const BenchConfig& config) {
  config.validate();
  const std::size_t n_inst = config.instances.size();
  const std::size_t n_algo = config.algorithms.size();
  const std::size_t n_budget = config.budgets.size();
  const std::size_t cells_per_trial = n_inst * n_algo * n_budget;

  // Fixed (file-backed) instances are loaded once and shared read-only.
  std::vector<std::optional<LinearBanditInstance>> fixed(n_inst);
  std::vector<std::string> fixed_errors(n_inst);
  for (std::size_t i = 0; i < n_inst; ++i) {
    if (config.instances[i].is_random()) continue;
    try {
      Rng unused = make_rng(config.base_seed);
      fixed[i] = config.instances[i].make(unused);
    } catch (const std::exception& e) {
      fixed_errors[i] = e.what();
    }
  }

  std::vector<std::vector<TrialOutcome>> outcomes(config.n_trials,
                                                  std::vector<TrialOutcome>(cells_per_trial));
  std::vector<std::vector<TrialInstanceStats>> stats(config.n_trials,
                                                     std::vector<TrialInstanceStats>(n_inst));

  auto run_trial = [&](std::size_t t) {
    const std::uint64_t seed = config.base_seed + t;
    for (std::size_t i = 0; i < n_inst; ++i) {
      std::optional<LinearBanditInstance> drawn;
      std::string failure = fixed_errors[i];
      if (config.instances[i].is_random()) {
        try {
          Rng inst_rng = make_rng(seed, i);
          drawn = config.instances[i].make(inst_rng);
        } catch (const std::exception& e) {
          failure = e.what();
        }
      }
      const LinearBanditInstance* inst = drawn ? &*drawn : (fixed[i] ? &*fixed[i] : nullptr);

      if (inst) {
        auto& st = stats[t][i];
        try {
          const Vector g = gaps(*inst);
          st.dim = geometry::effective_dimension(inst->arms());
          st.num_arms = inst->num_arms();
          st.gap1 = g(0);
          st.profile = hardness::hardness_profile(g, st.dim);
          st.ok = true;
        } catch (const std::exception&) {
          st.ok = false;
        }
      }

      for (std::size_t a = 0; a < n_algo; ++a) {
        for (std::size_t b = 0; b < n_budget; ++b) {
          auto& out = outcomes[t][(i * n_algo + a) * n_budget + b];
          if (!inst) {
            out.failure = failure.empty() ? "instance unavailable" : failure;
            continue;
          }
          const Algorithm algo = config.algorithms[a];
          const std::uint64_t budget = config.budgets[b];
          Rng rng = make_rng(seed, algorithm_stream(algo, budget));
          const auto start = std::chrono::steady_clock::now();
          try {
            const auto result = run_algorithm(algo, *inst, budget, rng, config.eps, false);
            out.ran = true;
            out.error = result.output_arm != inst->best_arm();
          } catch (const std::exception& e) {
            out.failure = e.what();
          }
          if (config.timing) {
            out.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               start)
                         .count();
          }
        }
      }
    }
  };

  const std::size_t workers = std::min(config.jobs, config.n_trials);
  if (workers <= 1) {
    for (std::size_t t = 0; t < config.n_trials; ++t) run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < config.n_trials; t = next++) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  BenchReport report;
  for (std::size_t i = 0; i < n_inst; ++i) {
    InstanceSummary summary;
    summary.instance = config.instances[i].text;
    std::size_t count = 0;
    for (std::size_t t = 0; t < config.n_trials; ++t) {
      const auto& st = stats[t][i];
      if (!st.ok) continue;
      ++count;
      summary.num_arms = st.num_arms;
      summary.dim = st.dim;
      summary.mean_gap1 += st.gap1;
      summary.mean_profile.h1 += st.profile.h1;
      summary.mean_profile.h2 += st.profile.h2;
      summary.mean_profile.h1_lin += st.profile.h1_lin;
      summary.mean_profile.h2_lin += st.profile.h2_lin;
    }
    if (count > 0) {
      const double n = static_cast<double>(count);
      summary.mean_gap1 /= n;
      summary.mean_profile.h1 /= n;
      summary.mean_profile.h2 /= n;
      summary.mean_profile.h1_lin /= n;
      summary.mean_profile.h2_lin /= n;
    }
    report.instances.push_back(summary);

    for (std::size_t a = 0; a < n_algo; ++a) {
      for (std::size_t b = 0; b < n_budget; ++b) {
        const std::size_t cell = (i * n_algo + a) * n_budget + b;
        CellResult res;
        res.instance = config.instances[i].text;
        res.algorithm = std::string(algorithm_name(config.algorithms[a]));
        res.budget = config.budgets[b];
        double total_ms = 0.0;
        for (std::size_t t = 0; t < config.n_trials; ++t) {
          const auto& out = outcomes[t][cell];
          if (!out.ran) {
            res.failure = "trial " + std::to_string(t) + ": " + out.failure;
            break;
          }
          ++res.trials;
          if (out.error) ++res.errors;
          total_ms += out.ms;
        }
        if (res.failure) {
          res.trials = config.n_trials;
          res.errors = 0;
          res.error_rate = res.ci_lo = res.ci_hi = std::numeric_limits<double>::quiet_NaN();
        } else {
          res.error_rate = static_cast<double>(res.errors) / static_cast<double>(res.trials);
          const auto ci = wilson_interval(res.errors, res.trials);
          res.ci_lo = ci.lo;
          res.ci_hi = ci.hi;
          res.mean_trial_ms = total_ms / static_cast<double>(res.trials);
        }
        report.cells.push_back(std::move(res));
      }
    }
  }
  return report;
}

void write_csv(const BenchReport& report, std::ostream& out) {
  out << "instance,algo,budget,trials,errors,error_rate,ci_lo,ci_hi,mean_trial_ms\n";
  for (const auto& c : report.cells) {
    out << c.instance << ',' << c.algorithm << ',' << c.budget << ',' << c.trials << ','
        << c.errors << ',' << fmt_cell(c.error_rate) << ',' << fmt_cell(c.ci_lo) << ','
        << fmt_cell(c.ci_hi) << ',' << fmt_cell(c.mean_trial_ms) << '\n';
  }
}

void write_csv(const BenchReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv(report, out);
  if (!out) throw Error("failed writing '" + path + "'");
}

BenchReport read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  BenchReport report;
  std::string line;
  std::getline(in, line);
  if (line.rfind("instance,algo,budget", 0) != 0) throw Error("'" + path + "' is not a report");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw Error("'" + path + "': malformed row '" + line + "'");
    CellResult c;
    c.instance = f[0];
    c.algorithm = f[1];
    c.budget = parse_count(f[2], "budget");
    c.trials = static_cast<std::size_t>(parse_count(f[3], "trials"));
    c.errors = static_cast<std::size_t>(parse_count(f[4], "errors"));
    c.error_rate = parse_cell(f[5]);
    c.ci_lo = parse_cell(f[6]);
    c.ci_hi = parse_cell(f[7]);
    c.mean_trial_ms = parse_cell(f[8]);
    if (std::isnan(c.error_rate)) c.failure = "failed";
    report.cells.push_back(std::move(c));
  }
  return report;
}

namespace {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x position, error rate)
};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

void write_svg(const std::string& path, const std::string& title, const std::string& x_label,
               const std::vector<std::pair<double, std::string>>& x_ticks,
               const std::vector<Series>& series, bool log_y) {
  constexpr double width = 640, height = 420, left = 70, right = 170, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_pos_min = 1.0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      if (y > 0.0) y_pos_min = std::min(y_pos_min, y);
    }
  }
  if (x_max <= x_min) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  const double y_floor = log_y ? std::pow(10.0, std::floor(std::log10(y_pos_min))) : 0.0;
  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) {
    double frac = 0.0;
    if (log_y) {
      const double lo = std::log10(y_floor);
      frac = (std::log10(std::max(y, y_floor)) - lo) / (0.0 - lo);
    } else {
      frac = y;
    }
    return top + (1.0 - frac) * plot_h;
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << left + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title) << "</text>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\"/>\n</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (const auto& [x, label] : x_ticks) {
    out << "<text x=\"" << sx(x) << "\" y=\"" << top + plot_h + 14
        << "\" text-anchor=\"middle\">" << escape_xml(label) << "</text>\n";
  }
  std::vector<double> y_ticks;
  if (log_y) {
    for (double v = y_floor; v <= 1.0 + 1e-12; v *= 10.0) y_ticks.push_back(v);
  } else {
    for (int i = 0; i <= 5; ++i) y_ticks.push_back(i / 5.0);
  }
  for (double v : y_ticks) {
    out << "<text x=\"" << left - 6 << "\" y=\"" << sy(v) + 3 << "\" text-anchor=\"end\">"
        << io::format_double(v) << "</text>\n";
  }
  out << "</g>\n"
      << "<text class=\"x-label\" x=\"" << left + plot_w / 2 << "\" y=\"" << height - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape_xml(x_label) << "</text>\n"
      << "<text class=\"y-label\" x=\"18\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">error probability"
      << (log_y ? " (log scale)" : "") << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % std::size(colors)];
    out << "<g class=\"series\" data-name=\"" << escape_xml(series[s].name) << "\">\n"
        << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < series[s].points.size(); ++p) {
      if (p) out << ' ';
      out << sx(series[s].points[p].first) << ',' << sy(series[s].points[p].second);
    }
    out << "\"/>\n";
    for (const auto& [x, y] : series[s].points) {
      out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\"" << color
          << "\" data-x=\"" << io::format_double(x) << "\" data-y=\"" << io::format_double(y)
          << "\"/>\n";
    }
    out << "</g>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(s);
    out << "<g class=\"legend\">\n<line x1=\"" << left + plot_w + 14 << "\" y1=\"" << ly
        << "\" x2=\"" << left + plot_w + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n<text x=\"" << left + plot_w + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(series[s].name)
        << "</text>\n</g>\n";
  }
  out << "</svg>\n";
  if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<std::string> ordered_unique(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  for (const auto& v : values) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::string> render_plot(const BenchReport& report, const std::string& path,
                                     bool log_y) {
  std::vector<std::string> inst_names, algo_names;
  std::vector<std::uint64_t> budgets;
  for (const auto& c : report.cells) {
    if (c.failure || !std::isfinite(c.error_rate)) continue;
    inst_names.push_back(c.instance);
    algo_names.push_back(c.algorithm);
    if (std::find(budgets.begin(), budgets.end(), c.budget) == budgets.end()) {
      budgets.push_back(c.budget);
    }
  }
  inst_names = ordered_unique(inst_names);
  algo_names = ordered_unique(algo_names);
  if (inst_names.empty()) throw Error("report has no completed cells to plot");

  std::vector<std::string> written;
  if (inst_names.size() > 1 && budgets.size() == 1) {
    std::vector<Series> series;
    std::vector<std::pair<double, std::string>> ticks;
    for (std::size_t i = 0; i < inst_names.size(); ++i) {
      ticks.emplace_back(static_cast<double>(i), inst_names[i]);
    }
    for (const auto& algo : algo_names) {
      Series s{algo, {}};
      for (const auto& c : report.cells) {
        if (c.algorithm != algo || c.failure || !std::isfinite(c.error_rate)) continue;
        const auto pos = std::find(inst_names.begin(), inst_names.end(), c.instance);
        s.points.emplace_back(static_cast<double>(pos - inst_names.begin()), c.error_rate);
      }
      series.push_back(std::move(s));
    }
    write_svg(path, "T = " + std::to_string(budgets.front()), "instance", ticks, series, log_y);
    written.push_back(path);
    return written;
  }

  const auto dot = path.rfind('.');
  const std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
  const std::string ext = dot == std::string::npos ? std::string(".svg") : path.substr(dot);
  for (std::size_t i = 0; i < inst_names.size(); ++i) {
    std::vector<Series> series;
    std::set<std::uint64_t> xs;
    for (const auto& algo : algo_names) {
      Series s{algo, {}};
      for (const auto& c : report.cells) {
        if (c.instance != inst_names[i] || c.algorithm != algo || c.failure ||
            !std::isfinite(c.error_rate)) {
          continue;
        }
        s.points.emplace_back(static_cast<double>(c.budget), c.error_rate);
        xs.insert(c.budget);
      }
      if (!s.points.empty()) series.push_back(std::move(s));
    }
    std::vector<std::pair<double, std::string>> ticks;
    for (auto x : xs) ticks.emplace_back(static_cast<double>(x), std::to_string(x));
    const std::string file =
        inst_names.size() == 1 ? path : stem + "-" + std::to_string(i) + ext;
    write_svg(file, inst_names[i], "budget T", ticks, series, log_y);
    written.push_back(file);
  }
  return written;
}

}  // namespace odlinbai::bench
