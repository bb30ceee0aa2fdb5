#include "odlinbai/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace odlinbai::io {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(trim(f));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(where + ": malformed number '" + text + "'");
  }
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

void write_row(std::ostream& out, const char* tag, const Vector& v) {
  out << tag;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_double(v(i));
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    // Comments start at '#' or ';' at line start or after whitespace, so
    // values such as "sphere:d=2;c=3" stay intact.
    for (std::size_t i = 0; i < line.size(); ++i) {
      if ((line[i] == '#' || line[i] == ';') &&
          (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line.erase(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

KeyValues read_key_values(const std::string& path) {
  auto in = open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

InstanceFile read_instance_file(const std::string& path) {
  auto in = open_input(path);
  InstanceFile file;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv(line);
    const std::string where = path + ":" + std::to_string(line_no);
    std::string tag;
    if (!fields.empty() && (fields[0] == "theta" || fields[0] == "arm")) {
      tag = fields[0];
      fields.erase(fields.begin());
    }
    std::vector<double> values;
    for (const auto& f : fields) values.push_back(to_double(f, where));
    if (values.empty()) throw Error(where + ": empty row");
    if (tag == "theta") {
      if (file.theta) throw Error(where + ": duplicate theta row");
      file.theta = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    } else {
      if (!rows.empty() && rows.front().size() != values.size()) {
        throw Error(where + ": expected " + std::to_string(rows.front().size()) + " values");
      }
      rows.push_back(std::move(values));
    }
  }
  if (rows.empty()) throw Error("'" + path + "' contains no arms");
  file.arms = ArmSet::from_rows(rows);

  std::ifstream probe(sidecar_path(path));
  if (probe) {
    const auto kv = read_key_values(sidecar_path(path));
    for (const auto& [key, value] : kv) {
      if (key == "noise_std") {
        file.noise_std = to_double(value, sidecar_path(path));
      } else if (key == "seed") {
        file.seed = std::stoull(value);
      }
    }
  }
  return file;
}

ArmSet read_arm_set(const std::string& path) { return read_instance_file(path).arms; }

LinearBanditInstance read_instance(const std::string& path) {
  auto file = read_instance_file(path);
  if (!file.theta) throw Error("'" + path + "' has no theta row");
  return LinearBanditInstance(std::move(file.arms), std::move(*file.theta), file.noise_std);
}

std::string sidecar_path(const std::string& instance_path) { return instance_path + ".cfg"; }

void write_instance_csv(const LinearBanditInstance& instance, std::ostream& out) {
  write_row(out, "theta", instance.theta());
  for (std::size_t i = 0; i < instance.num_arms(); ++i) {
    write_row(out, "arm", instance.arms().arm(i));
  }
}

void write_instance(const LinearBanditInstance& instance, const std::string& path,
                    std::optional<std::uint64_t> seed) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_instance_csv(instance, out);

  std::ofstream cfg(sidecar_path(path));
  if (!cfg) throw Error("cannot write '" + sidecar_path(path) + "'");
  cfg << "noise_std=" << format_double(instance.noise_std()) << '\n';
  if (seed) cfg << "seed=" << *seed << '\n';
}

void write_design_csv(const design::Design& design, std::ostream& out) {
  out << "arm_index,weight\n";
  for (Eigen::Index i = 0; i < design.weights.size(); ++i) {
    out << i << ',' << format_double(design.weights(i)) << '\n';
  }
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
  out << "phase,arm,reduced_dim,weight,count,estimate,eliminated_flag\n";
  for (const auto& ph : trace.phases) {
    for (std::size_t i = 0; i < ph.active.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      out << ph.phase << ',' << ph.active[i] << ',' << ph.reduced_dim << ','
          << format_double(ii < ph.weights.size() ? ph.weights(ii) : 0.0) << ','
          << (i < ph.counts.size() ? ph.counts[i] : 0) << ','
          << format_double(ii < ph.estimated_rewards.size() ? ph.estimated_rewards(ii) : 0.0)
          << ',' << (i < ph.eliminated.size() && ph.eliminated[i] ? 1 : 0) << '\n';
    }
  }
}

}  // namespace odlinbai::io
