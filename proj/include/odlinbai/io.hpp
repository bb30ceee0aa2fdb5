#pragma once

#include "odlinbai/algorithms.hpp"
#include "odlinbai/bandit.hpp"
#include "odlinbai/design.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>

namespace odlinbai::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Flat `key=value` lines; '#' and ';' start comments, blank lines ignored.
/// Repeated keys accumulate in order.
using KeyValues = std::multimap<std::string, std::string>;
KeyValues read_key_values(const std::string& path);
KeyValues parse_key_values(const std::string& text);

/// Arm-set CSV: one arm per row, either plain floats or `arm,<floats>`.
/// A `theta,...` row, if present, is skipped.
ArmSet read_arm_set(const std::string& path);

/// Instance CSV: `theta,<d floats>` then one `arm,<d floats>` row per arm.
/// The sidecar `<path>.cfg` may set noise_std and seed.
struct InstanceFile {
  std::optional<Vector> theta;
  ArmSet arms;
  double noise_std = 1.0;
  std::optional<std::uint64_t> seed;
};
InstanceFile read_instance_file(const std::string& path);
LinearBanditInstance read_instance(const std::string& path);

void write_instance(const LinearBanditInstance& instance, const std::string& path,
                    std::optional<std::uint64_t> seed = std::nullopt);
void write_instance_csv(const LinearBanditInstance& instance, std::ostream& out);

/// `arm_index,weight` rows.
void write_design_csv(const design::Design& design, std::ostream& out);

/// Columns: phase,arm,reduced_dim,weight,count,estimate,eliminated_flag.
void write_trace_csv(const RunTrace& trace, std::ostream& out);

std::string sidecar_path(const std::string& instance_path);

}  // namespace odlinbai::io
