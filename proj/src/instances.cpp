#include "odlinbai/instances.hpp"

#include "odlinbai/geometry.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace odlinbai::instances {
namespace {

constexpr int kMaxRedraws = 100;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size() || !std::isfinite(v)) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error("line " + std::to_string(line) + ": malformed number '" + field + "'");
  }
}

Vector direction(double angle) {
  Vector v(2);
  v << std::cos(angle), std::sin(angle);
  return v;
}

}  // namespace

LinearBanditInstance hard_instance_from_offsets(std::span<const double> offsets,
                                                double noise_std) {
  const std::size_t k = offsets.size() + 2;
  constexpr double pi = std::numbers::pi;
  Matrix arms(static_cast<Eigen::Index>(k), 2);
  arms.row(0) = direction(0.0).transpose();
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    arms.row(static_cast<Eigen::Index>(i + 1)) = direction(pi / 4.0 + offsets[i]).transpose();
  }
  arms.row(static_cast<Eigen::Index>(k - 1)) = direction(3.0 * pi / 4.0).transpose();
  Vector theta(2);
  theta << 1.0, 0.0;
  return LinearBanditInstance(ArmSet(std::move(arms)), std::move(theta), noise_std);
}

LinearBanditInstance gen_hard_instance(std::size_t num_arms, double phi_std, Rng& rng,
                                       double noise_std) {
  if (num_arms < 3) throw Error("hard instance needs K >= 3");
  if (!(phi_std >= 0.0)) throw Error("phi_std must be nonnegative");
  std::normal_distribution<double> normal(0.0, phi_std);
  std::vector<double> offsets(num_arms - 2);
  for (double& phi : offsets) {
    int tries = 0;
    do {
      phi = phi_std > 0.0 ? normal(rng) : 0.0;
    } while (std::cos(std::numbers::pi / 4.0 + phi) >= 1.0 - LinearBanditInstance::kTieTolerance &&
             ++tries < kMaxRedraws);
  }
  return hard_instance_from_offsets(offsets, noise_std);
}

LinearBanditInstance gen_sphere_instance(std::size_t dim, std::size_t c, Rng& rng,
                                         double noise_std) {
  if (dim < 2 || c < 2) throw Error("sphere instance needs d >= 2 and c >= 2");
  double k_real = std::pow(static_cast<double>(c), static_cast<double>(dim));
  if (k_real > 1e7) throw Error("c^d is too large");
  const auto k = static_cast<std::size_t>(std::llround(k_real));
  const auto kk = static_cast<Eigen::Index>(k);
  const auto dd = static_cast<Eigen::Index>(dim);

  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Matrix raw(kk, dd);
    for (Eigen::Index i = 0; i < kk; ++i) {
      for (Eigen::Index j = 0; j < dd; ++j) raw(i, j) = normal(rng);
      const double n = raw.row(i).norm();
      if (n > 0.0) raw.row(i) /= n;
    }

    // Closest pair; the lexicographically smallest index pair wins ties.
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index bi = -1;
    Eigen::Index bj = -1;
    for (Eigen::Index i = 0; i < kk; ++i) {
      for (Eigen::Index j = i + 1; j < kk; ++j) {
        const double dist = (raw.row(i) - raw.row(j)).squaredNorm();
        if (dist < best) {
          best = dist;
          bi = i;
          bj = j;
        }
      }
    }
    if (!(best > 1e-24)) continue;

    std::vector<Eigen::Index> perm{bi, bj};
    for (Eigen::Index i = 0; i < kk; ++i) {
      if (i != bi && i != bj) perm.push_back(i);
    }
    Matrix arms(kk, dd);
    std::vector<std::string> labels;
    labels.reserve(k);
    for (Eigen::Index r = 0; r < kk; ++r) {
      arms.row(r) = raw.row(perm[static_cast<std::size_t>(r)]);
      labels.push_back("orig" + std::to_string(perm[static_cast<std::size_t>(r)]));
    }
    ArmSet arm_set(std::move(arms));
    if (geometry::effective_dimension(arm_set) != dim) continue;

    const Vector a1 = arm_set.arm(0);
    const Vector a2 = arm_set.arm(1);
    Vector theta = a1 + 0.01 * (a1 - a2);
    const Vector p = arm_set.matrix() * theta;
    bool ordered = p(0) - p(1) > LinearBanditInstance::kTieTolerance;
    for (Eigen::Index i = 2; ordered && i < kk; ++i) {
      ordered = p(1) - p(i) > LinearBanditInstance::kTieTolerance;
    }
    if (!ordered) continue;
    return LinearBanditInstance(std::move(arm_set), std::move(theta), noise_std,
                                std::move(labels));
  }
  throw Error("sphere instance: no acceptable draw in " + std::to_string(kMaxRedraws) +
              " attempts");
}

LinearBanditInstance gen_mab_embedding(std::span<const double> means,
                                       std::optional<std::size_t> pad_to, double noise_std) {
  const std::size_t k = means.size();
  if (k < 2) throw Error("embedding needs at least two means");
  const std::size_t total = std::max(k, pad_to.value_or(k));
  const auto kk = static_cast<Eigen::Index>(k);
  Matrix arms = Matrix::Zero(static_cast<Eigen::Index>(total), kk);
  arms.topRows(kk).setIdentity();
  Vector theta(kk);
  for (std::size_t i = 0; i < k; ++i) theta(static_cast<Eigen::Index>(i)) = means[i];
  return LinearBanditInstance(ArmSet(std::move(arms)), std::move(theta), noise_std);
}

AbaloneData read_abalone(const std::string& path, const AbaloneOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open abalone file '" + path + "'");
  std::vector<std::array<double, 9>> rows;
  std::vector<double> target;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(trim(f));
    if (fields.size() != 9) {
      throw Error("line " + std::to_string(line_no) + ": expected 9 fields, found " +
                  std::to_string(fields.size()));
    }
    std::array<double, 9> row{};
    row[0] = 1.0;
    if (fields[0] == "M") {
      row[1] = options.sex_m;
    } else if (fields[0] == "F") {
      row[1] = options.sex_f;
    } else if (fields[0] == "I") {
      row[1] = options.sex_i;
    } else {
      throw Error("line " + std::to_string(line_no) + ": unknown sex code '" + fields[0] + "'");
    }
    for (std::size_t j = 1; j < 8; ++j) row[j + 1] = parse_number(fields[j], line_no);
    rows.push_back(row);
    target.push_back(parse_number(fields[8], line_no));
  }
  if (rows.empty()) throw Error("abalone file '" + path + "' has no rows");

  AbaloneData data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()), 9);
  data.target.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    data.target(static_cast<Eigen::Index>(i)) = target[i];
  }
  return data;
}

LinearBanditInstance load_abalone(const std::string& path, const AbaloneOptions& options) {
  const AbaloneData data = read_abalone(path, options);
  const auto n = static_cast<std::size_t>(data.features.rows());
  if (options.top_n == 0 || options.top_n > n) {
    throw Error("top_n must lie in [1, " + std::to_string(n) + "]");
  }
  const Vector theta = data.features.colPivHouseholderQr().solve(data.target);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.target(static_cast<Eigen::Index>(a)) > data.target(static_cast<Eigen::Index>(b));
  });
  order.resize(options.top_n);

  // Keep only the first of any arms tying for the top expected reward.
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t r : order) {
    top = std::max(top, data.features.row(static_cast<Eigen::Index>(r)).dot(theta));
  }
  std::vector<std::size_t> kept;
  bool have_top = false;
  for (std::size_t r : order) {
    const double p = data.features.row(static_cast<Eigen::Index>(r)).dot(theta);
    if (top - p <= LinearBanditInstance::kTieTolerance) {
      if (have_top) continue;
      have_top = true;
    }
    kept.push_back(r);
  }

  Matrix arms(static_cast<Eigen::Index>(kept.size()), 9);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    arms.row(static_cast<Eigen::Index>(i)) = data.features.row(static_cast<Eigen::Index>(kept[i]));
    labels.push_back("row" + std::to_string(kept[i] + 1));
  }
  return LinearBanditInstance(ArmSet(std::move(arms)), theta, options.noise_std,
                              std::move(labels));
}

}  // namespace odlinbai::instances
