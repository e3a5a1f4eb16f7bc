#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modalid/backbone.hpp"
#include "modalid/modal_basis.hpp"

namespace modalid {

enum class TargetSource { Synthetic, Imported };

std::string_view to_string(TargetSource source);

/// The ideal configuration a candidate backbone is scored against.
struct TargetConfiguration {
  std::size_t n = 8;
  double length = 1.0;
  double scale = 1.0;
  std::vector<Eigen::Vector3d> division_points;
  Eigen::Vector3d tcp_vector = Eigen::Vector3d::UnitZ();
  TargetSource source = TargetSource::Synthetic;
  std::optional<CoefficientSet> ground_truth;
  std::optional<double> noise_sigma;
  std::optional<std::uint64_t> seed;

  /// Throws SchemaError when counts or the tcp norm (1 +- 1e-9) are off.
  void validate() const;

  friend bool operator==(const TargetConfiguration&, const TargetConfiguration&) = default;
};

/// Integrates `coeffs` in paper_script mode and extracts the n+1 division
/// points and the tip tangent. With noise_sigma > 0, each coordinate of each
/// division point gets an independent N(0, (sigma*L*scale)^2) offset drawn
/// from `seed`. The tcp vector always comes from the noiseless curve.
TargetConfiguration synth_target(const CoefficientSet& coeffs, double length, double scale,
                                 std::size_t n, double noise_sigma, std::uint64_t seed,
                                 std::size_t sample_count = kDefaultSampleCount);

void save_target(const TargetConfiguration& target, const std::filesystem::path& path);
std::string target_to_json(const TargetConfiguration& target);

/// Loads and validates a target file. A tcp vector whose norm is off by more
/// than 1e-9 but at most 1e-6 is renormalized and a warning is appended.
TargetConfiguration load_target(const std::filesystem::path& path,
                                std::vector<std::string>* warnings = nullptr);
TargetConfiguration parse_target_json(std::string_view text,
                                      std::vector<std::string>* warnings = nullptr);

/// Reads an externally produced target as CSV: n+1 rows of x,y,z division
/// points followed by one tcp row. An optional non-numeric header line is
/// skipped.
TargetConfiguration import_csv_target(const std::filesystem::path& path, std::size_t n,
                                      double length, double scale,
                                      std::vector<std::string>* warnings = nullptr);

}  // namespace modalid
