#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string_view>
#include <vector>

#include "modalid/modal_basis.hpp"

namespace modalid {

inline constexpr std::size_t kDefaultSampleCount = 101;

/// Rigid transform (rotation + translation). Rotation is expected to stay in
/// SO(3) within 1e-9.
struct Frame {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d position = Eigen::Vector3d::Zero();

  static Frame identity() { return {}; }
  bool is_valid(double tol = 1e-9) const;
};

Eigen::Matrix3d rotation_x(double angle);
Eigen::Matrix3d rotation_y(double angle);

enum class IntegrationMode {
  /// Cumulative rotation applied to the point (0,0,s), then scaled. This is
  /// the reference Grasshopper listing, reproduced operation for operation.
  PaperScript,
  /// Chained frame-local translations, p_i = p_{i-1} + R_{i-1} (0,0,ds*scale).
  Incremental,
};

std::string_view to_string(IntegrationMode mode);
IntegrationMode parse_mode(std::string_view text);

struct BackboneSample {
  double s = 0.0;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Frame frame;
};

struct BackboneCurve {
  double length = 1.0;
  double scale = 1.0;
  IntegrationMode mode = IntegrationMode::PaperScript;
  std::vector<BackboneSample> samples;

  std::size_t sample_count() const { return samples.size(); }
  std::vector<Eigen::Vector3d> points() const;
};

struct Tcp {
  Eigen::Vector3d tip;
  Eigen::Vector3d direction;  // unit tangent at the tip
};

BackboneCurve integrate_backbone(const CoefficientSet& coeffs, double length, double scale,
                                 std::size_t sample_count = kDefaultSampleCount,
                                 IntegrationMode mode = IntegrationMode::PaperScript);

/// Tip point and backward-difference tangent of the last two samples.
Tcp tcp(const BackboneCurve& curve);
Tcp tcp(const std::vector<Eigen::Vector3d>& points);

/// Index of division point i out of n on a grid of sample_count samples:
/// round-half-up of i*(sample_count-1)/n.
std::size_t division_index(std::size_t i, std::size_t n, std::size_t sample_count);

std::vector<Eigen::Vector3d> sample_divisions(const BackboneCurve& curve, std::size_t n);
std::vector<Eigen::Vector3d> sample_divisions(const std::vector<Eigen::Vector3d>& points,
                                              std::size_t n);

/// Right-composes `adjustment` onto `frame` (frame * adjustment).
Frame apply_motion_step(const Frame& frame, const Frame& adjustment);

}  // namespace modalid
