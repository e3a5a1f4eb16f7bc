#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "modalid/backbone.hpp"
#include "modalid/modal_basis.hpp"
#include "modalid/targets.hpp"

namespace modalid {

/// The two minimization objectives: shape deviation over the division points
/// (length^2) and squared distance between unit tip tangents (<= 4).
struct FitnessPair {
  double mse1 = 0.0;
  double mse2 = 0.0;

  friend bool operator==(const FitnessPair&, const FitnessPair&) = default;
};

struct KinematicsParams {
  std::size_t sample_count = kDefaultSampleCount;
  IntegrationMode mode = IntegrationMode::PaperScript;
};

/// (1/n) * sum_{i=0}^{n} |candidate_i - target_i|^2 over the n+1 points.
double mse_shape(const std::vector<Eigen::Vector3d>& candidate,
                 const std::vector<Eigen::Vector3d>& target, std::size_t n);

/// |v - v_hat|^2; both inputs must be unit within 1e-6.
double mse_tcp(const Eigen::Vector3d& candidate, const Eigen::Vector3d& target);

/// Scores already-integrated geometry against the target (uses target.n).
FitnessPair evaluate_points(const std::vector<Eigen::Vector3d>& backbone_points,
                            const TargetConfiguration& target);

/// Integrates `coeffs` with the target's length/scale and scores it.
FitnessPair evaluate(const CoefficientSet& coeffs, const TargetConfiguration& target,
                     const KinematicsParams& params = {});

}  // namespace modalid
