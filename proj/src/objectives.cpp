#include "modalid/objectives.hpp"

#include <cmath>
#include <string>

#include "modalid/error.hpp"

namespace modalid {

namespace {
constexpr double kUnitTol = 1e-6;
}

double mse_shape(const std::vector<Eigen::Vector3d>& candidate,
                 const std::vector<Eigen::Vector3d>& target, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::LengthMismatch, "division count must be at least 1");
  if (candidate.size() != n + 1 || target.size() != n + 1) {
    throw Error(ErrorKind::LengthMismatch,
                "expected " + std::to_string(n + 1) + " points, got " +
                    std::to_string(candidate.size()) + " and " + std::to_string(target.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i <= n; ++i) sum += (candidate[i] - target[i]).squaredNorm();
  return sum / static_cast<double>(n);
}

double mse_tcp(const Eigen::Vector3d& candidate, const Eigen::Vector3d& target) {
  if (std::abs(candidate.norm() - 1.0) > kUnitTol || std::abs(target.norm() - 1.0) > kUnitTol) {
    throw Error(ErrorKind::NonUnitInput, "tcp vectors must be unit length");
  }
  return (candidate - target).squaredNorm();
}

FitnessPair evaluate_points(const std::vector<Eigen::Vector3d>& backbone_points,
                            const TargetConfiguration& target) {
  const auto divisions = sample_divisions(backbone_points, target.n);
  const auto tip = tcp(backbone_points);
  return FitnessPair{mse_shape(divisions, target.division_points, target.n),
                     mse_tcp(tip.direction, target.tcp_vector)};
}

FitnessPair evaluate(const CoefficientSet& coeffs, const TargetConfiguration& target,
                     const KinematicsParams& params) {
  const auto curve =
      integrate_backbone(coeffs, target.length, target.scale, params.sample_count, params.mode);
  return evaluate_points(curve.points(), target);
}

}  // namespace modalid
