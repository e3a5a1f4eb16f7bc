#include "modalid/backbone.hpp"

#include <cmath>
#include <string>

#include "modalid/error.hpp"

namespace modalid {

bool Frame::is_valid(double tol) const {
  if (!rotation.allFinite() || !position.allFinite()) return false;
  const Eigen::Matrix3d gram = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (gram.cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d rotation_x(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d r;
  r << 1.0, 0.0, 0.0,
       0.0, c, -s,
       0.0, s, c;
  return r;
}

Eigen::Matrix3d rotation_y(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix3d r;
  r << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return r;
}

std::string_view to_string(IntegrationMode mode) {
  return mode == IntegrationMode::PaperScript ? "paper_script" : "incremental";
}

IntegrationMode parse_mode(std::string_view text) {
  if (text == "paper_script") return IntegrationMode::PaperScript;
  if (text == "incremental") return IntegrationMode::Incremental;
  throw Error(ErrorKind::InvalidConfig, "unknown integration mode '" + std::string(text) + "'");
}

std::vector<Eigen::Vector3d> BackboneCurve::points() const {
  std::vector<Eigen::Vector3d> out;
  out.reserve(samples.size());
  for (const auto& smp : samples) out.push_back(smp.point);
  return out;
}

BackboneCurve integrate_backbone(const CoefficientSet& coeffs, double length, double scale,
                                 std::size_t sample_count, IntegrationMode mode) {
  coeffs.validate();
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::InvalidLength, "length must be positive and finite");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::InvalidScale, "scale must be positive and finite");
  }
  if (sample_count < 2) throw Error(ErrorKind::TooFewSamples, "need at least 2 samples");

  // s_i = i / (count-1) * L, evaluated in that order.
  std::vector<double> s(sample_count);
  const double denom = static_cast<double>(sample_count - 1);
  for (std::size_t i = 0; i < sample_count; ++i) s[i] = static_cast<double>(i) / denom * length;

  const auto ux = curvature_distribution(coeffs.cx, s, length);
  const auto uy = curvature_distribution(coeffs.cy, s, length);

  BackboneCurve curve;
  curve.length = length;
  curve.scale = scale;
  curve.mode = mode;
  curve.samples.reserve(sample_count);
  curve.samples.push_back(BackboneSample{0.0, Eigen::Vector3d::Zero(), Frame::identity()});

  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  for (std::size_t i = 1; i < sample_count; ++i) {
    const double ds = s[i] - s[i - 1];
    const Eigen::Matrix3d prev = rot;
    // Order matters: T <- T * Rx * Ry.
    rot = (rot * rotation_x(ux[i] * ds)).eval();
    rot = (rot * rotation_y(uy[i] * ds)).eval();

    if (mode == IntegrationMode::PaperScript) {
      Eigen::Vector3d p = rot * Eigen::Vector3d(0.0, 0.0, s[i]);
      pos = Eigen::Vector3d(p.x() * scale, p.y() * scale, p.z() * scale);
    } else {
      pos = pos + prev * Eigen::Vector3d(0.0, 0.0, ds * scale);
    }
    Frame f;
    f.rotation = rot;
    f.position = pos;
    curve.samples.push_back(BackboneSample{s[i], pos, f});
  }
  return curve;
}

Tcp tcp(const std::vector<Eigen::Vector3d>& points) {
  if (points.size() < 2) throw Error(ErrorKind::TooFewSamples, "tcp needs two points");
  const Eigen::Vector3d& last = points.back();
  const Eigen::Vector3d d = last - points[points.size() - 2];
  const double norm = d.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::DegenerateTip, "last two samples coincide");
  return Tcp{last, d / norm};
}

Tcp tcp(const BackboneCurve& curve) { return tcp(curve.points()); }

std::size_t division_index(std::size_t i, std::size_t n, std::size_t sample_count) {
  // Integer round-half-up of i*(count-1)/n.
  const std::size_t num = i * (sample_count - 1);
  return (2 * num + n) / (2 * n);
}

std::vector<Eigen::Vector3d> sample_divisions(const std::vector<Eigen::Vector3d>& points,
                                              std::size_t n) {
  if (n < 1) throw Error(ErrorKind::DivisionTooFine, "division count must be at least 1");
  if (points.size() < 2 || n > points.size() - 1) {
    throw Error(ErrorKind::DivisionTooFine, "division count " + std::to_string(n) +
                                                " exceeds sample intervals " +
                                                std::to_string(points.size() - 1));
  }
  std::vector<Eigen::Vector3d> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(points[division_index(i, n, points.size())]);
  return out;
}

std::vector<Eigen::Vector3d> sample_divisions(const BackboneCurve& curve, std::size_t n) {
  return sample_divisions(curve.points(), n);
}

Frame apply_motion_step(const Frame& frame, const Frame& adjustment) {
  if (!frame.is_valid() || !adjustment.is_valid()) {
    throw Error(ErrorKind::NonOrthonormalInput, "frame rotation is not in SO(3)");
  }
  Frame out;
  out.rotation = frame.rotation * adjustment.rotation;
  out.position = frame.position + frame.rotation * adjustment.position;
  return out;
}

}  // namespace modalid
