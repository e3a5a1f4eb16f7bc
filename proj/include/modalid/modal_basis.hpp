#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modalid {

inline constexpr std::size_t kDefaultTermsPerAxis = 3;

/// Closed interval a single modal coefficient may take.
struct Bounds {
  double lo = -2.0;
  double hi = 2.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Modal curvature weights for the two bending channels. Entry i of each axis
/// multiplies the Chebyshev polynomial of degree i.
struct CoefficientSet {
  std::vector<double> cx = std::vector<double>(kDefaultTermsPerAxis, 0.0);
  std::vector<double> cy = std::vector<double>(kDefaultTermsPerAxis, 0.0);

  std::size_t terms() const { return cx.size(); }

  /// Flattened layout: cx0..cx{k-1}, cy0..cy{k-1}.
  std::vector<double> genome() const;
  static CoefficientSet from_genome(std::span<const double> genome);

  /// Throws EmptyCoefficients / InvalidConfig on mismatched or empty axes.
  void validate() const;
  bool within(const Bounds& b) const;

  friend bool operator==(const CoefficientSet&, const CoefficientSet&) = default;
};

/// T_0(x)..T_maxDegree(x) by the three-term recurrence.
std::vector<double> chebyshev_eval(std::size_t max_degree, double x);

/// Maps each arclength to x = 2s/L - 1 and sums coeffs[i] * T_i(x).
std::vector<double> curvature_distribution(std::span<const double> coeffs,
                                           std::span<const double> s_samples, double length);

}  // namespace modalid
