#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain arrays, closed-form Chebyshev values, textbook loops.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += a[r][j] * b[j][k];
      c[r][k] = acc;
    }
  }
  return c;
}

inline Mat3 rot_x(double t) {
  return Mat3{{{1, 0, 0}, {0, std::cos(t), -std::sin(t)}, {0, std::sin(t), std::cos(t)}}};
}

inline Mat3 rot_y(double t) {
  return Mat3{{{std::cos(t), 0, std::sin(t)}, {0, 1, 0}, {-std::sin(t), 0, std::cos(t)}}};
}

/// T_i(x) = cos(i * acos x) on [-1, 1].
inline double chebyshev_closed(std::size_t i, double x) {
  return std::cos(static_cast<double>(i) * std::acos(x));
}

inline double series(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * chebyshev_closed(i, x);
  return acc;
}

/// Hand-executed reference loop: cumulative T <- T Rx Ry, point = scale * T (0,0,s).
inline std::vector<Vec3> script_points(const std::vector<double>& cx, const std::vector<double>& cy,
                                       double L, double scale, std::size_t count) {
  std::vector<double> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = L * static_cast<double>(i) / static_cast<double>(count - 1);
  Mat3 T{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::vector<Vec3> pts{{0, 0, 0}};
  for (std::size_t i = 1; i < count; ++i) {
    const double ds = s[i] - s[i - 1];
    const double x = 2.0 * s[i] / L - 1.0;
    T = matmul(matmul(T, rot_x(series(cx, x) * ds)), rot_y(series(cy, x) * ds));
    pts.push_back({scale * T[0][2] * s[i], scale * T[1][2] * s[i], scale * T[2][2] * s[i]});
  }
  return pts;
}

inline Vec3 unit_tangent(const std::vector<Vec3>& pts) {
  const auto& a = pts[pts.size() - 2];
  const auto& b = pts.back();
  Vec3 d{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  return {d[0] / n, d[1] / n, d[2] / n};
}

/// O(N^2) domination check per pair, peeled front by front (O(N^3) overall).
inline std::vector<std::vector<std::size_t>> brute_force_fronts(
    const std::vector<std::array<double, 2>>& f) {
  auto dom = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
  };
  std::vector<bool> taken(f.size(), false);
  std::vector<std::vector<std::size_t>> fronts;
  std::size_t remaining = f.size();
  while (remaining > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (taken[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (!taken[j] && j != i && dom(f[j], f[i])) dominated = true;
      }
      if (!dominated) front.push_back(i);
    }
    for (auto i : front) taken[i] = true;
    remaining -= front.size();
    fronts.push_back(front);
  }
  return fronts;
}

}  // namespace oracle
