#include "modalid/modal_basis.hpp"

#include <algorithm>

#include "modalid/error.hpp"

namespace modalid {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCoefficients: return "EmptyCoefficients";
    case ErrorKind::InvalidLength: return "InvalidLength";
    case ErrorKind::InvalidScale: return "InvalidScale";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::DegenerateTip: return "DegenerateTip";
    case ErrorKind::DivisionTooFine: return "DivisionTooFine";
    case ErrorKind::NonOrthonormalInput: return "NonOrthonormalInput";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonUnitInput: return "NonUnitInput";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnevaluatedIndividual: return "UnevaluatedIndividual";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

std::vector<double> CoefficientSet::genome() const {
  std::vector<double> g(cx);
  g.insert(g.end(), cy.begin(), cy.end());
  return g;
}

CoefficientSet CoefficientSet::from_genome(std::span<const double> genome) {
  if (genome.empty() || genome.size() % 2 != 0) {
    throw Error(ErrorKind::InvalidConfig, "genome length must be even and non-zero");
  }
  const auto half = genome.size() / 2;
  CoefficientSet c;
  c.cx.assign(genome.begin(), genome.begin() + static_cast<std::ptrdiff_t>(half));
  c.cy.assign(genome.begin() + static_cast<std::ptrdiff_t>(half), genome.end());
  return c;
}

void CoefficientSet::validate() const {
  if (cx.empty() || cy.empty()) {
    throw Error(ErrorKind::EmptyCoefficients, "both axes need at least one coefficient");
  }
  if (cx.size() != cy.size()) {
    throw Error(ErrorKind::InvalidConfig, "cx and cy must have the same number of terms");
  }
}

bool CoefficientSet::within(const Bounds& b) const {
  auto in = [&](double v) { return b.contains(v); };
  return std::all_of(cx.begin(), cx.end(), in) && std::all_of(cy.begin(), cy.end(), in);
}

std::vector<double> chebyshev_eval(std::size_t max_degree, double x) {
  std::vector<double> t(max_degree + 1, 0.0);
  t[0] = 1.0;
  if (max_degree > 0) t[1] = x;
  for (std::size_t i = 2; i <= max_degree; ++i) {
    t[i] = 2.0 * x * t[i - 1] - t[i - 2];
  }
  return t;
}

std::vector<double> curvature_distribution(std::span<const double> coeffs,
                                           std::span<const double> s_samples, double length) {
  if (coeffs.empty()) throw Error(ErrorKind::EmptyCoefficients, "no coefficients given");
  if (!(length > 0.0)) throw Error(ErrorKind::InvalidLength, "length must be positive");

  std::vector<double> u;
  u.reserve(s_samples.size());
  for (double s : s_samples) {
    const double x = 2.0 * s / length - 1.0;
    const auto t = chebyshev_eval(coeffs.size() - 1, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i] * t[i];
    u.push_back(acc);
  }
  return u;
}

}  // namespace modalid
