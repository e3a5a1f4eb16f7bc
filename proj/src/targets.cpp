#include "modalid/targets.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "modalid/error.hpp"
#include "modalid/rng.hpp"
#include "modalid/text_io.hpp"

namespace modalid {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;
constexpr double kUnitTol = 1e-9;
constexpr double kRenormalizeTol = 1e-6;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;  // "noise"

json vec_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec_from_json(const json& j, std::string_view what) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorKind::SchemaError, std::string(what) + " must be an [x,y,z] array");
  }
  Eigen::Vector3d v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw Error(ErrorKind::SchemaError, std::string(what) + " is not numeric");
    v[k] = j[k].get<double>();
  }
  return v;
}

std::vector<double> reals_from_json(const json& j, std::string_view what) {
  if (!j.is_array()) throw Error(ErrorKind::SchemaError, std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) throw Error(ErrorKind::SchemaError, std::string(what) + " is not numeric");
    out.push_back(e.get<double>());
  }
  return out;
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorKind::SchemaError, std::string("missing field '") + key + "'");
  return *it;
}

// Applies the tcp tolerance rule shared by every import path.
void check_tcp_norm(TargetConfiguration& t, std::vector<std::string>* warnings) {
  const double norm = t.tcp_vector.norm();
  const double dev = std::abs(norm - 1.0);
  if (!std::isfinite(norm) || dev > kRenormalizeTol) {
    throw Error(ErrorKind::SchemaError,
                "tcp_vector norm " + format_double(norm) + " is not unit within 1e-6");
  }
  if (dev > kUnitTol) {
    t.tcp_vector /= norm;
    if (warnings) {
      warnings->push_back("tcp_vector norm " + format_double(norm) + " renormalized to 1");
    }
  }
}

}  // namespace

std::string_view to_string(TargetSource source) {
  return source == TargetSource::Synthetic ? "synthetic" : "imported";
}

void TargetConfiguration::validate() const {
  if (n < 1) throw Error(ErrorKind::SchemaError, "n must be at least 1");
  if (!(length > 0.0)) throw Error(ErrorKind::SchemaError, "L must be positive");
  if (!(scale > 0.0)) throw Error(ErrorKind::SchemaError, "scale must be positive");
  if (division_points.size() != n + 1) {
    throw Error(ErrorKind::SchemaError, "expected " + std::to_string(n + 1) +
                                            " division points for n=" + std::to_string(n) +
                                            ", got " + std::to_string(division_points.size()));
  }
  for (const auto& p : division_points) {
    if (!p.allFinite()) throw Error(ErrorKind::SchemaError, "non-finite division point");
  }
  if (std::abs(tcp_vector.norm() - 1.0) > kUnitTol) {
    throw Error(ErrorKind::SchemaError, "tcp_vector is not a unit vector");
  }
  if (noise_sigma && !(*noise_sigma >= 0.0)) {
    throw Error(ErrorKind::SchemaError, "noise_sigma must be non-negative");
  }
}

TargetConfiguration synth_target(const CoefficientSet& coeffs, double length, double scale,
                                 std::size_t n, double noise_sigma, std::uint64_t seed,
                                 std::size_t sample_count) {
  if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::InvalidConfig, "noise sigma must be >= 0");
  const auto curve = integrate_backbone(coeffs, length, scale, sample_count, IntegrationMode::PaperScript);

  TargetConfiguration t;
  t.n = n;
  t.length = length;
  t.scale = scale;
  t.division_points = sample_divisions(curve, n);
  t.tcp_vector = tcp(curve).direction;
  t.source = TargetSource::Synthetic;
  t.ground_truth = coeffs;
  t.noise_sigma = noise_sigma;
  t.seed = seed;

  if (noise_sigma > 0.0) {
    const double sd = noise_sigma * length * scale;
    Rng rng(seed, {kNoiseStream});
    for (auto& p : t.division_points) {
      for (int k = 0; k < 3; ++k) p[k] += sd * rng.normal();
    }
  }
  return t;
}

std::string target_to_json(const TargetConfiguration& t) {
  json doc;
  doc["version"] = kFormatVersion;
  doc["n"] = t.n;
  doc["L"] = t.length;
  doc["scale"] = t.scale;
  json pts = json::array();
  for (const auto& p : t.division_points) pts.push_back(vec_to_json(p));
  doc["division_points"] = pts;
  doc["tcp_vector"] = vec_to_json(t.tcp_vector);
  doc["source"] = std::string(to_string(t.source));
  if (t.ground_truth) doc["ground_truth"] = {{"cx", t.ground_truth->cx}, {"cy", t.ground_truth->cy}};
  if (t.noise_sigma) doc["noise_sigma"] = *t.noise_sigma;
  if (t.seed) doc["seed"] = *t.seed;
  return doc.dump(2) + "\n";
}

void save_target(const TargetConfiguration& target, const std::filesystem::path& path) {
  target.validate();
  write_text_file(path, target_to_json(target));
}

TargetConfiguration parse_target_json(std::string_view text, std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "target document must be an object");

  try {
    const auto& version = require(doc, "version");
    if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
      throw Error(ErrorKind::SchemaError, "unsupported target version");
    }
    TargetConfiguration t;
    const auto& n = require(doc, "n");
    if (!n.is_number_integer() || n.get<long long>() < 1) {
      throw Error(ErrorKind::SchemaError, "n must be a positive integer");
    }
    t.n = n.get<std::size_t>();
    t.length = require(doc, "L").get<double>();
    t.scale = require(doc, "scale").get<double>();

    const auto& pts = require(doc, "division_points");
    if (!pts.is_array()) throw Error(ErrorKind::SchemaError, "division_points must be an array");
    for (const auto& p : pts) t.division_points.push_back(vec_from_json(p, "division point"));
    t.tcp_vector = vec_from_json(require(doc, "tcp_vector"), "tcp_vector");

    if (auto it = doc.find("source"); it != doc.end()) {
      const auto s = it->get<std::string>();
      if (s == "synthetic") {
        t.source = TargetSource::Synthetic;
      } else if (s == "imported") {
        t.source = TargetSource::Imported;
      } else {
        throw Error(ErrorKind::SchemaError, "unknown source '" + s + "'");
      }
    } else {
      t.source = TargetSource::Imported;
    }
    if (auto it = doc.find("ground_truth"); it != doc.end() && !it->is_null()) {
      CoefficientSet c;
      c.cx = reals_from_json(require(*it, "cx"), "ground_truth.cx");
      c.cy = reals_from_json(require(*it, "cy"), "ground_truth.cy");
      try {
        c.validate();
      } catch (const Error& e) {
        throw Error(ErrorKind::SchemaError, e.what());
      }
      t.ground_truth = c;
    }
    if (auto it = doc.find("noise_sigma"); it != doc.end() && !it->is_null()) {
      t.noise_sigma = it->get<double>();
    }
    if (auto it = doc.find("seed"); it != doc.end() && !it->is_null()) {
      t.seed = it->get<std::uint64_t>();
    }

    check_tcp_norm(t, warnings);
    t.validate();
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
}

TargetConfiguration load_target(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return parse_target_json(read_text_file(path), warnings);
}

TargetConfiguration import_csv_target(const std::filesystem::path& path, std::size_t n,
                                      double length, double scale,
                                      std::vector<std::string>* warnings) {
  std::istringstream in(read_text_file(path));
  std::vector<Eigen::Vector3d> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    Eigen::Vector3d v;
    std::istringstream fields(line);
    std::string cell;
    int k = 0;
    bool numeric = true;
    while (std::getline(fields, cell, ',')) {
      if (k >= 3) {
        numeric = false;
        break;
      }
      char* end = nullptr;
      v[k] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        numeric = false;
        break;
      }
      for (; *end; ++end) {
        if (*end != ' ' && *end != '\t') numeric = false;
      }
      ++k;
    }
    if (!numeric || k != 3) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected x,y,z");
    }
    rows.push_back(v);
  }

  if (rows.size() != n + 2) {
    throw Error(ErrorKind::SchemaError, "expected " + std::to_string(n + 1) +
                                            " point rows plus one tcp row for n=" +
                                            std::to_string(n) + ", got " +
                                            std::to_string(rows.size()) + " rows");
  }
  TargetConfiguration t;
  t.n = n;
  t.length = length;
  t.scale = scale;
  t.source = TargetSource::Imported;
  t.division_points.assign(rows.begin(), rows.end() - 1);
  t.tcp_vector = rows.back();
  check_tcp_norm(t, warnings);
  t.validate();
  return t;
}

}  // namespace modalid
