#include "modalid/config_io.hpp"

#include <set>

#include "json.hpp"
#include "modalid/error.hpp"
#include "modalid/text_io.hpp"

namespace modalid {

using nlohmann::json;

std::string config_to_json(const EAConfig& c) {
  json bounds = json::array();
  for (const auto& b : c.bounds) bounds.push_back(json::array({b.lo, b.hi}));
  json doc = {
      {"generation_size", c.generation_size},
      {"generation_count", c.generation_count},
      {"crossover_prob", c.crossover_prob},
      {"mutation_prob", c.mutation_prob},
      {"bounds", bounds},
      {"sbx_eta", c.sbx_eta},
      {"mutation_eta", c.mutation_eta},
      {"seed", c.seed},
      {"sample_count", c.sample_count},
      {"n_divisions", c.n_divisions},
  };
  return doc.dump(2) + "\n";
}

namespace {

Bounds bounds_from_json(const json& pair) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw Error(ErrorKind::InvalidConfig, "bounds entries must be [lo, hi]");
  }
  return Bounds{pair[0].get<double>(), pair[1].get<double>()};
}

}  // namespace

EAConfig config_from_json(std::string_view text, const EAConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");

  static const std::set<std::string> known = {
      "generation_size", "generation_count", "crossover_prob", "mutation_prob", "bounds",
      "sbx_eta",         "mutation_eta",     "seed",           "sample_count",  "n_divisions"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw Error(ErrorKind::InvalidConfig, "unknown config key '" + key + "'");
  }

  EAConfig c = base;
  try {
    if (doc.contains("generation_size")) c.generation_size = doc["generation_size"].get<std::size_t>();
    if (doc.contains("generation_count")) c.generation_count = doc["generation_count"].get<std::size_t>();
    if (doc.contains("crossover_prob")) c.crossover_prob = doc["crossover_prob"].get<double>();
    if (doc.contains("mutation_prob")) c.mutation_prob = doc["mutation_prob"].get<double>();
    if (doc.contains("sbx_eta")) c.sbx_eta = doc["sbx_eta"].get<double>();
    if (doc.contains("mutation_eta")) c.mutation_eta = doc["mutation_eta"].get<double>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("sample_count")) c.sample_count = doc["sample_count"].get<std::size_t>();
    if (doc.contains("n_divisions")) c.n_divisions = doc["n_divisions"].get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, e.what());
  }
  if (doc.contains("bounds")) {
    const auto& b = doc["bounds"];
    if (!b.is_array() || b.empty()) throw Error(ErrorKind::InvalidConfig, "bounds must be an array");
    if (b[0].is_number()) {
      const Bounds all = bounds_from_json(b);
      c.bounds.assign(c.bounds.size(), all);
    } else {
      c.bounds.clear();
      for (const auto& pair : b) c.bounds.push_back(bounds_from_json(pair));
    }
  }
  c.validate();
  return c;
}

EAConfig load_config(const std::filesystem::path& path, const EAConfig& base) {
  return config_from_json(read_text_file(path), base);
}

}  // namespace modalid
