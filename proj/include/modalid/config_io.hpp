#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "modalid/evolution.hpp"

namespace modalid {

/// JSON document with every EAConfig field; bounds are written per gene.
std::string config_to_json(const EAConfig& config);

/// Overlays the fields present in `text` onto `base`. `bounds` may be a single
/// [lo, hi] pair (applied to every gene of `base`) or one pair per gene.
/// Unknown keys are rejected.
EAConfig config_from_json(std::string_view text, const EAConfig& base = {});
EAConfig load_config(const std::filesystem::path& path, const EAConfig& base = {});

}  // namespace modalid
