#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "skintone/estimators.hpp"

namespace skintone {

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// `key = value` lines; blank lines and lines starting with '#' are ignored.
std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& source);
std::vector<KeyValue> read_key_values(const std::filesystem::path& path);

/// Recognised keys:
///   thresholds          five descending degrees, e.g. 55,41,28,19,10
///   side, patch_size, min_patch_usable
///   gate.hue, gate.saturation, gate.value, gate.y, gate.cr, gate.cb   lo,hi
///   blackhat_kernel, blackhat_threshold
///   ght.nu, ght.tau, ght.kappa, ght.omega
/// Throws Error(Parse) for unknown keys or malformed values.
void apply_setting(EstimatorConfig& cfg, std::string_view key, std::string_view value);

/// Applies every entry of a config file on top of `base` and validates.
EstimatorConfig load_estimator_config(const std::filesystem::path& path, EstimatorConfig base = {});

/// Canonical `key=value` listing covering every field, in a fixed order.
std::string describe(const EstimatorConfig& cfg);

/// FNV-1a 64 of describe(cfg).
std::uint64_t config_hash(const EstimatorConfig& cfg);

std::string format_number(double v);
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);
std::vector<double> parse_double_list(std::string_view text, std::string_view what);

}  // namespace skintone
