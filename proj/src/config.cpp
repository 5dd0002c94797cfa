#include "skintone/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "skintone/csv.hpp"
#include "skintone/error.hpp"

namespace skintone {

namespace {

Interval parse_interval(std::string_view text, std::string_view key) {
  const auto v = parse_double_list(text, key);
  if (v.size() != 2) throw Error(Errc::Parse, std::string(key) + ": expected lo,hi");
  return {v[0], v[1]};
}

int parse_int(std::string_view text, std::string_view key) {
  return static_cast<int>(parse_integer(text, key));
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw Error(Errc::Parse, std::string(what) + ": not a number: '" + std::string(text) + "'");
  return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw Error(Errc::Parse, std::string(what) + ": not an integer: '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part, what));
  return out;
}

std::vector<KeyValue> parse_key_values(std::string_view text, const std::string& source) {
  std::vector<KeyValue> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::Parse, source + ":" + std::to_string(line_no) + ": expected key=value");
    out.push_back({std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1))), line_no});
  }
  return out;
}

std::vector<KeyValue> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_key_values(buffer.str(), path.string());
}

void apply_setting(EstimatorConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "thresholds") {
    const auto v = parse_double_list(value, key);
    if (v.size() != 5) throw Error(Errc::Parse, "thresholds: expected five values");
    cfg.thresholds = SkinTypeThresholds({v[0], v[1], v[2], v[3], v[4]});
  } else if (key == "side") {
    cfg.side = parse_int(value, key);
  } else if (key == "patch_size") {
    cfg.patch_size = parse_int(value, key);
  } else if (key == "min_patch_usable") {
    cfg.min_patch_usable = parse_double(value, key);
  } else if (key == "gate.hue") {
    cfg.gates.hue = parse_interval(value, key);
  } else if (key == "gate.saturation") {
    cfg.gates.saturation = parse_interval(value, key);
  } else if (key == "gate.value") {
    cfg.gates.value = parse_interval(value, key);
  } else if (key == "gate.y") {
    cfg.gates.y = parse_interval(value, key);
  } else if (key == "gate.cr") {
    cfg.gates.cr = parse_interval(value, key);
  } else if (key == "gate.cb") {
    cfg.gates.cb = parse_interval(value, key);
  } else if (key == "blackhat_kernel") {
    cfg.blackhat_kernel = parse_int(value, key);
  } else if (key == "blackhat_threshold") {
    cfg.blackhat_threshold = parse_int(value, key);
  } else if (key == "ght.nu") {
    cfg.ght.nu = parse_double(value, key);
  } else if (key == "ght.tau") {
    cfg.ght.tau = parse_double(value, key);
  } else if (key == "ght.kappa") {
    cfg.ght.kappa = parse_double(value, key);
  } else if (key == "ght.omega") {
    cfg.ght.omega = parse_double(value, key);
  } else {
    throw Error(Errc::Parse, "unknown config key '" + std::string(key) + "'");
  }
}

EstimatorConfig load_estimator_config(const std::filesystem::path& path, EstimatorConfig base) {
  for (const auto& kv : read_key_values(path)) {
    try {
      apply_setting(base, kv.key, kv.value);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(kv.line) + ": " + e.detail());
    }
  }
  base.validate();
  return base;
}

std::string describe(const EstimatorConfig& cfg) {
  std::ostringstream out;
  auto interval = [](const Interval& iv) { return format_number(iv.lo) + "," + format_number(iv.hi); };
  out << "thresholds=";
  for (std::size_t i = 0; i < 5; ++i) out << (i ? "," : "") << format_number(cfg.thresholds[i]);
  out << "\nside=" << cfg.side << "\npatch_size=" << cfg.patch_size
      << "\nmin_patch_usable=" << format_number(cfg.min_patch_usable)
      << "\ngate.hue=" << interval(cfg.gates.hue) << "\ngate.saturation=" << interval(cfg.gates.saturation)
      << "\ngate.value=" << interval(cfg.gates.value) << "\ngate.y=" << interval(cfg.gates.y)
      << "\ngate.cr=" << interval(cfg.gates.cr) << "\ngate.cb=" << interval(cfg.gates.cb)
      << "\nblackhat_kernel=" << cfg.blackhat_kernel << "\nblackhat_threshold=" << cfg.blackhat_threshold
      << "\nght.nu=" << format_number(cfg.ght.nu) << "\nght.tau=" << format_number(cfg.ght.tau)
      << "\nght.kappa=" << format_number(cfg.ght.kappa) << "\nght.omega=" << format_number(cfg.ght.omega)
      << '\n';
  return out.str();
}

std::uint64_t config_hash(const EstimatorConfig& cfg) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : describe(cfg)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace skintone
