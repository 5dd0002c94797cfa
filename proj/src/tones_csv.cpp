#include "skintone/tones_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "skintone/csv.hpp"
#include "skintone/error.hpp"

namespace skintone {

namespace {

std::string format_degrees(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // Avoid "-0.000" so byte-identical output does not depend on the sign of zero.
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

void write_tones_csv(std::ostream& out, std::span<const ItaResult> results) {
  out << kTonesHeader << '\n';
  for (const auto& r : results) {
    out << r.image_id << ',' << to_string(r.method) << ',' << to_string(r.variant) << ',';
    if (r.has_value()) out << format_degrees(r.ita_deg);
    out << ',';
    if (r.ok() && r.skin_type) out << r.skin_type->value();
    out << ',' << to_string(r.status) << ',' << r.pixel_count << '\n';
  }
}

void write_tones_csv(const std::filesystem::path& path, std::span<const ItaResult> results) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  write_tones_csv(out, results);
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

std::vector<ItaResult> read_tones_csv(const std::filesystem::path& path) {
  const CsvTable table = CsvTable::read(path);
  const auto c_id = table.column("image_id");
  const auto c_method = table.column("method");
  const auto c_variant = table.column("variant");
  const auto c_ita = table.column("ita_deg");
  const auto c_type = table.column("skin_type");
  const auto c_status = table.column("status");
  const auto c_count = table.column("pixel_count");

  std::vector<ItaResult> results;
  results.reserve(table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const auto& row = table.row(i);
    ItaResult r;
    r.image_id = row[c_id];
    if (r.image_id.empty()) table.fail(i, "empty image_id");

    const auto method = parse_method(row[c_method]);
    if (!method) table.fail(i, "unknown method '" + row[c_method] + "'");
    r.method = *method;
    const auto variant = parse_variant(row[c_variant]);
    if (!variant) table.fail(i, "unknown variant '" + row[c_variant] + "'");
    r.variant = *variant;
    const auto status = parse_status(row[c_status]);
    if (!status) table.fail(i, "unknown status '" + row[c_status] + "'");
    r.status = *status;

    if (!row[c_ita].empty()) {
      if (!parse_number(row[c_ita], r.ita_deg)) table.fail(i, "invalid ita_deg '" + row[c_ita] + "'");
    } else if (r.has_value()) {
      table.fail(i, "missing ita_deg for status " + row[c_status]);
    }
    if (!row[c_type].empty()) {
      int type = 0;
      if (!parse_number(row[c_type], type) || type < 1 || type > kSkinTypeCount)
        table.fail(i, "invalid skin_type '" + row[c_type] + "'");
      r.skin_type = SkinType(type);
    } else if (r.ok()) {
      table.fail(i, "missing skin_type for status Ok");
    }
    if (!parse_number(row[c_count], r.pixel_count))
      table.fail(i, "invalid pixel_count '" + row[c_count] + "'");
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace skintone
