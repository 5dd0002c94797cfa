#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "skintone/estimators.hpp"

namespace skintone {

inline constexpr std::string_view kTonesHeader =
    "image_id,method,variant,ita_deg,skin_type,status,pixel_count";

/// Writes the tones CSV: ita_deg with three decimals (empty when the row has
/// no value), skin_type empty unless status is Ok.
void write_tones_csv(std::ostream& out, std::span<const ItaResult> results);
void write_tones_csv(const std::filesystem::path& path, std::span<const ItaResult> results);

/// Throws Error(Io) when the file cannot be opened and Error(Parse) naming
/// file and line for malformed rows.
std::vector<ItaResult> read_tones_csv(const std::filesystem::path& path);

}  // namespace skintone
