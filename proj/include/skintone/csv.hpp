#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skintone {

/// Minimal reader for the toolkit's own comma-separated files (no quoting).
/// Lines starting with '#' are metadata and skipped; the first remaining line
/// is the header. Parse failures name the file and 1-based line number.
class CsvTable {
 public:
  static CsvTable read(const std::filesystem::path& path);
  static CsvTable parse(std::string_view text, std::string source_name);

  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }
  std::size_t line_of(std::size_t i) const { return lines_[i]; }
  const std::string& source() const noexcept { return source_; }

  /// Column index by name; throws Error(Parse) when absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;

  /// Throws Error(Parse) naming source and line of row i.
  [[noreturn]] void fail(std::size_t i, const std::string& what) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
  std::size_t header_line_ = 1;
};

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s) noexcept;

}  // namespace skintone
