#include "skintone/csv.hpp"

#include <fstream>
#include <sstream>

#include "skintone/error.hpp"

namespace skintone {

std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

CsvTable CsvTable::parse(std::string_view text, std::string source_name) {
  CsvTable table;
  table.source_ = std::move(source_name);
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool have_header = false;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto fields = split(line, ',');
    if (!have_header) {
      table.header_ = std::move(fields);
      table.header_line_ = line_no;
      have_header = true;
    } else {
      if (fields.size() != table.header_.size())
        throw Error(Errc::Parse, table.source_ + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header_.size()) + " fields, got " +
                                     std::to_string(fields.size()));
      table.rows_.push_back(std::move(fields));
      table.lines_.push_back(line_no);
    }
    if (end == text.size()) break;
  }
  if (!have_header) throw Error(Errc::Parse, table.source_ + ": missing header line");
  return table;
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto i = find_column(name)) return *i;
  throw Error(Errc::Parse, source_ + ":" + std::to_string(header_line_) +
                               ": missing column '" + std::string(name) + "'");
}

void CsvTable::fail(std::size_t i, const std::string& what) const {
  throw Error(Errc::Parse, source_ + ":" + std::to_string(lines_.at(i)) + ": " + what);
}

}  // namespace skintone
