#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace molbench::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by exact header name.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180 subset: comma separated, double-quoted fields with "" escapes,
/// LF or CRLF line endings. A leading UTF-8 BOM is skipped. Blank lines are
/// ignored. Throws DataError on unterminated quotes.
std::vector<std::vector<std::string>> parse(std::string_view text);

/// First record becomes the header.
Table read_table(const std::string& path);
Table parse_table(std::string_view text);

std::string read_file(const std::string& path);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace molbench::csv
