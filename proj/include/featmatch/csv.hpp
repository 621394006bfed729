#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace featmatch::csv {

/// Parsed delimited text: one header row plus zero or more data rows,
/// every row as wide as the header.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or nullopt when absent.
    [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;
};

/// Parses RFC-4180 CSV (quoted fields, "" escapes, LF or CRLF line ends).
/// Fully empty lines are skipped. Throws UnreadableSource on unbalanced
/// quotes or rows whose cell count differs from the header.
Table parse(std::string_view text);

/// Reads and parses a CSV file. Throws UnreadableSource on I/O failure.
Table parse_file(const std::filesystem::path& path);

/// Quotes a field if it contains a comma, quote, or newline.
std::string escape(std::string_view field);

/// Appends one CSV row (escaped, comma-joined, LF-terminated) to out.
void append_row(std::string& out, const std::vector<std::string>& cells);

} // namespace featmatch::csv
