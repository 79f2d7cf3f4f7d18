#pragma once

// Small text helpers shared by the CSV readers and range parsing.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frp::detail {

std::string_view trim(std::string_view s);

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

struct CsvLine {
    std::size_t row = 0;  ///< 1-based data row (header is row 0)
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvLine> rows;
};

/// Reads a whole CSV stream. Blank lines are skipped; CR before LF is dropped.
CsvTable read_csv(std::istream& in);

/// Whole-string decimal parse (surrounding whitespace allowed).
std::optional<double> parse_number(std::string_view text);

}  // namespace frp::detail
