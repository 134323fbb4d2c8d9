#pragma once

#include <string>
#include <vector>

namespace clubrank {

// Minimal RFC-4180-ish CSV support: comma-separated, optional double-quoted
// fields with "" escapes, one record per line (no embedded newlines).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each row has header.size() fields
    std::vector<long> row_lines;                 // 1-based source line per row
};

// Splits one CSV line into fields. Throws ParseError on unterminated quotes.
std::vector<std::string> split_csv_line(const std::string& line, long line_no = 0);

// Reads a whole file. The header must match `expected_header` exactly when
// given. Every data row must have the header's field count. Blank lines are
// skipped; a trailing '\r' (CRLF input) is stripped.
CsvTable read_csv(const std::string& path,
                  const std::vector<std::string>& expected_header = {});

// Quotes a field only when it needs it.
std::string csv_escape(const std::string& field);

std::string join_csv_row(const std::vector<std::string>& fields);

}  // namespace clubrank
