#include "clubrank/csv.hpp"

#include <fstream>
#include <sstream>

#include "clubrank/errors.hpp"

namespace clubrank {

std::vector<std::string> split_csv_line(const std::string& line, long line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"' && current.empty()) {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", line_no);
    fields.push_back(std::move(current));
    return fields;
}

CsvTable read_csv(const std::string& path,
                  const std::vector<std::string>& expected_header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    CsvTable table;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line, line_no);
        if (table.header.empty()) {
            table.header = std::move(fields);
            if (!expected_header.empty() && table.header != expected_header) {
                std::ostringstream msg;
                msg << "header mismatch in '" << path << "': expected ";
                for (std::size_t i = 0; i < expected_header.size(); ++i) {
                    msg << (i ? "," : "") << expected_header[i];
                }
                throw ParseError(msg.str(), line_no);
            }
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ParseError("expected " + std::to_string(table.header.size()) +
                                 " fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        table.rows.push_back(std::move(fields));
        table.row_lines.push_back(line_no);
    }
    if (table.header.empty()) throw ParseError("'" + path + "' has no header row");
    return table;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string join_csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out;
}

}  // namespace clubrank
