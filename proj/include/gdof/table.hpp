#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gdof {

// Rows of preformatted string cells under a fixed header. An empty cell
// means "no value" (empty CSV field, JSON null).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

/// RFC 4180 style: comma separated, CRLF-free "\n" line ends, fields quoted
/// when they contain a comma, quote or newline.
void write_csv(std::ostream& out, const Table& table);

/// Array of flat objects, keys in column order. Cells that read as JSON
/// numbers are emitted as numbers, empty cells as null, the rest as strings.
void write_json(std::ostream& out, const Table& table);

std::string csv_escape(const std::string& cell);

} // namespace gdof
