#include "gdof/table.hpp"

#include "gdof/error.hpp"

#include <json.hpp>

#include <regex>

namespace gdof {

void Table::add_row(std::vector<std::string> row)
{
    if (row.size() != columns.size()) {
        throw InvalidParameter("table row has " + std::to_string(row.size()) +
                               " cells, header has " + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string csv_escape(const std::string& cell)
{
    if (cell.find_first_of(",\"\r\n") == std::string::npos) {
        return cell;
    }
    std::string out = "\"";
    for (const char c : cell) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(std::ostream& out, const Table& table)
{
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << csv_escape(cells[i]);
        }
        out << '\n';
    };
    line(table.columns);
    for (const auto& row : table.rows) {
        line(row);
    }
}

void write_json(std::ostream& out, const Table& table)
{
    static const std::regex number(R"(-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?)");
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& cell = row[i];
            if (cell.empty()) {
                obj[table.columns[i]] = nullptr;
            } else if (std::regex_match(cell, number)) {
                obj[table.columns[i]] = nlohmann::ordered_json::parse(cell);
            } else {
                obj[table.columns[i]] = cell;
            }
        }
        doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

} // namespace gdof
