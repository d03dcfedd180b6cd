#include "mmnorm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "mmnorm/errors.hpp"

namespace mmnorm {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

namespace {

void check_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") != std::string::npos)
        throw std::domain_error("csv: cell contains a delimiter: " + cell);
}

}  // namespace

std::string render_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        check_cell(table.header[i]);
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const std::vector<std::string>& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::domain_error("csv: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            check_cell(row[i]);
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const CsvTable& table, const std::string& path) {
    const std::string body = render_csv(table);
    if (path.empty() || path == "-") {
        std::cout << body << std::flush;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot open for writing: " + path);
    file << body;
    file.flush();
    if (!file) throw io_error("write failed: " + path);
}

}  // namespace mmnorm
