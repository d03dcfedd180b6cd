#pragma once

#include <string>
#include <vector>

namespace mmnorm {

/// Pre-rendered CSV content: cells are already strings so numeric formatting
/// happens exactly once, in one place.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Canonical number rendering: 9 significant digits, shortest form.
std::string format_number(double value);

/// Serialize with a trailing newline. Every row must match the header width;
/// cells must not contain commas, quotes, or newlines.
std::string render_csv(const CsvTable& table);

/// Write to `path`, or to stdout when `path` is empty or "-".
void emit_csv(const CsvTable& table, const std::string& path);

}  // namespace mmnorm
