#pragma once

#include "noiseeater/figures.hpp"

#include <ostream>
#include <string>

namespace noiseeater {

// One value, decimal point, 9 significant digits ("%.9g"). The CSV dialect is
// pinned so golden files regenerate byte-identically.
std::string format_value(double v);

// Comma-separated, header row, newline-terminated rows.
void write_csv(std::ostream& out, const DataTable& table);

// JSON mirror: array of objects with the column names as keys.
void write_json(std::ostream& out, const DataTable& table);

// Dispatches on format ("csv" or "json") and writes to `path`, or to stdout
// when path is empty. Throws std::runtime_error if the file cannot be opened.
void write_table(const std::string& path, const std::string& format, const DataTable& table);

} // namespace noiseeater
