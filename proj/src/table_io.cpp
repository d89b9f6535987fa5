#include "noiseeater/table_io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

namespace noiseeater {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_csv(std::ostream& out, const DataTable& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i == 0 ? "" : ",") << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i == 0 ? "" : ",") << format_value(row[i]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const DataTable& table) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json record;
        for (std::size_t i = 0; i < row.size(); ++i) {
            record[table.columns[i]] = row[i];
        }
        records.push_back(std::move(record));
    }
    out << records.dump(2) << '\n';
}

void write_table(const std::string& path, const std::string& format, const DataTable& table) {
    const bool csv = format == "csv";
    if (!csv && format != "json") {
        throw std::invalid_argument("unknown output format '" + format + "'");
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!path.empty()) {
        file.open(path, std::ios::binary);
        if (!file) {
            throw std::runtime_error("cannot open output file '" + path + "'");
        }
        out = &file;
    }
    if (csv) {
        write_csv(*out, table);
    } else {
        write_json(*out, table);
    }
    out->flush();
    if (!*out) {
        throw std::runtime_error("failed writing output file '" + path + "'");
    }
}

} // namespace noiseeater
