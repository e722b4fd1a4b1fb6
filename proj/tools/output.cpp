#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "tcsim/version.hpp"

namespace tcsim::cli {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::string config_value_text(const nlohmann::ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void write_csv(const Table& table, const std::string& command, std::ostream& os) {
    os << "# tool=tcsim\n";
    os << "# version=" << kVersion << "\n";
    os << "# command=" << command << "\n";
    for (const auto& [key, value] : table.config.items()) {
        os << "# " << key << "=" << config_value_text(value) << "\n";
    }
    if (table.failure_x) {
        os << "# continuation_failed_at_x=" << format_double(*table.failure_x) << "\n";
    }
    for (const auto& w : table.warnings) {
        os << "# warning=" << w << "\n";
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            if (row[i]) os << format_double(*row[i]);
        }
        os << "\n";
    }
}

void write_json(const Table& table, const std::string& command, std::ostream& os) {
    nlohmann::ordered_json doc;
    doc["tool"] = "tcsim";
    doc["version"] = kVersion;
    doc["command"] = command;
    doc["config"] = table.config;
    if (table.failure_x) {
        doc["continuation_failed_at_x"] = *table.failure_x;
    } else {
        doc["continuation_failed_at_x"] = nullptr;
    }
    doc["warnings"] = table.warnings;
    doc["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (cell) {
                jrow.push_back(*cell);
            } else {
                jrow.push_back(nullptr);
            }
        }
        rows.push_back(std::move(jrow));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << "\n";
}

}  // namespace

void write_table(const Table& table, const std::string& command,
                 const std::string& format, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    if (format == "json") {
        write_json(table, command, os);
    } else {
        write_csv(table, command, os);
    }
    os.flush();
    if (!os) throw std::runtime_error("failed writing output file: " + path);
}

}
