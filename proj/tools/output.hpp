#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tcsim::cli {

// One finished run: resolved configuration plus a rectangular table, written
// as CSV (comment-prefixed metadata block) or as a single JSON object.
struct Table {
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::string> warnings;
    std::optional<double> failure_x;
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
};

std::string format_double(double v);

void write_table(const Table& table, const std::string& command,
                 const std::string& format, const std::string& path);

}
