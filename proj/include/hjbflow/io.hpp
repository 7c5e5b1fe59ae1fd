#ifndef HJBFLOW_IO_HPP
#define HJBFLOW_IO_HPP

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "hjbflow/grid.hpp"

namespace hjbflow {

using Json = nlohmann::json;

/// %.17g — round-trips doubles exactly and keeps artifacts diffable.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> vals);
};

/// Atomic write (temp file in the same directory + rename), so partial
/// artifacts never appear under the final name.
void write_text_atomic(const std::string& path, const std::string& content);

void write_csv(const std::string& path, const CsvTable& table);
void write_json(const std::string& path, const Json& j);

/// Columns t,x,value — one row per (time node, grid node).
CsvTable path_table(const FieldPath& path, const std::string& value_column);
CsvTable flow_table(const MeasureFlow& flow);

}  // namespace hjbflow

#endif
