#include "hjbflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hjbflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvTable::add_row(std::initializer_list<double> vals) {
    if (vals.size() != columns.size())
        throw std::invalid_argument("CsvTable: row width does not match header");
    rows.emplace_back(vals);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::string body;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) body += ',';
        body += table.columns[i];
    }
    body += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) body += ',';
            body += format_double(row[i]);
        }
        body += '\n';
    }
    write_text_atomic(path, body);
}

void write_json(const std::string& path, const Json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

CsvTable path_table(const FieldPath& path, const std::string& value_column) {
    CsvTable t;
    t.columns = {"t", "x", value_column};
    const Grid1D& g = path.grid();
    for (int m = 0; m < path.num_nodes(); ++m)
        for (int i = 0; i < g.n; ++i)
            t.add_row({path.times[m], g.x(i), path.fields[m].values[i]});
    return t;
}

CsvTable flow_table(const MeasureFlow& flow) {
    CsvTable t;
    t.columns = {"t", "x", "mu"};
    const Grid1D& g = flow.grid();
    for (int m = 0; m < flow.num_nodes(); ++m)
        for (int i = 0; i < g.n; ++i)
            t.add_row({flow.times[m], g.x(i), flow.densities[m].values[i]});
    return t;
}

}  // namespace hjbflow
