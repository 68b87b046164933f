// report.hpp: scenario results and their JSON / CSV serialization.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace etls {

using Scalar = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

struct Report {
    std::string scenario;
    std::vector<std::pair<std::string, Scalar>> scalars;
    std::vector<Table> tables;  // the first table is the primary CSV output

    void set(const std::string& key, Scalar value);
    const Scalar* find(const std::string& key) const;
    double number(const std::string& key) const;
    Table& add_table(std::string name, std::vector<std::string> columns);
    const Table* table(const std::string& name) const;
};

/// Round-trippable text for a double (17 significant digits, shortest form kept).
std::string format_number(double v);

/// {"scenario": ..., <scalars>..., "tables": {name: {column: [values]}}}.
std::string to_json(const Report& report);

std::string table_csv(const Table& table);
/// key,value rows for the scalars.
std::string summary_csv(const Report& report);

/// Writes via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

/// CSV layout: the primary table goes to `path`; other tables to
/// `<stem>.<table>.csv` and scalars to `<stem>.summary.csv` beside it.
/// Returns the paths written.
std::vector<std::string> write_csv(const Report& report, const std::string& path);

}  // namespace etls
