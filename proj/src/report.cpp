#include "etls/report.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace etls {

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw std::logic_error("table '" + name + "': row width mismatch");
    rows.push_back(std::move(row));
}

void Report::set(const std::string& key, Scalar value) {
    for (auto& [k, v] : scalars) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    scalars.emplace_back(key, std::move(value));
}

const Scalar* Report::find(const std::string& key) const {
    for (const auto& [k, v] : scalars)
        if (k == key) return &v;
    return nullptr;
}

double Report::number(const std::string& key) const {
    const Scalar* s = find(key);
    if (!s) throw std::out_of_range("report has no scalar '" + key + "'");
    if (const auto* d = std::get_if<double>(s)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(s)) return static_cast<double>(*i);
    if (const auto* b = std::get_if<bool>(s)) return *b ? 1.0 : 0.0;
    throw std::invalid_argument("report scalar '" + key + "' is not numeric");
}

Table& Report::add_table(std::string name, std::vector<std::string> columns) {
    tables.push_back(Table{std::move(name), std::move(columns), {}});
    return tables.back();
}

const Table* Report::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

namespace {

nlohmann::ordered_json scalar_json(const Scalar& s) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, s);
}

std::string scalar_text(const Scalar& s) {
    if (const auto* d = std::get_if<double>(&s)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&s)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&s)) return *b ? "true" : "false";
    return std::get<std::string>(s);
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_json(const Report& report) {
    nlohmann::ordered_json j;
    j["scenario"] = report.scenario;
    for (const auto& [k, v] : report.scalars) j[k] = scalar_json(v);
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto& t : report.tables) {
        nlohmann::ordered_json cols = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            nlohmann::ordered_json values = nlohmann::ordered_json::array();
            for (const auto& row : t.rows) values.push_back(row[c]);
            cols[t.columns[c]] = std::move(values);
        }
        tables[t.name] = std::move(cols);
    }
    j["tables"] = std::move(tables);
    return j.dump(2) + "\n";
}

std::string table_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << csv_field(table.columns[c]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
    return out.str();
}

std::string summary_csv(const Report& report) {
    std::ostringstream out;
    out << "key,value\n";
    out << "scenario," << csv_field(report.scenario) << '\n';
    for (const auto& [k, v] : report.scalars) out << csv_field(k) << ',' << csv_field(scalar_text(v)) << '\n';
    return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = fs::path(path + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::vector<std::string> write_csv(const Report& report, const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path p(path);
    const fs::path stem = p.parent_path() / p.stem();
    std::vector<std::string> written;
    for (std::size_t i = 0; i < report.tables.size(); ++i) {
        const std::string target = i == 0 ? path : stem.string() + "." + report.tables[i].name + ".csv";
        write_atomic(target, table_csv(report.tables[i]));
        written.push_back(target);
    }
    const std::string summary = stem.string() + ".summary.csv";
    write_atomic(summary, summary_csv(report));
    written.push_back(summary);
    return written;
}

}  // namespace etls
