#include "dcma/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dcma {

std::size_t CsvTable::column_index(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("csv: no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col,
                  const std::string& col_name) {
    if (cell.empty())
        throw DataError("csv: missing value at row " + std::to_string(row) + ", column '" +
                        col_name + "' (no imputation is performed)");
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw DataError("csv: non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                        ", column '" + col_name + "' (column " + std::to_string(col + 1) + ")");
    if (!std::isfinite(value))
        throw DataError("csv: non-finite value at row " + std::to_string(row) + ", column '" +
                        col_name + "'");
    return value;
}

} // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: " + path + " is empty (no header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.header = split_line(line);
    for (auto& h : table.header)
        if (h.empty()) throw DataError("csv: empty column name in header of " + path);

    std::size_t row_number = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row_number;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != table.header.size())
            throw DataError("csv: row " + std::to_string(row_number) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(table.header.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            row[c] = parse_cell(cells[c], row_number, c, table.header[c]);
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) throw DataError("csv: empty dataset in " + path + " (header only)");
    return table;
}

void ColumnRoles::validate(const std::vector<std::string>& header) const {
    if (treatment.empty() || outcome.empty())
        throw ConfigError("column roles: treatment and outcome are required");
    if (mediators.empty()) throw ConfigError("column roles: at least one mediator is required");
    std::set<std::string> seen;
    auto claim = [&seen](const std::string& name, const char* role) {
        if (!seen.insert(name).second)
            throw ConfigError(std::string("column roles: column '") + name +
                              "' assigned to more than one role (" + role + ")");
    };
    claim(treatment, "treatment");
    claim(outcome, "outcome");
    for (const auto& m : mediators) claim(m, "mediator");
    for (const auto& z : covariates) claim(z, "covariate");
    for (const auto& name : seen)
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw ConfigError("column roles: column '" + name + "' not present in the data header");
}

Dataset dataset_from_csv(const CsvTable& table, const ColumnRoles& roles) {
    roles.validate(table.header);
    const std::size_t n = table.rows.size();
    Dataset data;
    data.a_name = roles.treatment;
    data.y_name = roles.outcome;
    data.m_names = roles.mediators;
    data.z_names = roles.covariates;

    const std::size_t a_col = table.column_index(roles.treatment);
    const std::size_t y_col = table.column_index(roles.outcome);
    std::vector<std::size_t> m_cols, z_cols;
    for (const auto& m : roles.mediators) m_cols.push_back(table.column_index(m));
    for (const auto& z : roles.covariates) z_cols.push_back(table.column_index(z));

    data.a.resize(n);
    data.y.resize(n);
    data.m = Matrix(n, m_cols.size());
    data.z = Matrix(n, z_cols.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = table.rows[i];
        const double a = row[a_col];
        if (a != 0.0 && a != 1.0)
            throw DataError("csv: treatment column '" + roles.treatment + "' must be binary 0/1; row " +
                            std::to_string(i + 1) + " has " + format_double(a));
        data.a[i] = a;
        data.y[i] = row[y_col];
        for (std::size_t c = 0; c < m_cols.size(); ++c) data.m(i, c) = row[m_cols[c]];
        for (std::size_t c = 0; c < z_cols.size(); ++c) data.z(i, c) = row[z_cols[c]];
    }
    data.validate();
    return data;
}

std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("csv: cannot open " + path + " for writing");
    out << data.a_name;
    for (const auto& z : data.z_names) out << ',' << z;
    for (const auto& m : data.m_names) out << ',' << m;
    out << ',' << data.y_name << '\n';
    for (std::size_t i = 0; i < data.n(); ++i) {
        out << format_double(data.a[i]);
        for (std::size_t c = 0; c < data.z.cols; ++c) out << ',' << format_double(data.z(i, c));
        for (std::size_t c = 0; c < data.m.cols; ++c) out << ',' << format_double(data.m(i, c));
        out << ',' << format_double(data.y[i]) << '\n';
    }
}

} // namespace dcma
