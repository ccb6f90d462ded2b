#ifndef DCMA_CSV_HPP
#define DCMA_CSV_HPP

#include <string>
#include <vector>

#include "dcma/dataset.hpp"

namespace dcma {

/// Parsed numeric CSV: comma-separated, header required, UTF-8, '.' decimal,
/// no quoting. Parsing is strict; the first malformed cell aborts.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(const std::string& name) const; // throws DataError if absent
};

CsvTable read_csv(const std::string& path);

/// Column-role mapping used to assemble a Dataset from a CSV table.
struct ColumnRoles {
    std::string treatment;
    std::vector<std::string> mediators;
    std::string outcome;
    std::vector<std::string> covariates;

    void validate(const std::vector<std::string>& header) const;
};

/// Assembles and validates the dataset; missing values (empty cells) were
/// already rejected by read_csv, binary treatment is enforced here.
Dataset dataset_from_csv(const CsvTable& table, const ColumnRoles& roles);

void write_dataset_csv(const Dataset& data, const std::string& path);

/// Shortest-round-trip decimal text for a double (never locale dependent).
std::string format_double(double v);

} // namespace dcma

#endif
