#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fkpp/grid.hpp"

namespace fkpp {

/// Field CSV: header `x,value`, one row per node, 17 significant digits.
void write_field_csv(const std::string& path, const Field& f,
                     const std::string& value_header = "value", int precision = 17);

/// Reads a two-column CSV produced by write_field_csv back into a Field
/// (Zero extension). The grid is inferred from the x column.
Field read_field_csv(const std::string& path);

/// Generic two-column CSV.
void write_pairs_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows,
                     int precision = 17);

/// Rows of (x, value, passed) for certificates.
struct CertRow {
    double x;
    double value;
    bool passed;
};
void write_certificate_csv(const std::string& path, const std::vector<CertRow>& rows,
                           int precision = 17);

} // namespace fkpp
