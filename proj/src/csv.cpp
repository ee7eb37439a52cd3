#include "fkpp/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fkpp {

namespace {

std::string fmt(double v, int precision) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

} // namespace

void write_field_csv(const std::string& path, const Field& f,
                     const std::string& value_header, int precision) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "x," << value_header << "\n";
    for (int i = 0; i < f.grid.N; ++i)
        out << fmt(f.grid.x(i), precision) << "," << fmt(f[i], precision) << "\n";
}

Field read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV: " + path);
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("malformed CSV row: " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 3) throw ConfigError("CSV has fewer than 3 rows: " + path);
    Grid g = make_grid(std::abs(xs.back()), int(xs.size()));
    Field f(g);
    for (size_t i = 0; i < vs.size(); ++i) f.values[i] = vs[i];
    return f;
}

void write_pairs_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows,
                     int precision) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << header << "\n";
    for (const auto& [a, b] : rows)
        out << fmt(a, precision) << "," << fmt(b, precision) << "\n";
}

void write_certificate_csv(const std::string& path, const std::vector<CertRow>& rows,
                           int precision) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << "x,value,passed\n";
    for (const auto& r : rows)
        out << fmt(r.x, precision) << "," << fmt(r.value, precision) << ","
            << (r.passed ? 1 : 0) << "\n";
}

} // namespace fkpp
