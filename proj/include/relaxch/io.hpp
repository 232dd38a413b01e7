#pragma once

#include <relaxch/diagnostics.hpp>
#include <relaxch/grid.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace relaxch {

/// Shortest text that reads back to the same double (%.17g).
std::string format_double(double v);
double parse_double(const std::string& text);

struct Snapshot {
    Grid grid;
    double time = 0;
    Field values;
};

// Line 1: "dim N1 [N2] L1 [L2] time", then one value per line, x fastest.
void write_snapshot(const std::string& path, const Grid& g, const Field& f, double time);
Snapshot read_snapshot(const std::string& path);

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& is);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table_csv(const std::string& path, const Table& t);

} // namespace relaxch
