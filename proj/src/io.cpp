#include <relaxch/io.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace relaxch {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParamError("not a number: '" + text + "'");
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0') throw ParamError("not a number: '" + text + "'");
    return v;
}

void write_snapshot(const std::string& path, const Grid& g, const Field& f, double time)
{
    if (f.size() != g.size()) throw ParamError("snapshot field does not match grid");
    std::ofstream os(path);
    if (!os) throw ParamError("cannot write " + path);
    os << g.dim << ' ' << g.n[0];
    if (g.dim == 2) os << ' ' << g.n[1];
    os << ' ' << format_double(g.length[0]);
    if (g.dim == 2) os << ' ' << format_double(g.length[1]);
    os << ' ' << format_double(time) << '\n';
    for (double v : f) os << format_double(v) << '\n';
}

Snapshot read_snapshot(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw ParamError("cannot read " + path);
    std::string header;
    std::getline(is, header);
    std::istringstream hs(header);
    Snapshot s;
    std::string tok;
    std::vector<std::string> parts;
    while (hs >> tok) parts.push_back(tok);
    if (parts.empty()) throw ParamError("empty snapshot header in " + path);
    s.grid.dim = std::stoi(parts[0]);
    const std::size_t expected = s.grid.dim == 1 ? 4 : 6;
    if (parts.size() != expected) throw ParamError("malformed snapshot header in " + path);
    if (s.grid.dim == 1) {
        s.grid = Grid(std::stoi(parts[1]), parse_double(parts[2]));
        s.time = parse_double(parts[3]);
    } else {
        s.grid = Grid(std::stoi(parts[1]), std::stoi(parts[2]), parse_double(parts[3]), parse_double(parts[4]));
        s.time = parse_double(parts[5]);
    }
    s.grid.check();
    s.values.resize(s.grid.size());
    std::string line;
    for (int i = 0; i < s.grid.size(); ++i) {
        if (!std::getline(is, line)) throw ParamError("snapshot " + path + " has too few values");
        s.values[i] = parse_double(line);
    }
    return s;
}

namespace {

std::vector<double> record_values(const DiagnosticsRecord& r)
{
    return {r.t,    r.energy,  r.entropy, r.mass_phi,      r.mass_sigma,    r.mass_total,
            r.d1,   r.d2,      r.d3,      r.phi_min,       r.phi_max,       r.overshoot_pos,
            r.overshoot_neg, r.flux_norm, r.mu_residual, r.energy_residual};
}

void write_row(std::ostream& os, const std::vector<double>& v)
{
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_double(v[i]);
    os << '\n';
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

} // namespace

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records)
{
    const auto& cols = diagnostics_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : records) write_row(os, record_values(r));
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records)
{
    std::ofstream os(path);
    if (!os) throw ParamError("cannot write " + path);
    write_diagnostics_csv(os, records);
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw ParamError("empty diagnostics file");
    if (split_csv(line) != diagnostics_columns()) throw ParamError("unexpected diagnostics header");
    std::vector<DiagnosticsRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != diagnostics_columns().size()) throw ParamError("malformed diagnostics row");
        std::vector<double> v;
        for (const auto& c : cells) v.push_back(parse_double(c));
        DiagnosticsRecord r;
        r.t = v[0];
        r.energy = v[1];
        r.entropy = v[2];
        r.mass_phi = v[3];
        r.mass_sigma = v[4];
        r.mass_total = v[5];
        r.d1 = v[6];
        r.d2 = v[7];
        r.d3 = v[8];
        r.phi_min = v[9];
        r.phi_max = v[10];
        r.overshoot_pos = v[11];
        r.overshoot_neg = v[12];
        r.flux_norm = v[13];
        r.mu_residual = v[14];
        r.energy_residual = v[15];
        out.push_back(r);
    }
    return out;
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw ParamError("cannot read " + path);
    return read_diagnostics_csv(is);
}

void write_table_csv(const std::string& path, const Table& t)
{
    std::ofstream os(path);
    if (!os) throw ParamError("cannot write " + path);
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) write_row(os, row);
}

} // namespace relaxch
