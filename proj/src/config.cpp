#include <relaxch/config.hpp>

#include <fstream>
#include <functional>
#include <sstream>

namespace relaxch {

namespace {

struct Key {
    std::string name;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

struct Section {
    std::string name;
    std::vector<Key> keys;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Key real(std::string name, double& v)
{
    return {std::move(name), [&v](const std::string& s) { v = parse_double(s); }, [&v] { return format_double(v); }};
}

Key integer(std::string name, int& v)
{
    return {std::move(name),
            [&v](const std::string& s) {
                std::size_t pos = 0;
                v = std::stoi(s, &pos);
                if (pos != s.size()) throw ParamError("not an integer");
            },
            [&v] { return std::to_string(v); }};
}

Key unsigned64(std::string name, std::uint64_t& v)
{
    return {std::move(name),
            [&v](const std::string& s) {
                std::size_t pos = 0;
                v = std::stoull(s, &pos);
                if (pos != s.size()) throw ParamError("not an integer");
            },
            [&v] { return std::to_string(v); }};
}

Key boolean(std::string name, bool& v)
{
    return {std::move(name),
            [&v](const std::string& s) {
                if (s == "true" || s == "1") v = true;
                else if (s == "false" || s == "0") v = false;
                else throw ParamError("expected true or false");
            },
            [&v] { return std::string(v ? "true" : "false"); }};
}

Key text(std::string name, std::string& v)
{
    return {std::move(name), [&v](const std::string& s) { v = s; }, [&v] { return v; }};
}

Key real_list(std::string name, std::vector<double>& v)
{
    return {std::move(name),
            [&v](const std::string& s) {
                std::vector<double> out;
                std::istringstream ss(s);
                std::string item;
                while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item)));
                if (out.empty()) throw ParamError("empty list");
                v = std::move(out);
            },
            [&v] {
                std::string out;
                for (double x : v) out += (out.empty() ? "" : ", ") + format_double(x);
                return out;
            }};
}

Key optional_real(std::string name, std::optional<double>& v)
{
    return {std::move(name),
            [&v](const std::string& s) {
                if (s == "auto") v.reset();
                else v = parse_double(s);
            },
            [&v] { return v ? format_double(*v) : std::string("auto"); }};
}

std::vector<Section> schema(Config& c, bool& kappa_auto)
{
    ModelParams& m = c.run.params;
    Grid& g = c.run.grid;
    TimeConfig& t = c.run.time;
    InitialConfig& i = c.run.initial;
    StudyConfig& s = c.study;
    OutputConfig& o = c.output;
    Key kappa{"kappa",
              [&m, &kappa_auto](const std::string& v) {
                  kappa_auto = v == "auto";
                  if (!kappa_auto) m.kappa = parse_double(v);
              },
              [&m] { return format_double(m.kappa); }};
    return {
        {"model",
         {real("gamma", m.gamma), real("delta", m.delta), real("chi", m.chi), real("s_star", m.s_star),
          real("p0", m.p0), real("eps_reg", m.eps_reg), real("eps0", m.eps0), kappa,
          integer("prolif_exponent", m.prolif_exponent), real("ext_margin", m.extension.margin),
          real("ext_ramp_width", m.extension.ramp_width), real("ext_far_curvature", m.extension.far_curvature)}},
        {"grid",
         {integer("dim", g.dim), integer("n1", g.n[0]), integer("n2", g.n[1]), real("l1", g.length[0]),
          real("l2", g.length[1])}},
        {"time",
         {real("dt", t.dt), real("t_end", t.t_end), integer("cadence", t.cadence), boolean("adaptive", t.adaptive),
          integer("max_halvings", t.max_halvings), real("energy_tol", t.energy_tol),
          optional_real("stabilization", t.stabilization), boolean("force", c.run.force)}},
        {"initial",
         {text("kind", i.kind), real("phi_mean", i.phi_mean), real("amplitude", i.amplitude),
          integer("wavenumber", i.wavenumber), real("radius", i.radius), real("width", i.width),
          real("inside", i.inside), real("outside", i.outside), real("phi_min", i.phi_min),
          real("phi_max", i.phi_max), real("sigma", i.sigma), real("noise", i.noise), unsigned64("seed", i.seed),
          text("file", i.file)}},
        {"study",
         {real_list("deltas", s.deltas), real_list("eps_values", s.eps_values), integer("modes", s.modes),
          real("ode_tol", s.ode_tol), real_list("lemma_deltas", s.lemma_deltas),
          integer("lemma_cells", s.lemma_cells), real("lemma_length", s.lemma_length),
          text("lemma_nonlinearity", s.lemma_nonlinearity), real("lemma_g", s.lemma_g)}},
        {"output",
         {boolean("snapshots", o.snapshots), integer("snapshot_every", o.snapshot_every),
          boolean("plots", o.plots)}},
    };
}

} // namespace

Config parse_config(const std::string& input)
{
    Config c;
    bool kappa_auto = true;
    auto sections = schema(c, kappa_auto);
    Section* current = nullptr;
    std::istringstream is(input);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, line, "malformed section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            current = nullptr;
            for (auto& s : sections)
                if (s.name == name) current = &s;
            if (!current) throw ConfigError(line_no, name, "unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, line, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!current) throw ConfigError(line_no, key, "key outside of a section");
        Key* k = nullptr;
        for (auto& cand : current->keys)
            if (cand.name == key) k = &cand;
        if (!k) throw ConfigError(line_no, key, "unknown key in [" + current->name + "]");
        try {
            k->set(value);
        } catch (const std::exception& e) {
            throw ConfigError(line_no, key, "invalid value '" + value + "'");
        }
    }
    if (c.run.grid.dim == 1) c.run.grid = Grid(c.run.grid.n[0], c.run.grid.length[0]);
    if (kappa_auto && c.run.params.s_star > 0 && c.run.params.s_star <= max_convex_well)
        c.run.params.kappa = normalized_kappa(c.run.params.s_star);
    return c;
}

Config load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw ConfigError(0, path, "cannot open config file");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const Config& c)
{
    Config copy = c;
    bool kappa_auto = false;
    const auto sections = schema(copy, kappa_auto);
    std::ostringstream os;
    for (const auto& s : sections) {
        os << '[' << s.name << "]\n";
        for (const auto& k : s.keys) os << k.name << " = " << k.get() << '\n';
        os << '\n';
    }
    return os.str();
}

} // namespace relaxch
