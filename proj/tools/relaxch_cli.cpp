// Command-line driver: simulation runs, continuation studies and checks.

#include <relaxch/config.hpp>
#include <relaxch/io.hpp>
#include <relaxch/studies.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace relaxch;

namespace {

enum Exit { ok = 0, config_error = 1, numerical_failure = 2, inconclusive = 3 };

struct Options {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    bool plots = false;
    bool force = false;
};

const char* plot_script = R"(import csv, sys, os
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1]
with open(path) as f:
    rows = list(csv.DictReader(f))
t = [float(r["t"]) for r in rows]
out = os.path.dirname(path)
for names, fname in [(["energy"], "energy.png"), (["entropy"], "entropy.png"),
                     (["mass_phi", "mass_sigma", "mass_total"], "mass.png"),
                     (["overshoot_pos", "overshoot_neg"], "overshoot.png")]:
    plt.figure(figsize=(5, 3.5))
    for n in names:
        plt.plot(t, [float(r[n]) for r in rows], label=n)
    plt.xlabel("t")
    plt.legend()
    plt.tight_layout()
    plt.savefig(os.path.join(out, fname), dpi=120)
    plt.close()
)";

void make_plots(const fs::path& dir)
{
    const fs::path script = dir / "plots.py";
    std::ofstream(script) << plot_script;
    const std::string cmd = "python3 '" + script.string() + "' '" + (dir / "diagnostics.csv").string() + "' 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) std::cerr << "warning: plotting failed; CSV output is unaffected\n";
}

Config load(const Options& opt)
{
    Config c = load_config(opt.config);
    if (opt.seed) c.run.initial.seed = *opt.seed;
    if (opt.force) c.run.force = true;
    if (opt.plots) c.output.plots = true;
    return c;
}

// Writes diagnostics, snapshots and the effective config of one run.
void write_run(const fs::path& dir, const Config& c, const RunConfig& rc, const RunResult& res)
{
    fs::create_directories(dir / "fields");
    write_diagnostics_csv((dir / "diagnostics.csv").string(), res.records);
    Config eff = c;
    eff.run = rc;
    std::ofstream(dir / "config.txt") << serialize_config(eff);
    if (c.output.plots) make_plots(dir);
}

RunSink snapshot_sink(const fs::path& dir, const Config& c, const char* param)
{
    return [=](std::size_t, const RunConfig& rc, const RunResult& res) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%.4e", param,
                      std::string(param) == "delta" ? rc.params.delta : rc.params.eps_reg);
        const fs::path sub = dir / name;
        write_run(sub, c, rc, res);
        if (c.output.snapshots && res.final_state.phi.size() > 0) {
            write_snapshot((sub / "fields" / "phi_final.dat").string(), rc.grid, res.final_state.phi,
                           res.final_state.t);
            write_snapshot((sub / "fields" / "sigma_final.dat").string(), rc.grid, res.final_state.sigma,
                           res.final_state.t);
        }
    };
}

int finish(const StudyReport& rep, const fs::path& dir)
{
    fs::create_directories(dir);
    write_table_csv((dir / "report.csv").string(), rep.table);
    std::cout << rep.summary();
    switch (rep.outcome()) {
    case Outcome::pass: return ok;
    case Outcome::inconclusive: return inconclusive;
    default: return numerical_failure;
    }
}

int cmd_validate(const Options& opt)
{
    const Config c = load(opt);
    const ValidationReport rep = validate_params(c.run.params);
    std::cout << rep.to_string();
    if (rep.ok()) return ok;
    std::cerr << "assumptions violated:";
    for (const auto& id : rep.failures()) std::cerr << ' ' << id;
    std::cerr << '\n';
    return config_error;
}

int cmd_run(const Options& opt)
{
    const Config c = load(opt);
    const fs::path dir = opt.out;
    fs::create_directories(dir / "fields");
    int k = 0;
    RunConfig rc = c.run;
    const RunResult res = run(rc, [&](const State& s, const DiagnosticsRecord&) {
        if (c.output.snapshots && c.output.snapshot_every > 0 && k % c.output.snapshot_every == 0) {
            const std::string tag = std::to_string(k);
            write_snapshot((dir / "fields" / ("phi_" + tag + ".dat")).string(), rc.grid, s.phi, s.t);
            write_snapshot((dir / "fields" / ("mu_" + tag + ".dat")).string(), rc.grid, s.mu, s.t);
            write_snapshot((dir / "fields" / ("sigma_" + tag + ".dat")).string(), rc.grid, s.sigma, s.t);
        }
        ++k;
    });
    write_run(dir, c, rc, res);
    const auto& last = res.records.back();
    std::printf("t = %g  energy = %.10g  mass_total = %.15g  steps = %d  rejected = %d\n", last.t, last.energy,
                last.mass_total, res.steps, res.rejected_steps);
    return ok;
}

int cmd_delta(const Options& opt)
{
    const Config c = load(opt);
    const fs::path dir = opt.out;
    return finish(delta_continuation(c.run, c.study.deltas, snapshot_sink(dir, c, "delta")), dir);
}

int cmd_eps(const Options& opt)
{
    const Config c = load(opt);
    const fs::path dir = opt.out;
    return finish(eps_continuation(c.run, c.study.eps_values, snapshot_sink(dir, c, "eps")), dir);
}

int cmd_galerkin(const Options& opt)
{
    const Config c = load(opt);
    const GalerkinResult g = galerkin_energy_check(c.run, c.study.modes, c.study.ode_tol);
    std::printf("E(0) = %.15g  accepted steps = %ld  rejected = %ld\n", g.energy0, g.stats.accepted,
                g.stats.rejected);
    return finish(g.report, opt.out);
}

int cmd_lemma(const Options& opt)
{
    const Config c = load(opt);
    return finish(lemma_a1_study(c.study), opt.out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Relaxed degenerate Cahn-Hilliard tumour-growth simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--out", opt.out, "output directory")->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for random initial perturbations");
    app.add_flag("--plots", opt.plots, "write PNG line plots of the diagnostics");
    app.add_flag("--force", opt.force, "run even if the assumption check fails");

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const Options&);
    };
    const Sub subs[] = {
        {"run", "simulate one configuration", cmd_run},
        {"delta-study", "continuation in the relaxation parameter", cmd_delta},
        {"eps-study", "continuation in the regularisation parameter", cmd_eps},
        {"galerkin-check", "energy identity of the Galerkin system", cmd_galerkin},
        {"lemma-a1", "singular-perturbation elliptic study", cmd_lemma},
        {"validate", "assumption report only", cmd_validate},
    };
    int (*chosen)(const Options&) = nullptr;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("config", opt.config, "configuration file")->required();
        sub->callback([&chosen, fn = s.fn] { chosen = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, std::cerr, std::cerr);
        return code == 0 ? ok : config_error;
    }

    try {
        return chosen(opt);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.category() == Error::Category::config ? config_error : numerical_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numerical_failure;
    }
}
