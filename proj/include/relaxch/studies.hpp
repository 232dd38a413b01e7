#pragma once

#include <relaxch/elliptic.hpp>
#include <relaxch/io.hpp>
#include <relaxch/ode.hpp>
#include <relaxch/stepper.hpp>

#include <functional>
#include <string>
#include <vector>

namespace relaxch {

struct StudyConfig {
    std::vector<double> deltas{8e-3, 4e-3, 2e-3, 1e-3};
    std::vector<double> eps_values{0.1, 0.05, 0.025, 0.0125};
    int modes = 64;
    double ode_tol = 1e-10;
    std::vector<double> lemma_deltas{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    int lemma_cells = 256;
    double lemma_length = 1.0;
    std::string lemma_nonlinearity = "zero";  // zero | tanh
    double lemma_g = 0.0;                     // amplitude of g = g·cos(2πx/L)

    bool operator==(const StudyConfig&) const = default;
};

enum class Outcome { pass, inconclusive, fail };

const char* to_string(Outcome o);

struct Verdict {
    std::string name;
    Outcome outcome = Outcome::pass;
    std::string detail;
};

struct StudyReport {
    std::string name;
    Table table;
    std::vector<Verdict> verdicts;

    /// Worst outcome over the verdicts.
    Outcome outcome() const;
    std::string summary() const;
    std::vector<double> column_values(const std::string& name) const;
};

/// Called once per parameter point with its index, configuration and result.
using RunSink = std::function<void(std::size_t, const RunConfig&, const RunResult&)>;

struct GalerkinResult {
    StudyReport report;
    double energy0 = 0;
    double max_balance_residual = 0;
    double max_mean_drift = 0;
    OdeStats stats;
};

/// Evolves the Galerkin system on the n lowest discrete cosine modes of the
/// configured grid and measures |E(t) + ∫₀ᵗD − E(0)|.
GalerkinResult galerkin_energy_check(const RunConfig& config, int n, double ode_tol = 1e-10);

/// E(Π^nφ₀, Π^nσ₀) with μ from the projected initial-datum problem.
double galerkin_initial_energy(const RunConfig& config, int n);

StudyReport eps_continuation(const RunConfig& config, const std::vector<double>& eps, const RunSink& sink = {});

StudyReport delta_continuation(const RunConfig& config, const std::vector<double>& deltas,
                               const RunSink& sink = {});

StudyReport lemma_a1_study(const CosineBasis& basis, const Field& f, const Field& g, const ScalarMap& h,
                           const std::vector<double>& deltas);

/// Lemma A.1 study from the [study] settings: f = cos(πx/L), g = lemma_g·cos(2πx/L).
StudyReport lemma_a1_study(const StudyConfig& study);

} // namespace relaxch
