#pragma once

#include <relaxch/diagnostics.hpp>
#include <relaxch/elliptic.hpp>
#include <relaxch/grid.hpp>
#include <relaxch/model.hpp>

#include <Eigen/SparseCholesky>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace relaxch {

struct TimeConfig {
    double dt = 1e-4;
    double t_end = 0.05;
    int cadence = 1;  // steps between diagnostics records
    bool adaptive = true;
    int max_halvings = 4;
    double energy_tol = 1e-8;  // allowed energy increase per step, relative to 1 + |E|
    // Weight S of the implicit term S·div(b_ε∇(φ⁺ − φ)); unset means γ/δ.
    std::optional<double> stabilization;

    bool operator==(const TimeConfig&) const = default;
};

struct InitialConfig {
    std::string kind = "cosine";  // cosine | disk | file
    double phi_mean = 0.45;
    double amplitude = 0.1;
    int wavenumber = 2;  // cos(kπx/L1)cos(kπy/L2)
    double radius = 0.25;
    double width = 0.02;
    double inside = 0.95;
    double outside = 0.2;
    double phi_min = 0.0;
    double phi_max = 0.95;
    double sigma = 0.5;
    double noise = 0.0;  // uniform perturbation amplitude, drawn with seed
    std::uint64_t seed = 0;
    std::string file;

    bool operator==(const InitialConfig&) const = default;
};

struct RunConfig {
    ModelParams params = default_params();
    Grid grid{};
    TimeConfig time{};
    InitialConfig initial{};
    bool force = false;  // run even if validate_params reports failures
    bool keep_trajectory = false;

    bool operator==(const RunConfig&) const = default;
};

Field reaction_source(const Field& phi, const Field& mu, const Field& sigma, const ModelParams& p);

/// φ₀, σ₀ from the initial data description (μ not set).
State initial_state(const Grid& g, const InitialConfig& init);

/// First-order convex-split stepper for a fixed grid and parameter set.
class Stepper {
public:
    Stepper(const Grid& g, const ModelParams& p, std::optional<double> stabilization = std::nullopt);

    const Grid& grid() const { return basis_.grid(); }
    const CosineBasis& basis() const { return basis_; }
    const ModelParams& params() const { return params_; }
    double stabilization() const { return stab_; }

    /// One step of size dt; throws NumericalBlowup on non-finite fields.
    State step(const State& s, double dt);

    /// μ(0) for the given φ₀, σ₀.
    State initialise(State s) const;

private:
    CosineBasis basis_;
    ModelParams params_;
    double stab_;
    Eigen::SparseMatrix<double> eye_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    bool analysed_ = false;
};

State step(const Grid& g, const State& s, double dt, const ModelParams& p);

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    std::vector<State> trajectory;  // at record times, if kept
    State final_state;
    int steps = 0;
    int rejected_steps = 0;
    ValidationReport validation;
};

using RunObserver = std::function<void(const State&, const DiagnosticsRecord&)>;

RunResult run(const RunConfig& config, const RunObserver& observer = {});

} // namespace relaxch
