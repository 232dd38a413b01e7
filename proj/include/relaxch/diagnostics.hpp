#pragma once

#include <relaxch/grid.hpp>
#include <relaxch/model.hpp>

#include <string>
#include <vector>

namespace relaxch {

struct State {
    Field phi;
    Field mu;
    Field sigma;
    double t = 0;
};

struct EnergyTerms {
    double convex = 0;      // ∫Ψ₊,ε(φ)
    double gradient = 0;    // (γ/2)∫|∇y|²
    double relaxation = 0;  // (δ/2γ)∫μ²
    double concave = 0;     // ∫Ψ₋(y)
    double nutrient = 0;    // ½∫σ²
    double chemotaxis = 0;  // χ∫σ(1 − y)

    double total() const { return convex + gradient + relaxation + concave + nutrient + chemotaxis; }
};

/// y = φ − (δ/γ)μ.
Field relaxed_phase(const State& s, const ModelParams& p);

EnergyTerms free_energy_terms(const Grid& g, const State& s, const ModelParams& p);
double free_energy(const Grid& g, const State& s, const ModelParams& p);

/// ∫η_ε(φ) (the exact η when eps_reg = 0).
double entropy_functional(const Grid& g, const Field& phi, const ModelParams& p);

struct Dissipations {
    double d1 = 0;  // ∫b_ε|∇(μ + Ψ′₊,ε(φ))|²
    double d2 = 0;  // ∫|∇(σ + χ(1 − y))|²
    double d3 = 0;  // ∫P_ε (σ + χ(1 − y) − μ − Ψ′₊,ε(φ))²

    double total() const { return d1 + d2 + d3; }
};

Dissipations dissipations(const Grid& g, const State& s, const ModelParams& p);

/// J = b_ε∇μ + b_εΨ″₊,ε∇φ on interior faces.
FaceField flux_J(const Grid& g, const State& s, const ModelParams& p);
double flux_norm(const Grid& g, const State& s, const ModelParams& p);

/// Residual of μ = −γΔy + Ψ′₋(y) − χσ. Pass params with delta = 0 to test a
/// limit candidate against μ = −γΔφ + Ψ′₋(φ) − χσ.
double mu_limit_residual(const Grid& g, const State& s, const ModelParams& p);

/// Right-hand side of the coercivity estimate:
///   β∫y² + (δ/2γ)∫μ² + (γ/2)∫|∇y|² + α∫σ² − constant·|Ω|.
double coercivity_lower_bound(const Grid& g, const State& s, const ModelParams& p, const CoercivityConstants& c);

struct DiagnosticsRecord {
    double t = 0;
    double energy = 0;
    double entropy = 0;
    double mass_phi = 0;
    double mass_sigma = 0;
    double mass_total = 0;
    double d1 = 0;
    double d2 = 0;
    double d3 = 0;
    double phi_min = 0;
    double phi_max = 0;
    double overshoot_pos = 0;  // ∫(φ − 1)²₊
    double overshoot_neg = 0;  // ∫(−φ)²₊
    double flux_norm = 0;
    double mu_residual = 0;
    double energy_residual = 0;

    // Not written to CSV.
    double coercivity_margin = 0;  // energy − coercivity_lower_bound
    double entropy_lhs = 0;
    double entropy_rhs = 0;

    double dissipation() const { return d1 + d2 + d3; }
};

DiagnosticsRecord evaluate(const Grid& g, const State& s, const ModelParams& p);

/// (E_curr − E_prev)/Δt + mean of the dissipation totals, Δt from the records.
double energy_balance_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& curr);
double energy_balance_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& curr, double dt);

/// Running max over records of |E(t_k) + ∫₀^{t_k} D − E(0)| (trapezoidal ∫D).
double cumulative_balance_residual(const std::vector<DiagnosticsRecord>& records);

/// Constants of the entropy estimate along a run of length T:
///   S_ε(t) + (γ/2)∫∫|Δy|² + (δ/γ)∫∫|∇μ|² ≤ S(φ₀) + C1·E(0) + C2.
struct EntropyBoundConstants {
    double c1 = 0;
    double c2 = 0;
};

EntropyBoundConstants entropy_bound_constants(const Grid& g, const ModelParams& p, const ValidationReport& v,
                                              double t_end);

const std::vector<std::string>& diagnostics_columns();

} // namespace relaxch
