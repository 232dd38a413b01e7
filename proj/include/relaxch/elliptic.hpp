#pragma once

#include <relaxch/grid.hpp>
#include <relaxch/model.hpp>

#include <functional>
#include <vector>

namespace relaxch {

/// u with −δΔ_h u + u = rhs, solved exactly in the cosine basis.
Field helmholtz_solve(const CosineBasis& basis, double delta, const Field& rhs);

/// Same system by conjugate gradients on the sparse stencil.
Field helmholtz_solve_cg(const Grid& g, double delta, const Field& rhs, double tol = 1e-14,
                         int max_iter = 10000);

struct MuSolveOptions {
    double tol = 1e-11;  // relative L² change between iterates
    int max_iter = 500;
    int damped_max_iter = 5000;
};

struct MuSolveResult {
    Field mu;
    int iterations = 0;
    double residual = 0;     // L² residual of the μ equation
    double contraction = 0;  // (δ/γ)‖Ψ″₋‖∞
    bool damped = false;
    std::vector<double> changes;  // L² change per iteration
};

/// ‖μ − (−γΔy + Ψ′₋(y) − χσ)‖_L² with y = φ − (δ/γ)μ. With δ = 0 this is the
/// residual of the limit relation μ = −γΔφ + Ψ′₋(φ) − χσ.
double mu_equation_residual(const Grid& g, const Field& phi, const Field& mu, const Field& sigma,
                            const ModelParams& p);

/// Fixed-point solve of −δΔμ + μ = −γΔφ + Ψ′₋(φ − (δ/γ)μ) − χσ. For δ = 0
/// the relation is explicit. guess warm-starts the iteration.
MuSolveResult solve_mu(const CosineBasis& basis, const Field& phi, const Field& sigma, const ModelParams& p,
                       const Field* guess = nullptr, const MuSolveOptions& opt = {});

/// μ(0) from the problem for y = φ₀ − (δ/γ)μ(0):
///   −δΔy + y = φ₀ − (δ/γ)Ψ′₋(y) + (δ/γ)χσ₀.
MuSolveResult solve_initial_mu(const CosineBasis& basis, const Field& phi0, const Field& sigma0,
                               const ModelParams& p, const MuSolveOptions& opt = {});

/// Nonlinearity h with |h(s)| ≤ k1|s| + k2 and |h′(s)| ≤ k3.
struct ScalarMap {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    double k1 = 0;
    double k2 = 0;
    double k3 = 0;

    static ScalarMap zero();
};

struct LemmaA1Result {
    Field u;
    int iterations = 0;
    bool newton = false;
    double residual = 0;
    double c_delta = 0;
    double norm_v2 = 0;        // ‖u‖²_V = ‖u‖² + ‖∇u‖²
    double est1_lhs = 0;       // δ‖∇u‖² + (1 − δ(1+2k1+k2))‖u‖²
    double est1_rhs = 0;       // ‖f‖² + δ‖g‖² + δk2|Ω|
    double est2_lhs = 0;       // δ‖Δu‖² + (1 − 2k3δ)‖∇u‖²
    double est2_rhs = 0;       // ‖∇f‖² + δ‖g‖²
    double bound_printed = 0;  // (‖f‖²_V + δ‖g‖² + δk2|Ω|/2)/c_δ as printed
    double bound = 0;          // (‖f‖²_V + 2δ‖g‖² + δk2|Ω|)/c_δ, the sum of the two estimates
};

/// Solves −δΔu + u = f + δg + δh(u) with Neumann conditions by fixed point,
/// or by Newton when δk3 > 1/2.
LemmaA1Result lemma_a1_solve(const CosineBasis& basis, const Field& f, const Field& g, const ScalarMap& h,
                             double delta, double tol = 1e-13, int max_iter = 1000);

} // namespace relaxch
