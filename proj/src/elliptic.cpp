#include <relaxch/elliptic.hpp>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <cmath>

namespace relaxch {

Field helmholtz_solve(const CosineBasis& basis, double delta, const Field& rhs)
{
    if (delta < 0) throw ParamError("helmholtz_solve needs delta >= 0");
    require_finite(rhs, "helmholtz rhs");
    if (delta == 0) return rhs;
    return basis.shifted_solve(delta, rhs);
}

Field helmholtz_solve_cg(const Grid& g, double delta, const Field& rhs, double tol, int max_iter)
{
    if (delta < 0) throw ParamError("helmholtz_solve needs delta >= 0");
    require_finite(rhs, "helmholtz rhs");
    if (delta == 0) return rhs;
    Eigen::SparseMatrix<double> a = -delta * laplacian_matrix(g);
    for (int i = 0; i < g.size(); ++i) a.coeffRef(i, i) += 1.0;
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(max_iter);
    cg.compute(a);
    Eigen::VectorXd x = cg.solve(rhs.matrix());
    if (cg.info() != Eigen::Success)
        throw ConvergenceError("conjugate gradients did not converge in " + std::to_string(max_iter) + " iterations");
    return x.array();
}

double mu_equation_residual(const Grid& g, const Field& phi, const Field& mu, const Field& sigma,
                            const ModelParams& p)
{
    const Field y = phi - p.relax_ratio() * mu;
    const Field rhs = -p.gamma * laplacian(g, y) + psi_minus(y, 1, p) - p.chi * sigma;
    return norm(g, mu - rhs);
}

namespace {

double contraction_bound(const ModelParams& p)
{
    // ‖Ψ″₋‖∞ of the piecewise-linear curvature profile.
    return p.relax_ratio() * std::max(p.well_slope(), p.extension.far_curvature);
}

// Iterates x ← T(x) (damped when the contraction bound is not below one)
// until the relative L² change drops below tol.
template <class Map>
void fixed_point(const Grid& g, Field& x, Map&& map, double scale_tol, const MuSolveOptions& opt,
                 MuSolveResult& out)
{
    out.damped = out.contraction >= 1;
    const int cap = out.damped ? opt.damped_max_iter : opt.max_iter;
    const double theta = out.damped ? 0.5 : 1.0;
    for (int it = 1; it <= cap; ++it) {
        Field next = map(x);
        if (theta != 1.0) next = (1 - theta) * x + theta * next;
        if (!next.allFinite()) throw NumericalBlowup("non-finite iterate in fixed-point solve");
        const double change = norm(g, next - x);
        out.changes.push_back(change);
        x = std::move(next);
        out.iterations = it;
        if (change <= scale_tol * norm(g, x) || change == 0) return;
    }
    if (out.damped) throw ContractionError("damped fixed-point iteration stalled");
    throw ConvergenceError("fixed-point iteration reached its cap of " + std::to_string(cap));
}

} // namespace

MuSolveResult solve_mu(const CosineBasis& basis, const Field& phi, const Field& sigma, const ModelParams& p,
                       const Field* guess, const MuSolveOptions& opt)
{
    const Grid& g = basis.grid();
    require_finite(phi, "phi");
    require_finite(sigma, "sigma");
    if (p.delta < 0) throw ParamError("delta must be non-negative");
    MuSolveResult out;
    const Field base = -p.gamma * laplacian(g, phi) - p.chi * sigma;
    if (p.delta == 0) {
        out.mu = base + psi_minus(phi, 1, p);
        out.residual = mu_equation_residual(g, phi, out.mu, sigma, p);
        return out;
    }
    out.contraction = contraction_bound(p);
    const double r = p.relax_ratio();
    Field mu = guess ? *guess : Field(helmholtz_solve(basis, p.delta, base + psi_minus(phi, 1, p)));
    fixed_point(
        g, mu,
        [&](const Field& m) {
            return helmholtz_solve(basis, p.delta, base + psi_minus(Field(phi - r * m), 1, p));
        },
        opt.tol, opt, out);
    out.mu = std::move(mu);
    out.residual = mu_equation_residual(g, phi, out.mu, sigma, p);
    return out;
}

MuSolveResult solve_initial_mu(const CosineBasis& basis, const Field& phi0, const Field& sigma0,
                               const ModelParams& p, const MuSolveOptions& opt)
{
    if (!(p.delta > 0)) throw ParamError("solve_initial_mu needs delta > 0");
    const Grid& g = basis.grid();
    require_finite(phi0, "phi0");
    require_finite(sigma0, "sigma0");
    MuSolveResult out;
    out.contraction = contraction_bound(p);
    const double r = p.relax_ratio();
    const Field base = phi0 + r * p.chi * sigma0;
    Field y = phi0;
    // μ = (γ/δ)(φ₀ − y) magnifies errors in y by γ/δ.
    fixed_point(
        g, y, [&](const Field& v) { return helmholtz_solve(basis, p.delta, base - r * psi_minus(v, 1, p)); },
        opt.tol * r, opt, out);
    out.mu = (phi0 - y) / r;
    out.residual = mu_equation_residual(g, phi0, out.mu, sigma0, p);
    return out;
}

ScalarMap ScalarMap::zero()
{
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, 0.0, 0.0, 0.0};
}

LemmaA1Result lemma_a1_solve(const CosineBasis& basis, const Field& f, const Field& g, const ScalarMap& h,
                             double delta, double tol, int max_iter)
{
    const Grid& grid = basis.grid();
    if (!(delta > 0)) throw PreconditionError("delta must be positive");
    LemmaA1Result out;
    out.c_delta = std::min(1 - delta * (1 + 2 * h.k1 + h.k2), 1 - 2 * h.k3 * delta);
    if (!(out.c_delta > 0)) throw PreconditionError("c_delta = " + std::to_string(out.c_delta) + " is not positive");
    require_finite(f, "f");
    require_finite(g, "g");

    const Field base = f + delta * g;
    auto apply_h = [&](const Field& u) { return u.unaryExpr([&](double s) { return h.value(s); }).eval(); };
    auto residual_of = [&](const Field& u) {
        return Field(-delta * laplacian(grid, u) + u - base - delta * apply_h(u));
    };

    Field u = helmholtz_solve(basis, delta, base);
    if (delta * h.k3 <= 0.5) {
        for (int it = 1; it <= max_iter; ++it) {
            Field next = helmholtz_solve(basis, delta, base + delta * apply_h(u));
            const double change = norm(grid, next - u);
            u = std::move(next);
            out.iterations = it;
            if (change <= tol * norm(grid, u) || change == 0) break;
            if (it == max_iter) throw ConvergenceError("Lemma A.1 fixed point did not converge");
        }
    } else {
        out.newton = true;
        const Eigen::SparseMatrix<double> lap = laplacian_matrix(grid);
        Eigen::SparseMatrix<double> eye(grid.size(), grid.size());
        eye.setIdentity();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        for (int it = 1; it <= max_iter; ++it) {
            const Field r = residual_of(u);
            if (norm(grid, r) <= tol * (norm(grid, base) + 1)) break;
            Eigen::SparseMatrix<double> jac = eye - delta * lap;
            for (int i = 0; i < grid.size(); ++i) jac.coeffRef(i, i) -= delta * h.derivative(u[i]);
            lu.compute(jac);
            if (lu.info() != Eigen::Success) throw ConvergenceError("singular Newton matrix in Lemma A.1 solve");
            u -= lu.solve(r.matrix()).array();
            out.iterations = it;
            if (it == max_iter) throw ConvergenceError("Lemma A.1 Newton iteration did not converge");
        }
    }
    out.u = u;
    out.residual = norm(grid, residual_of(u));

    const double omega = grid.volume();
    const double u2 = inner(grid, u, u);
    const double gu2 = dirichlet_form(grid, u);
    const double lu2 = inner(grid, laplacian(grid, u), laplacian(grid, u));
    const double f2 = inner(grid, f, f);
    const double gf2 = dirichlet_form(grid, f);
    const double g2 = inner(grid, g, g);
    out.norm_v2 = u2 + gu2;
    out.est1_lhs = delta * gu2 + (1 - delta * (1 + 2 * h.k1 + h.k2)) * u2;
    out.est1_rhs = f2 + delta * g2 + delta * h.k2 * omega;
    out.est2_lhs = delta * lu2 + (1 - 2 * h.k3 * delta) * gu2;
    out.est2_rhs = gf2 + delta * g2;
    out.bound_printed = (f2 + gf2 + delta * g2 + delta * h.k2 * omega / 2) / out.c_delta;
    out.bound = (f2 + gf2 + 2 * delta * g2 + delta * h.k2 * omega) / out.c_delta;
    return out;
}

} // namespace relaxch
