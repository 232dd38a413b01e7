#include <relaxch/diagnostics.hpp>
#include <relaxch/elliptic.hpp>

#include <algorithm>
#include <cmath>

namespace relaxch {

Field relaxed_phase(const State& s, const ModelParams& p) { return s.phi - p.relax_ratio() * s.mu; }

EnergyTerms free_energy_terms(const Grid& g, const State& s, const ModelParams& p)
{
    const Field y = relaxed_phase(s, p);
    EnergyTerms e;
    e.convex = integrate(g, psi_plus(s.phi, 0, p));
    e.gradient = 0.5 * p.gamma * dirichlet_form(g, y);
    e.relaxation = p.gamma > 0 ? 0.5 * p.relax_ratio() * inner(g, s.mu, s.mu) : 0.0;
    e.concave = integrate(g, psi_minus(y, 0, p));
    e.nutrient = 0.5 * inner(g, s.sigma, s.sigma);
    e.chemotaxis = p.chi * inner(g, s.sigma, Field(1.0 - y));
    return e;
}

double free_energy(const Grid& g, const State& s, const ModelParams& p) { return free_energy_terms(g, s, p).total(); }

double entropy_functional(const Grid& g, const Field& phi, const ModelParams& p)
{
    return integrate(g, entropy_density(phi, 0, p, true));
}

namespace {

// w = μ + Ψ′₊,ε(φ), z = σ + χ(1 − y).
struct Potentials {
    Field w;
    Field z;
};

Potentials potentials(const State& s, const ModelParams& p)
{
    return {s.mu + psi_plus(s.phi, 1, p), s.sigma + p.chi * (1.0 - relaxed_phase(s, p))};
}

} // namespace

Dissipations dissipations(const Grid& g, const State& s, const ModelParams& p)
{
    const Potentials pot = potentials(s, p);
    Dissipations d;
    d.d1 = dirichlet_form(g, pot.w, mobility(s.phi, p));
    d.d2 = dirichlet_form(g, pot.z);
    d.d3 = integrate(g, proliferation(s.phi, p) * (pot.z - pot.w).square());
    return d;
}

FaceField flux_J(const Grid& g, const State& s, const ModelParams& p)
{
    const Field b = mobility(s.phi, p);
    const FaceField bf = face_mean(g, b);
    const FaceField cf = face_mean(g, Field(b * psi_plus(s.phi, 2, p)));
    const FaceField gmu = face_gradient(g, s.mu);
    const FaceField gphi = face_gradient(g, s.phi);
    FaceField j;
    for (int a = 0; a < g.dim; ++a) j.axis[a] = bf.axis[a] * gmu.axis[a] + cf.axis[a] * gphi.axis[a];
    return j;
}

double flux_norm(const Grid& g, const State& s, const ModelParams& p)
{
    FaceField j = flux_J(g, s, p);
    for (int a = 0; a < g.dim; ++a) j.axis[a] = j.axis[a].square();
    return std::sqrt(face_integral(g, j));
}

double mu_limit_residual(const Grid& g, const State& s, const ModelParams& p)
{
    return mu_equation_residual(g, s.phi, s.mu, s.sigma, p);
}

double coercivity_lower_bound(const Grid& g, const State& s, const ModelParams& p, const CoercivityConstants& c)
{
    const Field y = relaxed_phase(s, p);
    return c.beta * inner(g, y, y) + 0.5 * p.relax_ratio() * inner(g, s.mu, s.mu) +
           0.5 * p.gamma * dirichlet_form(g, y) + c.alpha * inner(g, s.sigma, s.sigma) - c.constant * g.volume();
}

DiagnosticsRecord evaluate(const Grid& g, const State& s, const ModelParams& p)
{
    DiagnosticsRecord r;
    r.t = s.t;
    r.energy = free_energy(g, s, p);
    r.entropy = entropy_functional(g, s.phi, p);
    r.mass_phi = integrate(g, s.phi);
    r.mass_sigma = integrate(g, s.sigma);
    r.mass_total = integrate(g, Field(s.phi + s.sigma));
    const Dissipations d = dissipations(g, s, p);
    r.d1 = d.d1;
    r.d2 = d.d2;
    r.d3 = d.d3;
    r.phi_min = s.phi.minCoeff();
    r.phi_max = s.phi.maxCoeff();
    r.overshoot_pos = integrate(g, (s.phi - 1.0).max(0.0).square());
    r.overshoot_neg = integrate(g, (-s.phi).max(0.0).square());
    r.flux_norm = flux_norm(g, s, p);
    r.mu_residual = mu_limit_residual(g, s, p);
    return r;
}

double energy_balance_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& curr, double dt)
{
    if (!(dt > 0)) return 0.0;
    return (curr.energy - prev.energy) / dt + 0.5 * (prev.dissipation() + curr.dissipation());
}

double energy_balance_residual(const DiagnosticsRecord& prev, const DiagnosticsRecord& curr)
{
    return energy_balance_residual(prev, curr, curr.t - prev.t);
}

double cumulative_balance_residual(const std::vector<DiagnosticsRecord>& records)
{
    if (records.empty()) return 0.0;
    double integral = 0;
    double worst = 0;
    for (std::size_t k = 1; k < records.size(); ++k) {
        integral += 0.5 * (records[k].t - records[k - 1].t) * (records[k].dissipation() + records[k - 1].dissipation());
        worst = std::max(worst, std::abs(records[k].energy + integral - records[0].energy));
    }
    return worst;
}

EntropyBoundConstants entropy_bound_constants(const Grid& g, const ModelParams& p, const ValidationReport& v,
                                              double t_end)
{
    const CoercivityConstants c = coercivity_constants(p, v.constants);
    const double lip = v.constants.lip;
    const double c4sq = v.c4 * v.c4;
    EntropyBoundConstants out;
    out.c1 = 2 * lip * t_end / p.gamma + p.chi * p.chi * t_end / (2 * p.gamma * c.alpha) + 1.0 +
             4 * c4sq * t_end / c.beta + 8 * c4sq * v.delta0 * t_end / p.gamma;
    out.c2 = out.c1 * c.constant * g.volume() + 2 * v.c5 * v.c5 * g.volume() * t_end;
    return out;
}

const std::vector<std::string>& diagnostics_columns()
{
    static const std::vector<std::string> cols{
        "t",        "energy",   "entropy",       "mass_phi",      "mass_sigma", "mass_total",
        "D1",       "D2",       "D3",            "phi_min",       "phi_max",    "overshoot_pos",
        "overshoot_neg", "flux_norm", "mu_residual", "energy_residual"};
    return cols;
}

} // namespace relaxch
