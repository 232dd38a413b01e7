#include <relaxch/ode.hpp>
#include <relaxch/studies.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

namespace relaxch {

const char* to_string(Outcome o)
{
    switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::inconclusive: return "inconclusive";
    default: return "fail";
    }
}

Outcome StudyReport::outcome() const
{
    Outcome worst = Outcome::pass;
    for (const auto& v : verdicts) worst = std::max(worst, v.outcome);
    return worst;
}

std::string StudyReport::summary() const
{
    std::ostringstream os;
    os << name << ": " << to_string(outcome()) << '\n';
    for (const auto& v : verdicts) os << "  " << to_string(v.outcome) << "  " << v.name << ": " << v.detail << '\n';
    return os.str();
}

std::vector<double> StudyReport::column_values(const std::string& col) const
{
    const auto it = std::find(table.columns.begin(), table.columns.end(), col);
    if (it == table.columns.end()) throw ParamError("no column '" + col + "' in " + name);
    const auto idx = static_cast<std::size_t>(it - table.columns.begin());
    std::vector<double> out;
    for (const auto& row : table.rows) out.push_back(row[idx]);
    return out;
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string list(const std::vector<double>& v)
{
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ", ") + fmt(x);
    return "[" + s + "]";
}

Verdict verdict(std::string name, bool ok, Outcome otherwise, std::string detail)
{
    return {std::move(name), ok ? Outcome::pass : otherwise, std::move(detail)};
}

bool strictly_decreasing(const std::vector<double>& v, double slack = 0)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1] + slack)) return false;
    return true;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Runs are independent; results are consumed in sequence order.
std::vector<std::future<RunResult>> launch(const std::vector<RunConfig>& cfgs)
{
    std::vector<std::future<RunResult>> out;
    for (const auto& c : cfgs) out.push_back(std::async(std::launch::async, [&c] { return run(c); }));
    return out;
}

void check_sequence(const std::vector<double>& v, const char* what)
{
    if (v.empty()) throw ParamError(std::string(what) + " sequence is empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) throw ParamError(std::string(what) + " sequence must be strictly decreasing");
}

// The Galerkin system on W_n: coefficients of φ and σ on the n lowest
// discrete cosine modes. All products are formed on the grid and projected.
class Galerkin {
public:
    Galerkin(const Grid& g, const ModelParams& p, int n)
        : basis_(g), p_(p), n_(n), mask_(basis_.mask(n)), mu_(Field::Zero(g.size()))
    {
    }

    const CosineBasis& basis() const { return basis_; }

    Field project(const Field& f) const { return basis_.inverse(basis_.forward(f) * mask_); }

    // μ ∈ W_n with μ = (I − δΔ)⁻¹Π^n(−γΔφ + Ψ′₋(φ − (δ/γ)μ) − χσ).
    const Field& solve_mu(const Field& phi, const Field& sigma)
    {
        const Grid& g = basis_.grid();
        const Field base = -p_.gamma * laplacian(g, phi) - p_.chi * sigma;
        const Eigen::ArrayXd scale = mask_ / (1.0 + p_.delta * basis_.symbol());
        const double r = p_.relax_ratio();
        for (int it = 0; it < 200; ++it) {
            const Field y = phi - r * mu_;
            Field next = basis_.inverse(basis_.forward(base + psi_minus(y, 1, p_)) * scale);
            const double change = norm(g, next - mu_);
            mu_ = std::move(next);
            if (change <= 1e-15 * norm(g, mu_) || change == 0) return mu_;
        }
        return mu_;
    }

    State state(const Eigen::VectorXd& y)
    {
        State s;
        s.phi = basis_.scatter(y.head(n_));
        s.sigma = basis_.scatter(y.segment(n_, n_));
        s.mu = solve_mu(s.phi, s.sigma);
        return s;
    }

    void rhs(const Eigen::VectorXd& y, Eigen::VectorXd& dy)
    {
        const Grid& g = basis_.grid();
        const State s = state(y);
        const Field w = s.mu + project(psi_plus(s.phi, 1, p_));
        const Field z = s.sigma + p_.chi * (1.0 - relaxed_phase(s, p_));
        const Field b = mobility(s.phi, p_);
        const Field pr = proliferation(s.phi, p_);
        const Field reac = pr * (z - w);
        dy.resize(y.size());
        dy.head(n_) = basis_.gather(div_mobility_grad(g, b, w) + reac, n_);
        dy.segment(n_, n_) = basis_.gather(laplacian(g, z) - reac, n_);
        dy[2 * n_] = dirichlet_form(g, w, b) + dirichlet_form(g, z) + integrate(g, pr * (z - w).square());
    }

private:
    CosineBasis basis_;
    ModelParams p_;
    int n_;
    Eigen::ArrayXd mask_;
    Field mu_;
};

Eigen::VectorXd galerkin_initial(Galerkin& gal, const RunConfig& config, int n)
{
    const State s0 = initial_state(config.grid, config.initial);
    Eigen::VectorXd y(2 * n + 1);
    y.head(n) = gal.basis().gather(s0.phi, n);
    y.segment(n, n) = gal.basis().gather(s0.sigma, n);
    y[2 * n] = 0;
    return y;
}

} // namespace

double galerkin_initial_energy(const RunConfig& config, int n)
{
    Galerkin gal(config.grid, config.params, n);
    const Eigen::VectorXd y = galerkin_initial(gal, config, n);
    return free_energy(config.grid, gal.state(y), config.params);
}

GalerkinResult galerkin_energy_check(const RunConfig& config, int n, double ode_tol)
{
    const Grid& g = config.grid;
    g.check();
    if (n < 1 || n > g.size()) throw ParamError("mode count must lie in [1, number of cells]");
    const ModelParams& p = config.params;
    if (!(p.delta > 0)) throw ParamError("Galerkin check needs delta > 0");

    Galerkin gal(g, p, n);
    Eigen::VectorXd y = galerkin_initial(gal, config, n);

    GalerkinResult out;
    out.report.name = "galerkin-check";
    out.report.table.columns = {"t", "energy", "dissipation_integral", "balance_residual", "mean_drift"};
    const double mean0 = y[0];
    auto record = [&](double t, const Eigen::VectorXd& v) {
        const double e = free_energy(g, gal.state(v), p);
        if (out.report.table.rows.empty()) out.energy0 = e;
        const double res = std::abs(e + v[2 * n] - out.energy0);
        const double drift = std::abs(v[0] - mean0);
        out.max_balance_residual = std::max(out.max_balance_residual, res);
        out.max_mean_drift = std::max(out.max_mean_drift, drift);
        out.report.table.rows.push_back({t, e, v[2 * n], res, drift});
    };
    record(0.0, y);

    OdeOptions opt;
    opt.rtol = ode_tol;
    opt.atol = ode_tol;
    out.stats = dormand_prince([&](double, const Eigen::VectorXd& v, Eigen::VectorXd& dv) { gal.rhs(v, dv); }, 0.0,
                               config.time.t_end, y, opt, record);

    const double tol = 1e-6 * (1 + std::abs(out.energy0));
    out.report.verdicts.push_back(verdict("energy identity", out.max_balance_residual <= tol, Outcome::fail,
                                          "max |E + int D - E(0)| = " + fmt(out.max_balance_residual) +
                                              " (limit " + fmt(tol) + ", " + std::to_string(out.stats.accepted) +
                                              " steps)"));
    if (p.p0 == 0)
        out.report.verdicts.push_back(verdict("mean conservation", out.max_mean_drift <= 1e-12, Outcome::fail,
                                              "max mean drift = " + fmt(out.max_mean_drift)));
    return out;
}

StudyReport eps_continuation(const RunConfig& config, const std::vector<double>& eps, const RunSink& sink)
{
    check_sequence(eps, "eps");
    StudyReport rep;
    rep.name = "eps-study";
    rep.table.columns = {"eps",        "max_overshoot_pos", "max_overshoot_neg", "max_entropy",
                         "bound",      "min_bound_margin",  "phi_max",           "phi_min"};
    std::vector<RunConfig> cfgs(eps.size(), config);
    for (std::size_t i = 0; i < eps.size(); ++i) cfgs[i].params.eps_reg = eps[i];
    auto runs = launch(cfgs);
    bool bound_ok = true;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const RunConfig& cfg = cfgs[i];
        const RunResult res = runs[i].get();
        if (sink) sink(i, cfg, res);
        const double bvalue = 2 * mobility(1 - eps[i], cfg.params, false);
        double os_pos = 0, os_neg = 0, smax = -std::numeric_limits<double>::infinity();
        double margin = std::numeric_limits<double>::infinity();
        double pmax = -std::numeric_limits<double>::infinity(), pmin = std::numeric_limits<double>::infinity();
        for (const auto& r : res.records) {
            os_pos = std::max(os_pos, r.overshoot_pos);
            os_neg = std::max(os_neg, r.overshoot_neg);
            smax = std::max(smax, r.entropy);
            pmax = std::max(pmax, r.phi_max);
            pmin = std::min(pmin, r.phi_min);
            if (r.entropy >= 0) margin = std::min(margin, bvalue * r.entropy + 1e-10 - r.overshoot_pos);
        }
        if (margin < 0) bound_ok = false;
        rep.table.rows.push_back({eps[i], os_pos, os_neg, smax, bvalue * smax, margin, pmax, pmin});
    }
    const auto os = rep.column_values("max_overshoot_pos");
    rep.verdicts.push_back(verdict("overshoot bound", bound_ok, Outcome::fail,
                                   "(phi-1)_+^2 <= 2 b(1-eps) S_eps + 1e-10 at every record; min margins " +
                                       list(rep.column_values("min_bound_margin"))));
    bool monotone = true;
    for (std::size_t i = 1; i < os.size(); ++i)
        if (os[i] > os[i - 1] + 1e-10) monotone = false;
    rep.verdicts.push_back(verdict("overshoot non-increasing", monotone, Outcome::inconclusive,
                                   "max overshoot_pos " + list(os)));
    rep.verdicts.push_back(verdict("smallest eps below largest", os.back() <= os.front() + 1e-10,
                                   Outcome::inconclusive, fmt(os.back()) + " vs " + fmt(os.front())));
    return rep;
}

StudyReport delta_continuation(const RunConfig& config, const std::vector<double>& deltas, const RunSink& sink)
{
    check_sequence(deltas, "delta");
    for (double d : deltas) {
        ModelParams p = config.params;
        p.delta = d;
        const double d0 = delta_threshold(p, derive_extension_constants(p));
        if (!(d > 0) || d >= d0)
            throw PreconditionError("delta = " + fmt(d) + " is not in (0, delta0 = " + fmt(d0) + ")");
    }
    const Grid& g = config.grid;
    StudyReport rep;
    rep.name = "delta-study";
    rep.table.columns = {"delta",        "cauchy_y",      "cauchy_phi",   "flux_l2l2",      "flux_sup",
                         "delta_mu2",    "init_h1",       "mu_limit_residual", "y_sup_h1", "sigma_sup_l2",
                         "d2_integral"};

    std::vector<RunConfig> cfgs(deltas.size(), config);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        RunConfig& cfg = cfgs[i];
        cfg.params.delta = deltas[i];
        // One scheme for the whole sequence: the stabilisation weight is
        // fixed by the smallest δ unless configured.
        if (!cfg.time.stabilization) cfg.time.stabilization = cfg.params.gamma / deltas.back();
        cfg.keep_trajectory = true;
    }
    auto runs = launch(cfgs);

    std::vector<State> prev;
    std::vector<double> times;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const RunConfig& cfg = cfgs[i];
        const RunResult res = runs[i].get();
        if (sink) sink(i, cfg, res);
        const ModelParams& p = cfg.params;
        const double r = p.relax_ratio();

        std::vector<double> t;
        for (const auto& rec : res.records) t.push_back(rec.t);
        // Trapezoidal ∫₀ᵀ q dt over the record times.
        auto time_integral = [&](const std::vector<double>& q) {
            double s = 0;
            for (std::size_t k = 1; k < q.size(); ++k) s += 0.5 * (t[k] - t[k - 1]) * (q[k] + q[k - 1]);
            return s;
        };

        double cauchy_y = nan, cauchy_phi = nan;
        if (!prev.empty()) {
            if (t != times) throw ParamError("delta-study runs produced different record times");
            const double rp = config.params.gamma > 0 ? deltas[i - 1] / p.gamma : 0;
            std::vector<double> dy, dphi;
            for (std::size_t k = 0; k < t.size(); ++k) {
                const State& a = res.trajectory[k];
                const State& b = prev[k];
                const Field ya = a.phi - r * a.mu;
                const Field yb = b.phi - rp * b.mu;
                dy.push_back(inner(g, Field(ya - yb), Field(ya - yb)));
                dphi.push_back(inner(g, Field(a.phi - b.phi), Field(a.phi - b.phi)));
            }
            cauchy_y = std::sqrt(time_integral(dy));
            cauchy_phi = std::sqrt(time_integral(dphi));
        }

        std::vector<double> j2, d2;
        double jsup = 0, dmu = 0, ysup = 0, ssup = 0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const State& s = res.trajectory[k];
            const double jn = res.records[k].flux_norm;
            j2.push_back(jn * jn);
            d2.push_back(res.records[k].d2);
            jsup = std::max(jsup, jn);
            dmu = std::max(dmu, p.delta * inner(g, s.mu, s.mu));
            ysup = std::max(ysup, norm(g, Field(s.phi - r * s.mu), Norm::H1));
            ssup = std::max(ssup, norm(g, s.sigma));
        }
        const Field mu0 = res.trajectory.front().mu;
        const double init_h1 = norm(g, Field(r * mu0), Norm::H1);
        ModelParams limit = p;
        limit.delta = 0;
        const double mres = mu_limit_residual(g, res.final_state, limit);

        rep.table.rows.push_back({deltas[i], cauchy_y, cauchy_phi, std::sqrt(time_integral(j2)), jsup, dmu, init_h1,
                                  mres, ysup, ssup, time_integral(d2)});
        prev = res.trajectory;
        times = t;
    }

    auto cy = rep.column_values("cauchy_y");
    cy.erase(cy.begin());
    rep.verdicts.push_back(verdict("Cauchy differences decreasing", strictly_decreasing(cy), Outcome::inconclusive,
                                   "L2(0,T;L2) differences of y " + list(cy)));
    const auto flux = rep.column_values("flux_l2l2");
    const double fmax = *std::max_element(flux.begin(), flux.end());
    const double fmed = median(flux);
    rep.verdicts.push_back(verdict("flux bounded", fmax <= 2 * fmed, Outcome::inconclusive,
                                   "||J||_L2L2 " + list(flux) + ", max " + fmt(fmax) + " vs 2x median " +
                                       fmt(2 * fmed)));
    const auto init = rep.column_values("init_h1");
    rep.verdicts.push_back(verdict("initial datum consistency", strictly_decreasing(init), Outcome::inconclusive,
                                   "||(delta/gamma) mu(0)||_H1 " + list(init)));
    const auto dmu = rep.column_values("delta_mu2");
    const double dmax = *std::max_element(dmu.begin(), dmu.end());
    rep.verdicts.push_back(verdict("sqrt(delta) mu bounded", dmax <= 2 * dmu.front(), Outcome::inconclusive,
                                   "sup_t delta ||mu||^2 " + list(dmu) + " does not grow as delta decreases"));
    return rep;
}

StudyReport lemma_a1_study(const CosineBasis& basis, const Field& f, const Field& g, const ScalarMap& h,
                           const std::vector<double>& deltas)
{
    check_sequence(deltas, "delta");
    const Grid& grid = basis.grid();
    StudyReport rep;
    rep.name = "lemma-a1";
    rep.table.columns = {"delta",    "h1_error", "ratio",    "norm_v2",  "bound",   "bound_printed",
                         "est1_lhs", "est1_rhs", "est2_lhs", "est2_rhs", "residual"};
    bool bounds_ok = true;
    double prev = nan;
    for (double d : deltas) {
        const LemmaA1Result r = lemma_a1_solve(basis, f, g, h, d);
        const double err = norm(grid, Field(r.u - f), Norm::H1);
        const double slack = 1e-12 * (1 + r.bound);
        if (r.norm_v2 > r.bound + slack || r.est1_lhs > r.est1_rhs + slack || r.est2_lhs > r.est2_rhs + slack)
            bounds_ok = false;
        rep.table.rows.push_back({d, err, prev / err, r.norm_v2, r.bound, r.bound_printed, r.est1_lhs, r.est1_rhs,
                                  r.est2_lhs, r.est2_rhs, r.residual});
        prev = err;
    }
    rep.verdicts.push_back(verdict("a-priori bounds", bounds_ok, Outcome::fail,
                                   "||u||_V^2 <= (||f||_V^2 + 2 delta ||g||^2 + delta k2 |Omega|)/c_delta for every "
                                   "delta"));
    const auto err = rep.column_values("h1_error");
    auto ratios = rep.column_values("ratio");
    ratios.erase(ratios.begin());
    const bool halves = std::all_of(ratios.begin(), ratios.end(),
                                    [&](double q) { return std::abs(q - 2.0) <= 0.2; });
    rep.verdicts.push_back(verdict("first order in delta", halves, Outcome::inconclusive,
                                   "error ratios per halving " + list(ratios) + " (expected 2 +- 10%)"));
    rep.verdicts.push_back(verdict("u -> f in H1", strictly_decreasing(err), Outcome::inconclusive,
                                   "H1 errors " + list(err)));
    return rep;
}

StudyReport lemma_a1_study(const StudyConfig& study)
{
    const Grid grid(study.lemma_cells, study.lemma_length);
    const CosineBasis basis(grid);
    const double pi = std::numbers::pi;
    const double len = study.lemma_length;
    const Field f = grid.sample([&](double x, double) { return std::cos(pi * x / len); });
    const Field g = grid.sample([&](double x, double) { return study.lemma_g * std::cos(2 * pi * x / len); });
    ScalarMap h = ScalarMap::zero();
    if (study.lemma_nonlinearity == "tanh") {
        h.value = [](double s) { return std::tanh(s); };
        h.derivative = [](double s) {
            const double c = std::cosh(s);
            return 1.0 / (c * c);
        };
        h.k1 = 1;
        h.k3 = 1;
    } else if (study.lemma_nonlinearity != "zero") {
        throw ParamError("unknown lemma nonlinearity '" + study.lemma_nonlinearity + "'");
    }
    return lemma_a1_study(basis, f, g, h, study.lemma_deltas);
}

} // namespace relaxch
