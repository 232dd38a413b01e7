#include <relaxch/io.hpp>
#include <relaxch/stepper.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace relaxch {

Field reaction_source(const Field& phi, const Field& mu, const Field& sigma, const ModelParams& p)
{
    const Field y = phi - p.relax_ratio() * mu;
    return proliferation(phi, p) * (sigma + p.chi * (1.0 - y) - (mu + psi_plus(phi, 1, p)));
}

State initial_state(const Grid& g, const InitialConfig& init)
{
    State s;
    if (init.kind == "cosine") {
        const double pi = std::numbers::pi;
        const double k = init.wavenumber;
        s.phi = g.sample([&](double x, double y) {
            double v = std::cos(k * pi * x / g.length[0]);
            if (g.dim == 2) v *= std::cos(k * pi * y / g.length[1]);
            return init.phi_mean + init.amplitude * v;
        });
    } else if (init.kind == "disk") {
        const double cx = 0.5 * g.length[0];
        const double cy = 0.5 * g.length[1];
        s.phi = g.sample([&](double x, double y) {
            const double r = g.dim == 2 ? std::hypot(x - cx, y - cy) : std::abs(x - cx);
            return init.outside + (init.inside - init.outside) * 0.5 * (1 - std::tanh((r - init.radius) / init.width));
        });
    } else if (init.kind == "file") {
        const Snapshot snap = read_snapshot(init.file);
        if (!(snap.grid == g)) throw ParamError("initial snapshot grid does not match the configured grid");
        s.phi = snap.values;
    } else {
        throw ParamError("unknown initial data kind '" + init.kind + "'");
    }
    if (init.noise > 0) {
        std::mt19937_64 rng(init.seed);
        std::uniform_real_distribution<double> u(-init.noise, init.noise);
        for (auto& v : s.phi) v += u(rng);
    }
    s.phi = s.phi.max(init.phi_min).min(init.phi_max);
    s.sigma = Field::Constant(g.size(), init.sigma);
    s.mu = Field::Zero(g.size());
    return s;
}

Stepper::Stepper(const Grid& g, const ModelParams& p, std::optional<double> stabilization)
    : basis_(g), params_(p)
{
    if (stabilization) stab_ = *stabilization;
    else stab_ = p.delta > 0 ? p.gamma / p.delta : 0.0;
    if (stab_ < 0) throw ParamError("stabilization must be non-negative");
    eye_.resize(g.size(), g.size());
    eye_.setIdentity();
}

State Stepper::initialise(State s) const
{
    if (params_.delta > 0) s.mu = solve_initial_mu(basis_, s.phi, s.sigma, params_).mu;
    else s.mu = solve_mu(basis_, s.phi, s.sigma, params_).mu;
    return s;
}

State Stepper::step(const State& s, double dt)
{
    if (!(dt > 0)) throw ParamError("time step must be positive");
    const Grid& g = grid();
    const ModelParams& p = params_;

    const Field b = mobility(s.phi, p);
    const Field r1 = reaction_source(s.phi, s.mu, s.sigma, p);

    // (I − dt·div(c∇))φ⁺ = φ + dt·[div(b∇(μ − Sφ)) + R₁], c = bΨ″₊,ε(φ) + S·b.
    const Field c = b * (psi_plus(s.phi, 2, p) + stab_);
    const Eigen::SparseMatrix<double> a = eye_ - dt * mobility_matrix(g, c);
    if (!analysed_) {
        ldlt_.analyzePattern(a);
        analysed_ = true;
    }
    ldlt_.factorize(a);
    if (ldlt_.info() != Eigen::Success) throw NumericalError("phase-field system factorisation failed");
    const Field rhs = s.phi + dt * (div_mobility_grad(g, b, Field(s.mu - stab_ * s.phi)) + r1);
    State out;
    out.t = s.t + dt;
    out.phi = ldlt_.solve(rhs.matrix()).array();
    if (!out.phi.allFinite()) throw NumericalBlowup("phi became non-finite at t = " + std::to_string(out.t));

    // (I − dtΔ)σ⁺ = σ + dt(−χΔ(φ⁺ − (δ/γ)μ) − R₁).
    const Field ystar = out.phi - p.relax_ratio() * s.mu;
    const Field srhs = s.sigma + dt * (-p.chi * laplacian(g, ystar) - r1);
    out.sigma = helmholtz_solve(basis_, dt, srhs);
    if (!out.sigma.allFinite()) throw NumericalBlowup("sigma became non-finite at t = " + std::to_string(out.t));

    out.mu = solve_mu(basis_, out.phi, out.sigma, p, &s.mu).mu;
    if (!out.mu.allFinite()) throw NumericalBlowup("mu became non-finite at t = " + std::to_string(out.t));
    return out;
}

State step(const Grid& g, const State& s, double dt, const ModelParams& p)
{
    Stepper st(g, p);
    return st.step(s, dt);
}

namespace {

struct Advance {
    Stepper& stepper;
    const TimeConfig& time;
    int rejected = 0;
    int steps = 0;

    // Steps from s over dt, splitting into halves while the energy rises by
    // more than the tolerance.
    State operator()(const State& s, double dt, double energy, int depth)
    {
        State next = stepper.step(s, dt);
        const double e1 = free_energy(stepper.grid(), next, stepper.params());
        const bool rise = e1 - energy > time.energy_tol * (1 + std::abs(energy));
        if (!time.adaptive || !rise) {
            ++steps;
            return next;
        }
        if (depth >= time.max_halvings)
            throw StepRejected("energy increased by " + std::to_string(e1 - energy) + " at t = " +
                               std::to_string(s.t) + " after " + std::to_string(depth) + " halvings");
        ++rejected;
        State half = (*this)(s, 0.5 * dt, energy, depth + 1);
        const double eh = free_energy(stepper.grid(), half, stepper.params());
        return (*this)(half, 0.5 * dt, eh, depth + 1);
    }
};

void check_initial(const Grid& g, const State& s, const ModelParams& p)
{
    if ((s.phi < 0).any() || (s.phi >= 1).any()) throw ParamError("initial phi must lie in [0, 1)");
    ModelParams exact = p;
    exact.eps_reg = 0;
    const double psi0 = integrate(g, s.phi.unaryExpr([&](double v) { return psi(v, 0, exact); }));
    if (!std::isfinite(psi0)) throw ParamError("Psi(phi0) is not integrable");
    if (!std::isfinite(entropy_functional(g, s.phi, p))) throw ParamError("eta(phi0) is not integrable");
}

} // namespace

RunResult run(const RunConfig& config, const RunObserver& observer)
{
    const Grid& g = config.grid;
    g.check();
    const ModelParams& p = config.params;
    const TimeConfig& time = config.time;
    if (!(time.dt > 0)) throw ParamError("dt must be positive");
    if (!(time.t_end >= 0)) throw ParamError("t_end must be non-negative");
    if (time.cadence < 1) throw ParamError("cadence must be at least 1");

    RunResult result;
    result.validation = validate_params(p);
    if (!result.validation.ok() && !config.force) {
        std::string ids;
        for (const auto& id : result.validation.failures()) ids += (ids.empty() ? "" : ", ") + id;
        throw ParamError("assumptions violated: " + ids);
    }

    Stepper stepper(g, p, time.stabilization);
    State state = initial_state(g, config.initial);
    check_initial(g, state, p);
    state = stepper.initialise(std::move(state));

    const CoercivityConstants coer = coercivity_constants(p, result.validation.constants);
    const double s0 = entropy_functional(g, state.phi, p);
    double e0 = free_energy(g, state, p);
    const EntropyBoundConstants ebc = entropy_bound_constants(g, p, result.validation, time.t_end);
    const double entropy_rhs = s0 + ebc.c1 * e0 + ebc.c2;
    double entropy_integral = 0;

    auto make_record = [&](const State& s) {
        DiagnosticsRecord r = evaluate(g, s, p);
        r.coercivity_margin = r.energy - coercivity_lower_bound(g, s, p, coer);
        r.entropy_lhs = r.entropy + entropy_integral;
        r.entropy_rhs = entropy_rhs;
        return r;
    };
    auto emit = [&](const State& s, DiagnosticsRecord r) {
        if (!result.records.empty()) r.energy_residual = energy_balance_residual(result.records.back(), r);
        result.records.push_back(r);
        if (config.keep_trajectory) result.trajectory.push_back(s);
        if (observer) observer(s, r);
    };
    emit(state, make_record(state));

    const long n_steps = time.t_end > 0 ? std::max(1L, std::lround(std::ceil(time.t_end / time.dt - 1e-9))) : 0;
    Advance advance{stepper, time};
    double energy = e0;
    for (long k = 1; k <= n_steps; ++k) {
        const double target = k == n_steps ? time.t_end : k * time.dt;
        const double dt = target - state.t;
        state = advance(state, dt, energy, 0);
        state.t = target;
        energy = free_energy(g, state, p);

        const Field y = relaxed_phase(state, p);
        const Field ly = laplacian(g, y);
        entropy_integral += dt * (0.5 * p.gamma * inner(g, ly, ly) + p.relax_ratio() * dirichlet_form(g, state.mu) +
                                  dirichlet_form(g, state.phi, psi_plus(state.phi, 2, p)));
        if (k % time.cadence == 0 || k == n_steps) emit(state, make_record(state));
    }
    result.steps = advance.steps;
    result.rejected_steps = advance.rejected;
    result.final_state = state;
    return result;
}

} // namespace relaxch
