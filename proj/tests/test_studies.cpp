#include <relaxch/studies.hpp>

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace relaxch;
using Catch::Approx;

namespace {

RunConfig small(int n, double t_end)
{
    RunConfig c;
    c.grid = Grid(n, n, 1.0, 1.0);
    c.time.t_end = t_end;
    c.time.cadence = 5;
    return c;
}

} // namespace

TEST_CASE("Dormand-Prince on a linear system", "[studies]")
{
    Eigen::VectorXd y(2);
    y << 1, 0;
    OdeOptions opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-12;
    dormand_prince([](double, const Eigen::VectorXd& v, Eigen::VectorXd& dv) { dv = Eigen::Vector2d(v[1], -v[0]); },
                   0.0, 2.0, y, opt, [](double, const Eigen::VectorXd&) {});
    CHECK(y[0] == Approx(std::cos(2.0)).margin(1e-9));
    CHECK(y[1] == Approx(-std::sin(2.0)).margin(1e-9));
}

TEST_CASE("Galerkin system with one mode is static", "[studies]")
{
    RunConfig c = small(8, 0.01);
    c.params.p0 = 0;
    const GalerkinResult r = galerkin_energy_check(c, 1);
    CHECK(r.max_balance_residual < 1e-13);
    CHECK(r.max_mean_drift < 1e-14);
    for (const auto& row : r.report.table.rows) CHECK(row[1] == Approx(r.energy0).epsilon(1e-14));
}

TEST_CASE("Galerkin energy identity with eight modes", "[studies]")
{
    RunConfig c = small(16, 0.01);
    c.initial.noise = 0.05;
    c.initial.seed = 1;
    const GalerkinResult r = galerkin_energy_check(c, 8);
    CHECK(r.max_balance_residual <= 1e-6 * (1 + std::abs(r.energy0)));
    CHECK(r.report.outcome() == Outcome::pass);
}

TEST_CASE("projected initial energy converges with n", "[studies]")
{
    RunConfig c = small(32, 0.0);
    c.initial.kind = "disk";
    c.initial.width = 0.05;
    const double full = galerkin_initial_energy(c, c.grid.size());
    std::vector<double> gaps;
    for (int n : {32, 64, 128, 256, 512}) gaps.push_back(std::abs(galerkin_initial_energy(c, n) - full));
    for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k] < gaps[k - 1]);
    CHECK(gaps.back() < 1e-2 * std::abs(full));
}

TEST_CASE("eps continuation bound", "[studies]")
{
    RunConfig c = small(16, 4e-3);
    c.initial.kind = "disk";
    c.initial.inside = 0.99;
    c.initial.phi_max = 0.99;
    c.initial.width = 0.02;
    const StudyReport r = eps_continuation(c, {0.1, 0.05});
    const auto over = r.column_values("max_overshoot_pos");
    const auto bound = r.column_values("bound");
    for (std::size_t k = 0; k < over.size(); ++k) CHECK(over[k] <= bound[k] + 1e-10);
    CHECK(r.outcome() != Outcome::fail);
    CHECK_THROWS_AS(eps_continuation(c, {0.05, 0.1}), ParamError);
}

TEST_CASE("delta continuation", "[studies]")
{
    RunConfig c = small(16, 4e-3);
    std::size_t seen = 0;
    const StudyReport r = delta_continuation(c, {4e-3, 2e-3, 1e-3}, [&](std::size_t, const RunConfig&, const RunResult&) { ++seen; });
    CHECK(seen == 3);
    CHECK(r.table.rows.size() == 3);
    const auto init = r.column_values("init_h1");
    CHECK(init[1] < init[0]);
    CHECK(init[2] < init[1]);
    CHECK_THROWS_AS(delta_continuation(c, {2e-2, 1e-3}), PreconditionError);
}

TEST_CASE("studies are deterministic", "[studies]")
{
    RunConfig c = small(8, 2e-3);
    c.initial.noise = 0.02;
    const StudyReport a = delta_continuation(c, {2e-3, 1e-3});
    const StudyReport b = delta_continuation(c, {2e-3, 1e-3});
    REQUIRE(a.table.rows.size() == b.table.rows.size());
    for (std::size_t i = 0; i < a.table.rows.size(); ++i)
        for (std::size_t j = 0; j < a.table.rows[i].size(); ++j) {
            const double x = a.table.rows[i][j], y = b.table.rows[i][j];
            CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
        }
}

TEST_CASE("lemma study halves the error", "[studies]")
{
    StudyConfig s;
    const StudyReport r = lemma_a1_study(s);
    const auto err = r.column_values("h1_error");
    const double lam = 4 * 256.0 * 256.0 * std::pow(std::sin(std::numbers::pi / 512), 2);
    const auto deltas = r.column_values("delta");
    const auto v2 = r.column_values("norm_v2");
    const auto bound = r.column_values("bound");
    for (std::size_t k = 0; k < err.size(); ++k) {
        const double dl = deltas[k] * lam;
        // ‖f‖_{H1} of the sampled cosine, from its discrete norms.
        const double fh1 = std::sqrt(0.5 * (1 + lam));
        CHECK(err[k] == Approx(dl / (1 + dl) * fh1).epsilon(1e-8));
        CHECK(v2[k] <= bound[k]);
    }
    CHECK(r.outcome() == Outcome::pass);
}
