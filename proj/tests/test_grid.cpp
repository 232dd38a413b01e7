#include "oracles.hpp"

#include <relaxch/grid.hpp>

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace relaxch;
using Catch::Approx;
using std::numbers::pi;

namespace {

std::vector<Grid> small_grids() { return {Grid(8, 1.0), Grid(8, 2.5), Grid(8, 8, 1.0, 1.0), Grid(8, 6, 1.0, 0.7)}; }

double max_abs(const Field& f) { return f.abs().maxCoeff(); }

} // namespace

TEST_CASE("laplacian of constants and cosines", "[grid]")
{
    for (const Grid& g : small_grids()) CHECK(max_abs(laplacian(g, Field::Constant(g.size(), 3.0))) < 1e-12);
    for (int n : {32, 64, 128}) {
        const Grid g(n, 2.0);
        const Field f = g.sample([](double x, double) { return std::cos(pi * x / 2); });
        const Field err = laplacian(g, f) + (pi / 2) * (pi / 2) * f;
        CHECK(max_abs(err) < 0.1 * (pi / 2) * (pi / 2) * (pi / 2) * (pi / 2) * g.h(0) * g.h(0));
    }
}

TEST_CASE("operators match dense assembly", "[grid]")
{
    std::mt19937_64 rng(11);
    const ModelParams p = default_params();
    for (const Grid& g : small_grids())
        for (int trial = 0; trial < 10; ++trial) {
            const Field v = oracle::uniform(rng, g.size(), -1, 1);
            const Field phi = oracle::uniform(rng, g.size(), 0, 1);
            const Field mob = mobility(phi, p);
            const Eigen::VectorXd lap = oracle::laplacian(g) * v.matrix();
            const Eigen::VectorXd dmg = oracle::div_mobility_grad(g, mob) * v.matrix();
            CHECK((laplacian(g, v).matrix() - lap).lpNorm<Eigen::Infinity>() < 1e-10);
            CHECK((div_mobility_grad(g, mob, v).matrix() - dmg).lpNorm<Eigen::Infinity>() < 1e-10);
            CHECK((Eigen::MatrixXd(laplacian_matrix(g)) - oracle::laplacian(g)).norm() < 1e-10);
            CHECK((Eigen::MatrixXd(mobility_matrix(g, mob)) - oracle::div_mobility_grad(g, mob)).norm() < 1e-10);
            CHECK(dirichlet_form(g, v, mob) == Approx(oracle::dirichlet(g, v, mob)).epsilon(1e-12));
        }
}

TEST_CASE("unit mobility reduces to the laplacian", "[grid]")
{
    std::mt19937_64 rng(5);
    for (const Grid& g : small_grids()) {
        const Field v = oracle::uniform(rng, g.size(), -1, 1);
        CHECK(max_abs(div_mobility_grad(g, Field::Ones(g.size()), v) - laplacian(g, v)) < 1e-12);
        CHECK(max_abs(div_mobility_grad(g, v.abs(), Field::Constant(g.size(), 2.0))) < 1e-12);
    }
}

TEST_CASE("discrete conservation and symmetry", "[grid]")
{
    std::mt19937_64 rng(7);
    for (const Grid& g : small_grids())
        for (int trial = 0; trial < 20; ++trial) {
            const Field u = oracle::uniform(rng, g.size(), -1, 1);
            const Field v = oracle::uniform(rng, g.size(), -1, 1);
            const Field m = oracle::uniform(rng, g.size(), 0, 2);
            CHECK(std::abs(integrate(g, div_mobility_grad(g, m, v))) <= 1e-13 * (1 + norm(g, v)) / g.cell_volume());
            // Summation by parts: (div(m∇v), u) = −Σ m_f ∇v·∇u.
            const double lhs = inner(g, div_mobility_grad(g, m, v), u);
            const double rhs = inner(g, div_mobility_grad(g, m, u), v);
            CHECK(lhs == Approx(rhs).margin(1e-11));
            CHECK(inner(g, div_mobility_grad(g, m, v), v) == Approx(-dirichlet_form(g, v, m)).margin(1e-11));
        }
}

TEST_CASE("negative mobility is rejected", "[grid]")
{
    const Grid g(8, 1.0);
    Field m = Field::Ones(8);
    m[3] = -1e-3;
    CHECK_THROWS_AS(div_mobility_grad(g, m, Field::Zero(8)), DomainError);
}

TEST_CASE("integrals and norms", "[grid]")
{
    const Grid g(64, 64, 1.0, 1.0);
    CHECK(integrate(g, Field::Constant(g.size(), 2.5)) == Approx(2.5));
    const Field c = g.sample([](double x, double) { return std::cos(pi * x); });
    CHECK(std::abs(mean(g, c)) < 1e-15);
    for (int n : {32, 64, 128}) {
        const Grid g1(n, 1.0);
        const Field f = g1.sample([](double x, double) { return std::cos(pi * x); });
        CHECK(norm(g1, f) == Approx(std::sqrt(0.5)).margin(g1.h(0) * g1.h(0)));
    }
    CHECK(norm(g, Field::Constant(g.size(), 3.0), Norm::mean) == Approx(3.0));
    CHECK(norm(g, c, Norm::H1) > norm(g, c));
}

TEST_CASE("cosine basis round trip and symbol", "[grid]")
{
    std::mt19937_64 rng(13);
    for (const Grid& g : small_grids()) {
        const CosineBasis b(g);
        const Field f = oracle::uniform(rng, g.size(), -1, 1);
        CHECK(max_abs(b.inverse(b.forward(f)) - f) < 1e-13);
        CHECK(b.forward(f)[0] == Approx(mean(g, f)));
        // Every basis function is an eigenvector of the dense Laplacian.
        const Eigen::MatrixXd L = oracle::laplacian(g);
        for (int k = 0; k < g.size(); ++k) {
            Field e = Field::Zero(g.size());
            e[k] = 1;
            const Field w = b.inverse(e);
            CHECK((L * w.matrix() + b.symbol()[k] * w.matrix()).norm() < 1e-9 * (1 + b.symbol()[k]));
        }
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(-L).eigenvalues();
        std::vector<double> sym(b.symbol().begin(), b.symbol().end());
        std::sort(sym.begin(), sym.end());
        for (int k = 0; k < g.size(); ++k) CHECK(sym[k] == Approx(ev[k]).margin(1e-9));
    }
}

TEST_CASE("shifted solve inverts I - a laplacian", "[grid]")
{
    std::mt19937_64 rng(17);
    for (const Grid& g : small_grids()) {
        const CosineBasis b(g);
        const Field r = oracle::uniform(rng, g.size(), -1, 1);
        const Field u = b.shifted_solve(0.3, r);
        CHECK(max_abs(u - 0.3 * laplacian(g, u) - r) < 1e-12);
    }
}

TEST_CASE("Galerkin projection", "[grid]")
{
    std::mt19937_64 rng(19);
    for (const Grid& g : small_grids()) {
        const CosineBasis b(g);
        const Field f = oracle::uniform(rng, g.size(), -1, 1);
        CHECK(max_abs(b.project(f, g.size()) - f) < 1e-12);
        CHECK(max_abs(b.project(f, 1) - mean(g, f)) < 1e-13);
        for (int n : {2, 5, g.size() / 2, g.size() - 1}) {
            const Field pf = b.project(f, n);
            CHECK(dirichlet_form(g, Field(f - pf)) <= dirichlet_form(g, f) + 1e-12);
            CHECK(max_abs(b.project(pf, n) - pf) < 1e-12);
            for (int m : {1, n / 2, n}) CHECK(max_abs(b.project(pf, m) - b.project(f, m)) < 1e-12);
            // L² and H¹ projections coincide: f − Π f is orthogonal to W_n in both.
            for (int k = 0; k < n; ++k) {
                const Field w = b.scatter(Eigen::VectorXd::Unit(n, k));
                CHECK(std::abs(inner(g, Field(f - pf), w)) < 1e-12);
                CHECK(std::abs(inner(g, laplacian(g, Field(f - pf)), w)) < 1e-10);
            }
            const Eigen::VectorXd modes = b.gather(f, n);
            CHECK(max_abs(b.scatter(modes) - pf) < 1e-12);
        }
        const auto& ord = b.ordering();
        CHECK(ord.front() == 0);
    }
}
