#pragma once

// Reference implementations for small grids. They are assembled from scratch
// (dense matrices, closed-form pointwise formulas, quadrature) and share no
// code with the library operators they are compared against.

#include <relaxch/grid.hpp>
#include <relaxch/model.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

using relaxch::Field;
using relaxch::Grid;
using relaxch::ModelParams;

inline int cell(const Grid& g, int i, int j) { return i + g.cells(0) * j; }

// Laplacian by the ghost-cell stencil f(−1) = f(0), f(N) = f(N−1).
inline Eigen::MatrixXd laplacian(const Grid& g)
{
    const int n = g.size();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < g.cells(1); ++j)
        for (int i = 0; i < g.cells(0); ++i) {
            const int c = cell(g, i, j);
            for (int a = 0; a < g.dim; ++a) {
                const int k = a == 0 ? i : j;
                const int m = g.cells(a);
                const double w = 1.0 / (g.h(a) * g.h(a));
                const int lo = k > 0 ? k - 1 : k;
                const int hi = k + 1 < m ? k + 1 : k;
                const int clo = a == 0 ? cell(g, lo, j) : cell(g, i, lo);
                const int chi = a == 0 ? cell(g, hi, j) : cell(g, i, hi);
                L(c, clo) += w;
                L(c, chi) += w;
                L(c, c) -= 2 * w;
            }
        }
    return L;
}

// Interior-face difference quotients D (faces × cells) and face averages A.
struct Faces {
    Eigen::MatrixXd d;
    Eigen::MatrixXd avg;
};

inline Faces faces(const Grid& g)
{
    std::vector<std::array<int, 3>> list;  // (lower cell, upper cell, axis)
    for (int j = 0; j < g.cells(1); ++j)
        for (int i = 0; i < g.cells(0); ++i) {
            if (i + 1 < g.cells(0)) list.push_back({cell(g, i, j), cell(g, i + 1, j), 0});
            if (g.dim == 2 && j + 1 < g.cells(1)) list.push_back({cell(g, i, j), cell(g, i, j + 1), 1});
        }
    Faces f;
    f.d = Eigen::MatrixXd::Zero(list.size(), g.size());
    f.avg = Eigen::MatrixXd::Zero(list.size(), g.size());
    for (std::size_t r = 0; r < list.size(); ++r) {
        const auto [lo, hi, a] = list[r];
        f.d(r, lo) = -1.0 / g.h(a);
        f.d(r, hi) = 1.0 / g.h(a);
        f.avg(r, lo) = 0.5;
        f.avg(r, hi) = 0.5;
    }
    return f;
}

inline Eigen::MatrixXd div_mobility_grad(const Grid& g, const Field& mob)
{
    const Faces f = faces(g);
    const Eigen::VectorXd m = f.avg * mob.matrix();
    return -f.d.transpose() * m.asDiagonal() * f.d;
}

// Σ_faces w |∇v|² h^d.
inline double dirichlet(const Grid& g, const Field& v, const Field& weight)
{
    const Faces f = faces(g);
    const Eigen::VectorXd grad = f.d * v.matrix();
    const Eigen::VectorXd w = f.avg * weight.matrix();
    return (w.array() * grad.array().square()).sum() * g.cell_volume();
}

inline double dirichlet(const Grid& g, const Field& v) { return dirichlet(g, v, Field::Ones(g.size())); }

inline Field helmholtz(const Grid& g, double delta, const Field& rhs)
{
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(g.size(), g.size()) - delta * laplacian(g);
    return A.partialPivLu().solve(rhs.matrix()).array();
}

// Closed forms valid on [ε, 1−ε] for Ψ₊ and on [−margin, 1+margin] for Ψ₋.
inline double psi_plus(double s, const ModelParams& p)
{
    const double a = 1 - p.s_star;
    return -a * std::log(1 - s) - s * s * s / 3 + p.kappa;
}
inline double dpsi_plus(double s, const ModelParams& p) { return (1 - p.s_star) / (1 - s) - s * s; }
inline double d2psi_plus(double s, const ModelParams& p) { return (1 - p.s_star) / ((1 - s) * (1 - s)) - 2 * s; }
inline double psi_minus(double s, const ModelParams& p) { return -(1 - p.s_star) * (0.5 * s * s + s); }
inline double dpsi_minus(double s, const ModelParams& p) { return -(1 - p.s_star) * (s + 1); }
inline double mob(double s) { return s * (1 - s) * (1 - s); }

template <class F>
Field map(const Field& x, F f)
{
    Field out(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) out[k] = f(x[k]);
    return out;
}

// μ from −δΔμ + μ = −γΔφ + Ψ′₋(φ − rμ) − χσ by dense Newton, with the
// quadratic core of Ψ₋ (so one Newton step is exact, the rest confirm it).
inline Field solve_mu(const Grid& g, const Field& phi, const Field& sigma, const ModelParams& p)
{
    const Eigen::MatrixXd L = laplacian(g);
    const int n = g.size();
    const double r = p.delta / p.gamma;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
    for (int it = 0; it < 20; ++it) {
        const Eigen::VectorXd y = phi.matrix() - r * mu;
        const Eigen::VectorXd F = mu - p.delta * L * mu + p.gamma * L * phi.matrix() -
                                  map(y.array(), [&](double s) { return dpsi_minus(s, p); }).matrix() +
                                  p.chi * sigma.matrix();
        const Eigen::MatrixXd J = I - p.delta * L - r * (1 - p.s_star) * I;
        const Eigen::VectorXd step = J.partialPivLu().solve(F);
        mu -= step;
        if (step.norm() < 1e-15 * (1 + mu.norm())) break;
    }
    return mu.array();
}

inline double free_energy(const Grid& g, const Field& phi, const Field& mu, const Field& sigma,
                          const ModelParams& p)
{
    const double r = p.delta / p.gamma;
    const Field y = phi - r * mu;
    double e = 0;
    for (Eigen::Index k = 0; k < phi.size(); ++k)
        e += (psi_plus(phi[k], p) + 0.5 * r * mu[k] * mu[k] + psi_minus(y[k], p) + 0.5 * sigma[k] * sigma[k] +
              p.chi * sigma[k] * (1 - y[k])) *
             g.cell_volume();
    return e + 0.5 * p.gamma * dirichlet(g, y);
}

struct Dissipations {
    double d1, d2, d3;
};

inline Dissipations dissipations(const Grid& g, const Field& phi, const Field& mu, const Field& sigma,
                                 const ModelParams& p)
{
    const Field y = phi - (p.delta / p.gamma) * mu;
    const Field w = mu + map(phi, [&](double s) { return dpsi_plus(s, p); });
    const Field z = sigma + p.chi * (1 - y);
    const Field b = map(phi, mob);
    double d3 = 0;
    for (Eigen::Index k = 0; k < phi.size(); ++k) {
        const double P = p.p0 * std::pow(b[k], p.prolif_exponent);
        d3 += P * (z[k] - w[k]) * (z[k] - w[k]) * g.cell_volume();
    }
    return {dirichlet(g, w, b), dirichlet(g, z), d3};
}

inline double flux_norm(const Grid& g, const Field& phi, const Field& mu, const ModelParams& p)
{
    const Faces f = faces(g);
    const Field b = map(phi, mob);
    const Field c = map(phi, [&](double s) { return mob(s) * d2psi_plus(s, p); });
    const Eigen::VectorXd J = (f.avg * b.matrix()).cwiseProduct(f.d * mu.matrix()) +
                              (f.avg * c.matrix()).cwiseProduct(f.d * phi.matrix());
    return std::sqrt(J.squaredNorm() * g.cell_volume());
}

// ∫_a^b f by composite 5-point Gauss–Legendre.
inline double quadrature(const std::function<double(double)>& f, double a, double b, int panels = 400)
{
    static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                0.9061798459386640};
    static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                                0.2369268850561891};
    const double h = (b - a) / panels;
    double s = 0;
    for (int k = 0; k < panels; ++k) {
        const double c = a + (k + 0.5) * h;
        for (int q = 0; q < 5; ++q) s += w[q] * f(c + 0.5 * h * x[q]);
    }
    return 0.5 * h * s;
}

// η(s) = ∫_{1/2}^{s} (s − r)/b(r) dr and η′(s) = ∫_{1/2}^{s} 1/b(r) dr.
inline double eta(double s)
{
    return quadrature([s](double r) { return (s - r) / mob(r); }, 0.5, s);
}
inline double deta(double s)
{
    return quadrature([](double r) { return 1 / mob(r); }, 0.5, s);
}

// Dense damped Newton for −δΔu + u = f + δg + δh(u).
inline Field lemma_a1(const Grid& g, const Field& f, const Field& gg, double delta,
                      const std::function<double(double)>& h, const std::function<double(double)>& dh)
{
    const int n = g.size();
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - delta * laplacian(g);
    auto residual = [&](const Eigen::VectorXd& u) {
        return Eigen::VectorXd(A * u - f.matrix() - delta * gg.matrix() -
                               delta * map(u.array(), h).matrix());
    };
    Eigen::VectorXd u = f.matrix();
    Eigen::VectorXd F = residual(u);
    for (int it = 0; it < 100 && F.norm() > 1e-15; ++it) {
        const Eigen::MatrixXd J = A - delta * Eigen::MatrixXd(map(u.array(), dh).matrix().asDiagonal());
        const Eigen::VectorXd step = J.partialPivLu().solve(F);
        double t = 1;
        Eigen::VectorXd next = u - step;
        while (residual(next).norm() > (1 - 1e-4 * t) * F.norm() && t > 1e-6) {
            t *= 0.5;
            next = u - t * step;
        }
        u = next;
        F = residual(u);
    }
    return u.array();
}

inline Field uniform(std::mt19937_64& rng, int n, double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    Field f(n);
    for (auto& v : f) v = d(rng);
    return f;
}

} // namespace oracle
