#include <relaxch/grid.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace relaxch {

void Grid::check() const
{
    if (dim != 1 && dim != 2) throw ParamError("grid dimension must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        if (n[a] < 4) throw ParamError("grid needs at least 4 cells per axis");
        if (!(length[a] > 0)) throw ParamError("grid lengths must be positive");
    }
}

void require_finite(const Field& f, const char* what)
{
    if (!f.allFinite()) throw NumericalError(std::string("non-finite values in ") + what);
}

namespace {

void check_size(const Grid& g, const Field& f)
{
    if (f.size() != g.size()) throw ParamError("field size does not match grid");
}

// Adds the divergence of the face flux F (flux at face = value) into out.
void add_divergence(const Grid& g, const FaceField& flux, Field& out)
{
    const int n1 = g.cells(0);
    const int n2 = g.cells(1);
    const double h0 = g.h(0);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i + 1 < n1; ++i) {
            const double f = flux.axis[0][i + (n1 - 1) * j] / h0;
            out[g.index(i, j)] += f;
            out[g.index(i + 1, j)] -= f;
        }
    if (g.dim == 2) {
        const double h1 = g.h(1);
        for (int j = 0; j + 1 < n2; ++j)
            for (int i = 0; i < n1; ++i) {
                const double f = flux.axis[1][i + n1 * j] / h1;
                out[g.index(i, j)] += f;
                out[g.index(i, j + 1)] -= f;
            }
    }
}

} // namespace

FaceField face_gradient(const Grid& g, const Field& v)
{
    check_size(g, v);
    const int n1 = g.cells(0);
    const int n2 = g.cells(1);
    FaceField out;
    out.axis[0].resize((n1 - 1) * n2);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i + 1 < n1; ++i)
            out.axis[0][i + (n1 - 1) * j] = (v[g.index(i + 1, j)] - v[g.index(i, j)]) / g.h(0);
    if (g.dim == 2) {
        out.axis[1].resize(n1 * (n2 - 1));
        for (int j = 0; j + 1 < n2; ++j)
            for (int i = 0; i < n1; ++i)
                out.axis[1][i + n1 * j] = (v[g.index(i, j + 1)] - v[g.index(i, j)]) / g.h(1);
    }
    return out;
}

FaceField face_mean(const Grid& g, const Field& c)
{
    check_size(g, c);
    const int n1 = g.cells(0);
    const int n2 = g.cells(1);
    FaceField out;
    out.axis[0].resize((n1 - 1) * n2);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i + 1 < n1; ++i)
            out.axis[0][i + (n1 - 1) * j] = 0.5 * (c[g.index(i + 1, j)] + c[g.index(i, j)]);
    if (g.dim == 2) {
        out.axis[1].resize(n1 * (n2 - 1));
        for (int j = 0; j + 1 < n2; ++j)
            for (int i = 0; i < n1; ++i)
                out.axis[1][i + n1 * j] = 0.5 * (c[g.index(i, j + 1)] + c[g.index(i, j)]);
    }
    return out;
}

Field laplacian(const Grid& g, const Field& f)
{
    require_finite(f, "laplacian input");
    FaceField flux = face_gradient(g, f);
    Field out = Field::Zero(g.size());
    add_divergence(g, flux, out);
    return out;
}

Field div_mobility_grad(const Grid& g, const Field& mob, const Field& v)
{
    require_finite(mob, "mobility");
    require_finite(v, "div_mobility_grad input");
    if ((mob < 0).any()) throw DomainError("negative mobility");
    FaceField flux = face_gradient(g, v);
    const FaceField m = face_mean(g, mob);
    for (int a = 0; a < g.dim; ++a) flux.axis[a] *= m.axis[a];
    Field out = Field::Zero(g.size());
    add_divergence(g, flux, out);
    return out;
}

double face_integral(const Grid& g, const FaceField& f)
{
    double s = 0;
    for (int a = 0; a < g.dim; ++a) s += f.axis[a].sum();
    return s * g.cell_volume();
}

double dirichlet_form(const Grid& g, const Field& v, const Field& weight)
{
    FaceField grad = face_gradient(g, v);
    for (int a = 0; a < g.dim; ++a) grad.axis[a] = grad.axis[a].square();
    if (weight.size() > 0) {
        const FaceField w = face_mean(g, weight);
        for (int a = 0; a < g.dim; ++a) grad.axis[a] *= w.axis[a];
    }
    return face_integral(g, grad);
}

double integrate(const Grid& g, const Field& f)
{
    check_size(g, f);
    return f.sum() * g.cell_volume();
}

double mean(const Grid& g, const Field& f) { return integrate(g, f) / g.volume(); }

double inner(const Grid& g, const Field& a, const Field& b)
{
    check_size(g, a);
    check_size(g, b);
    return (a * b).sum() * g.cell_volume();
}

double norm(const Grid& g, const Field& f, Norm kind)
{
    switch (kind) {
    case Norm::L2: return std::sqrt(inner(g, f, f));
    case Norm::H1: return std::sqrt(inner(g, f, f) + dirichlet_form(g, f));
    default: return mean(g, f);
    }
}

Eigen::SparseMatrix<double> mobility_matrix(const Grid& g, const Field& mob)
{
    check_size(g, mob);
    if ((mob < 0).any()) throw DomainError("negative mobility");
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(5 * g.size());
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(g.size());
    auto couple = [&](int p, int q, double c) {
        t.emplace_back(p, q, c);
        t.emplace_back(q, p, c);
        diag[p] -= c;
        diag[q] -= c;
    };
    const int n1 = g.cells(0);
    const int n2 = g.cells(1);
    const double w0 = 1.0 / (g.h(0) * g.h(0));
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i + 1 < n1; ++i) {
            const int p = g.index(i, j);
            const int q = g.index(i + 1, j);
            couple(p, q, 0.5 * (mob[p] + mob[q]) * w0);
        }
    if (g.dim == 2) {
        const double w1 = 1.0 / (g.h(1) * g.h(1));
        for (int j = 0; j + 1 < n2; ++j)
            for (int i = 0; i < n1; ++i) {
                const int p = g.index(i, j);
                const int q = g.index(i, j + 1);
                couple(p, q, 0.5 * (mob[p] + mob[q]) * w1);
            }
    }
    for (int p = 0; p < g.size(); ++p) t.emplace_back(p, p, diag[p]);
    Eigen::SparseMatrix<double> m(g.size(), g.size());
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Eigen::SparseMatrix<double> laplacian_matrix(const Grid& g)
{
    return mobility_matrix(g, Field::Ones(g.size()));
}

CosineBasis::CosineBasis(const Grid& g) : grid_(g)
{
    grid_.check();
    const double pi = std::numbers::pi;
    for (int a = 0; a < 2; ++a) {
        const int n = grid_.cells(a);
        fwd_[a].resize(n, n);
        inv_[a].resize(n, n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                const double c = std::cos(k * pi * (i + 0.5) / n);
                inv_[a](i, k) = c;
                fwd_[a](k, i) = (k == 0 ? 1.0 : 2.0) * c / n;
            }
    }

    const int n1 = grid_.cells(0);
    const int n2 = grid_.cells(1);
    symbol_.resize(size());
    std::vector<std::tuple<double, int, int, int>> keys;
    keys.reserve(size());
    for (int k2 = 0; k2 < n2; ++k2)
        for (int k1 = 0; k1 < n1; ++k1) {
            const int idx = k1 + n1 * k2;
            double s = 0;
            double lam = 1;
            for (int a = 0; a < grid_.dim; ++a) {
                const int k = a == 0 ? k1 : k2;
                const double sn = std::sin(k * pi / (2.0 * grid_.n[a]));
                s += 4.0 / (grid_.h(a) * grid_.h(a)) * sn * sn;
                const double kc = k * pi / grid_.length[a];
                lam += kc * kc;
            }
            symbol_[idx] = s;
            keys.emplace_back(lam, k1, k2, idx);
        }
    std::sort(keys.begin(), keys.end());
    order_.reserve(size());
    for (const auto& key : keys) order_.push_back(std::get<3>(key));
}

Field CosineBasis::forward(const Field& f) const
{
    if (f.size() != size()) throw ParamError("field size does not match basis");
    const int n1 = grid_.cells(0);
    const int n2 = grid_.cells(1);
    Eigen::Map<const Eigen::MatrixXd> fm(f.data(), n1, n2);
    Field out(size());
    Eigen::Map<Eigen::MatrixXd> cm(out.data(), n1, n2);
    if (grid_.dim == 1) cm.noalias() = fwd_[0] * fm;
    else cm.noalias() = fwd_[0] * fm * fwd_[1].transpose();
    return out;
}

Field CosineBasis::inverse(const Field& c) const
{
    if (c.size() != size()) throw ParamError("coefficient size does not match basis");
    const int n1 = grid_.cells(0);
    const int n2 = grid_.cells(1);
    Eigen::Map<const Eigen::MatrixXd> cm(c.data(), n1, n2);
    Field out(size());
    Eigen::Map<Eigen::MatrixXd> fm(out.data(), n1, n2);
    if (grid_.dim == 1) fm.noalias() = inv_[0] * cm;
    else fm.noalias() = inv_[0] * cm * inv_[1].transpose();
    return out;
}

Eigen::ArrayXd CosineBasis::mask(int n) const
{
    if (n < 0 || n > size()) throw ParamError("mode count out of range");
    Eigen::ArrayXd m = Eigen::ArrayXd::Zero(size());
    for (int i = 0; i < n; ++i) m[order_[i]] = 1.0;
    return m;
}

Field CosineBasis::project(const Field& f, int n) const
{
    if (n == size()) return f;
    return inverse(forward(f) * mask(n));
}

Eigen::VectorXd CosineBasis::gather(const Field& f, int n) const
{
    if (n < 0 || n > size()) throw ParamError("mode count out of range");
    const Field c = forward(f);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = c[order_[i]];
    return out;
}

Field CosineBasis::scatter(const Eigen::VectorXd& modes) const
{
    if (modes.size() > size()) throw ParamError("too many modes");
    Field c = Field::Zero(size());
    for (int i = 0; i < modes.size(); ++i) c[order_[i]] = modes[i];
    return inverse(c);
}

Field CosineBasis::shifted_solve(double a, const Field& rhs) const
{
    return inverse(forward(rhs) / (1.0 + a * symbol_));
}

} // namespace relaxch
