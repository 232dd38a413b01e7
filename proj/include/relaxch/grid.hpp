#pragma once

#include <relaxch/errors.hpp>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <vector>

namespace relaxch {

/// Cell values of a scalar field, x index fastest: value(i1, i2) = f[i1 + N1*i2].
using Field = Eigen::ArrayXd;

/// Cell-centred tensor grid on [0,L1] (x [0,L2]) with homogeneous Neumann
/// boundary conditions.
struct Grid {
    int dim = 2;
    std::array<int, 2> n{64, 64};
    std::array<double, 2> length{1.0, 1.0};

    Grid() = default;
    Grid(int cells, double len) : dim(1), n{cells, 1}, length{len, 1.0} {}
    Grid(int n1, int n2, double l1, double l2) : dim(2), n{n1, n2}, length{l1, l2} {}

    int cells(int axis) const { return axis < dim ? n[axis] : 1; }
    int size() const { return cells(0) * cells(1); }
    double h(int axis) const { return length[axis] / n[axis]; }
    double cell_volume() const { return dim == 1 ? h(0) : h(0) * h(1); }
    double volume() const { return dim == 1 ? length[0] : length[0] * length[1]; }
    double center(int axis, int i) const { return (i + 0.5) * h(axis); }
    int index(int i1, int i2 = 0) const { return i1 + cells(0) * i2; }

    // Samples f(x, y) at the cell centres.
    template <class F>
    Field sample(F&& f) const
    {
        Field out(size());
        for (int j = 0; j < cells(1); ++j)
            for (int i = 0; i < cells(0); ++i)
                out[index(i, j)] = f(center(0, i), dim == 2 ? center(1, j) : 0.0);
        return out;
    }

    void check() const;
    bool operator==(const Grid&) const = default;
};

/// Values on interior faces, one array per axis. Axis-0 face (i+½, j) has
/// index i + (N1−1)j, axis-1 face (i, j+½) has index i + N1 j. Boundary
/// faces carry zero flux and are not stored.
struct FaceField {
    std::array<Eigen::ArrayXd, 2> axis;
};

void require_finite(const Field& f, const char* what);

/// 3/5-point Laplacian with reflected ghost cells.
Field laplacian(const Grid& g, const Field& f);

/// div(m ∇v) in flux form with arithmetic-mean face mobility.
Field div_mobility_grad(const Grid& g, const Field& mob, const Field& v);

/// One-sided differences across interior faces, divided by h.
FaceField face_gradient(const Grid& g, const Field& v);

/// Arithmetic mean of the two adjacent cell values on each interior face.
FaceField face_mean(const Grid& g, const Field& c);

/// Face quadrature Σ_faces w·|∇v|²·h^d (w ≡ 1 if empty).
double dirichlet_form(const Grid& g, const Field& v, const Field& weight = Field());

/// Σ_faces f·h^d over both axes.
double face_integral(const Grid& g, const FaceField& f);

double integrate(const Grid& g, const Field& f);
double mean(const Grid& g, const Field& f);
double inner(const Grid& g, const Field& a, const Field& b);

enum class Norm { L2, H1, mean };
double norm(const Grid& g, const Field& f, Norm kind = Norm::L2);

/// Sparse matrix of v ↦ div(m∇v) (symmetric, negative semidefinite).
Eigen::SparseMatrix<double> mobility_matrix(const Grid& g, const Field& mob);

/// Sparse matrix of the Neumann Laplacian.
Eigen::SparseMatrix<double> laplacian_matrix(const Grid& g);

/// Discrete cosine basis of the Neumann grid Laplacian. Coefficients use the
/// same layout as Field; the constant coefficient equals the field mean.
class CosineBasis {
public:
    explicit CosineBasis(const Grid& g);

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.size(); }

    Field forward(const Field& f) const;
    Field inverse(const Field& c) const;

    /// Eigenvalues of −Δ_h, Σ_a (4/h_a²) sin²(k_a π / 2N_a), per coefficient.
    const Eigen::ArrayXd& symbol() const { return symbol_; }

    /// Coefficient indices sorted by 1 + Σ(k_a π/L_a)², ties lexicographic.
    const std::vector<int>& ordering() const { return order_; }

    /// Mask that keeps the n lowest modes.
    Eigen::ArrayXd mask(int n) const;

    /// Π^n: discrete L² projection onto the n lowest modes.
    Field project(const Field& f, int n) const;

    /// Coefficients of the n lowest modes, in ordering() order.
    Eigen::VectorXd gather(const Field& f, int n) const;
    Field scatter(const Eigen::VectorXd& modes) const;

    /// Solves (I + a·(−Δ_h)) u = rhs exactly in the basis.
    Field shifted_solve(double a, const Field& rhs) const;

private:
    Grid grid_;
    std::array<Eigen::MatrixXd, 2> fwd_;
    std::array<Eigen::MatrixXd, 2> inv_;
    Eigen::ArrayXd symbol_;
    std::vector<int> order_;
};

} // namespace relaxch
