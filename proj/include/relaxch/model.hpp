#pragma once

#include <relaxch/errors.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <vector>

namespace relaxch {

// C² extension of the concave part outside [0,1]. Ψ″₋ is −(1−s*) on
// [−margin, 1+margin], ramps linearly to +far_curvature over ramp_width on
// both sides and stays constant beyond.
struct ConcaveExtension {
    double margin = 0.5;
    double ramp_width = 0.5;
    double far_curvature = 0.4;

    bool operator==(const ConcaveExtension&) const = default;
};

// Growth/coercivity constants of the extended Ψ₋:
//   |Ψ′₋(s)| ≤ c0|s| + c0,  Ψ₋(s) ≥ c1 s² − c2,  lip = ‖Ψ″₋‖∞.
struct ExtensionConstants {
    double c0 = 0;
    double c1 = 0;
    double c2 = 0;
    double lip = 0;
};

struct ModelParams {
    double gamma = 0.04;
    double delta = 1e-3;
    double chi = 0.2;
    double s_star = 0.6;
    double p0 = 0.5;
    double eps_reg = 0.05;
    double eps0 = 0.25;
    double kappa = 0.0;
    int prolif_exponent = 2;
    ConcaveExtension extension{};

    double well_slope() const { return 1.0 - s_star; }
    double relax_ratio() const { return delta / gamma; }

    bool operator==(const ModelParams&) const = default;
};

constexpr double max_convex_well = 0.7;

namespace detail {

inline void check_order(int order)
{
    if (order < 0 || order > 2) throw ParamError("derivative order must be 0, 1 or 2");
}

// Second-order Taylor continuation of f at x0 evaluated at s.
template <std::floating_point T>
T taylor_patch(T s, T x0, T f0, T f1, T f2, int order)
{
    const T d = s - x0;
    switch (order) {
    case 0: return f0 + f1 * d + T(0.5) * f2 * d * d;
    case 1: return f1 + f2 * d;
    default: return f2;
    }
}

template <std::floating_point T>
T psi_plus_exact(T s, int order, const ModelParams& p)
{
    const T a = T(p.well_slope());
    const T r = 1 - s;
    switch (order) {
    case 0: return -a * std::log(r) - s * s * s / 3 + T(p.kappa);
    case 1: return a / r - s * s;
    default: return a / (r * r) - 2 * s;
    }
}

template <std::floating_point T>
T entropy_exact(T s, int order)
{
    const T r = 1 - s;
    switch (order) {
    case 0: return s * std::log(s / r) - 2 * s + 1;
    case 1: return std::log(s / r) + 1 / r - 2;
    default: return 1 / (s * r * r);
    }
}

} // namespace detail

/// Convex part Ψ₊ of the single-well potential, or its C² regularisation
/// Ψ₊,ε (quadratic Taylor patches outside [ε, 1−ε]) when eps_reg > 0.
template <std::floating_point T>
T psi_plus(T s, int order, const ModelParams& p)
{
    detail::check_order(order);
    if (p.s_star > max_convex_well || p.s_star <= 0)
        throw ParamError("s_star must lie in (0, 0.7] for a convex Psi_+");
    const T eps = T(p.eps_reg);
    if (eps <= 0) {
        if (!(s < 1)) throw DomainError("Psi_+ is singular for s >= 1");
        return detail::psi_plus_exact(s, order, p);
    }
    if (s < eps || s > 1 - eps) {
        const T x0 = s < eps ? eps : 1 - eps;
        return detail::taylor_patch(s, x0, detail::psi_plus_exact(x0, 0, p),
                                    detail::psi_plus_exact(x0, 1, p),
                                    detail::psi_plus_exact(x0, 2, p), order);
    }
    return detail::psi_plus_exact(s, order, p);
}

/// Concave part Ψ₋(s) = −(1−s*)(s²/2 + s), extended to the real line.
template <std::floating_point T>
T psi_minus(T s, int order, const ModelParams& p)
{
    detail::check_order(order);
    const T a = T(p.well_slope());
    const T m = T(p.extension.margin);
    const T w = T(p.extension.ramp_width);
    const T q = T(p.extension.far_curvature);
    auto core = [a](T x, int k) -> T {
        switch (k) {
        case 0: return -a * (x * x / 2 + x);
        case 1: return -a * (x + 1);
        default: return -a;
        }
    };
    const T lo = -m;
    const T hi = 1 + m;
    if (s >= lo && s <= hi) return core(s, order);

    // Parametrise by the outward distance t from the nearest core edge:
    // s = edge + sign·t, so d/dt = sign·d/ds.
    const bool right = s > hi;
    const T edge = right ? hi : lo;
    const T sign = right ? T(1) : T(-1);
    const T t = sign * (s - edge);
    const T v0 = core(edge, 0);
    const T d0 = sign * core(edge, 1);
    const T slope = (q + a) / w;

    T u0, u1, u2;
    if (t <= w) {
        u2 = -a + slope * t;
        u1 = d0 - a * t + slope * t * t / 2;
        u0 = v0 + d0 * t - a * t * t / 2 + slope * t * t * t / 6;
    } else {
        const T u1w = d0 - a * w + slope * w * w / 2;
        const T u0w = v0 + d0 * w - a * w * w / 2 + slope * w * w * w / 6;
        const T tt = t - w;
        u2 = q;
        u1 = u1w + q * tt;
        u0 = u0w + u1w * tt + q * tt * tt / 2;
    }
    switch (order) {
    case 0: return u0;
    case 1: return sign * u1;
    default: return u2;
    }
}

/// Full potential Ψ = Ψ₊ + Ψ₋ (regularised convex part when eps_reg > 0).
template <std::floating_point T>
T psi(T s, int order, const ModelParams& p)
{
    return psi_plus(s, order, p) + psi_minus(s, order, p);
}

/// Degenerate mobility b(s) = s(1−s)². With use_eps the argument is clamped
/// to [ε, 1−ε] (constant extension); otherwise the polynomial is evaluated.
template <std::floating_point T>
T mobility(T s, const ModelParams& p, bool use_eps = true)
{
    if (use_eps && p.eps_reg > 0) s = std::clamp(s, T(p.eps_reg), T(1 - p.eps_reg));
    const T r = 1 - s;
    return s * r * r;
}

/// Proliferation P(s) = P₀·b(s)^p, clamped like the mobility when use_eps.
template <std::floating_point T>
T proliferation(T s, const ModelParams& p, bool use_eps = true)
{
    const T b = mobility(s, p, use_eps);
    return T(p.p0) * (p.prolif_exponent == 1 ? b : b * b);
}

/// Entropy density η with b η″ = 1, η(1/2) = η′(1/2) = 0. For the default
/// mobility η(s) = s ln(s/(1−s)) − 2s + 1. The regularised η_ε replaces η
/// outside [ε, 1−ε] by its second-order Taylor patches.
template <std::floating_point T>
T entropy_density(T s, int order, const ModelParams& p, bool use_eps = true)
{
    detail::check_order(order);
    const T eps = T(p.eps_reg);
    if (!use_eps || eps <= 0) {
        if (!(s > 0 && s < 1)) throw DomainError("entropy density needs 0 < s < 1");
        return detail::entropy_exact(s, order);
    }
    if (s < eps || s > 1 - eps) {
        const T x0 = s < eps ? eps : 1 - eps;
        return detail::taylor_patch(s, x0, detail::entropy_exact(x0, 0),
                                    detail::entropy_exact(x0, 1),
                                    detail::entropy_exact(x0, 2), order);
    }
    return detail::entropy_exact(s, order);
}

// Element-wise versions over Eigen arrays.

template <class Derived>
Eigen::ArrayXd psi_plus(const Eigen::ArrayBase<Derived>& s, int order, const ModelParams& p)
{
    return s.derived().unaryExpr([&](double x) { return psi_plus(x, order, p); });
}

template <class Derived>
Eigen::ArrayXd psi_minus(const Eigen::ArrayBase<Derived>& s, int order, const ModelParams& p)
{
    return s.derived().unaryExpr([&](double x) { return psi_minus(x, order, p); });
}

template <class Derived>
Eigen::ArrayXd mobility(const Eigen::ArrayBase<Derived>& s, const ModelParams& p, bool use_eps = true)
{
    return s.derived().unaryExpr([&](double x) { return mobility(x, p, use_eps); });
}

template <class Derived>
Eigen::ArrayXd proliferation(const Eigen::ArrayBase<Derived>& s, const ModelParams& p, bool use_eps = true)
{
    return s.derived().unaryExpr([&](double x) { return proliferation(x, p, use_eps); });
}

template <class Derived>
Eigen::ArrayXd entropy_density(const Eigen::ArrayBase<Derived>& s, int order, const ModelParams& p,
                               bool use_eps = true)
{
    return s.derived().unaryExpr([&](double x) { return entropy_density(x, order, p, use_eps); });
}

/// Growth and coercivity constants of the extended Ψ₋, computed by grid
/// search on [−50, 50] (step 1e−3) with a 0.99 safety factor.
ExtensionConstants derive_extension_constants(const ModelParams& p);

/// κ making min over [0,1) of Ψ₊ equal to zero.
double normalized_kappa(double s_star);

/// Infimum over the real line of Ψ₊,ε (requires eps_reg > 0).
double psi_plus_eps_infimum(const ModelParams& p);

/// ModelParams with the documented defaults and normalised κ.
ModelParams default_params();

// Energy coercivity constants: α ∈ (0, 1/2) and β = c1 − χ²/(1−2α) > 0.
struct CoercivityConstants {
    double alpha = 0;
    double beta = 0;
    double constant = 0;  // c2 + χ²/(1−2α) + κ_ε (the |Ω|-multiplied offset)
};

CoercivityConstants coercivity_constants(const ModelParams& p, const ExtensionConstants& ext);

/// δ₀ = min{γ²/‖Ψ″₋‖²∞, 1/2}.
double delta_threshold(const ModelParams& p, const ExtensionConstants& ext);

struct AssumptionCheck {
    std::string id;
    bool passed = true;
    double value = 0;
    double bound = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<AssumptionCheck> checks;
    ExtensionConstants constants{};
    double delta0 = 0;
    double c3 = 0;
    double c4 = 0;
    double c5 = 0;

    bool ok() const;
    bool failed(const std::string& id) const;
    std::vector<std::string> failures() const;
    std::string to_string() const;
};

ValidationReport validate_params(const ModelParams& p);

} // namespace relaxch
