#include <relaxch/model.hpp>

#include <cstdio>
#include <limits>
#include <sstream>

namespace relaxch {

namespace {

constexpr double coercivity_window = 50.0;
constexpr double coercivity_step = 1e-3;
constexpr double safety = 0.99;

template <class F>
double golden_minimize(F&& f, double lo, double hi, int iterations = 200)
{
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iterations && hi - lo > 1e-15; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({f1, f2, f(lo), f(hi)});
}

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

ExtensionConstants derive_extension_constants(const ModelParams& p)
{
    ExtensionConstants out;
    out.lip = std::max(p.well_slope(), p.extension.far_curvature);
    out.c1 = safety * p.extension.far_curvature / 4.0;

    const auto n = static_cast<int>(std::lround(2 * coercivity_window / coercivity_step));
    auto shifted = [&](double s) { return psi_minus(s, 0, p) - out.c1 * s * s; };
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    double growth = 0;
    for (int i = 0; i <= n; ++i) {
        const double s = -coercivity_window + i * coercivity_step;
        const double v = shifted(s);
        if (v < best) {
            best = v;
            best_i = i;
        }
        growth = std::max(growth, std::abs(psi_minus(s, 1, p)) / (1 + std::abs(s)));
    }
    const double lo = -coercivity_window + std::max(best_i - 1, 0) * coercivity_step;
    const double hi = -coercivity_window + std::min(best_i + 1, n) * coercivity_step;
    best = std::min(best, golden_minimize(shifted, lo, hi));

    out.c2 = std::max(-best, 0.0) / safety;
    if (out.c2 == 0) out.c2 = std::numeric_limits<double>::min();
    out.c0 = growth / safety;
    return out;
}

double normalized_kappa(double s_star)
{
    ModelParams p;
    p.s_star = s_star;
    p.eps_reg = 0;
    p.kappa = 0;
    const double top = 1 - 1e-6;
    auto f = [&](double s) { return detail::psi_plus_exact(s, 0, p); };
    const int n = 10000;
    double best = f(0.0);
    int best_i = 0;
    for (int i = 1; i <= n; ++i) {
        const double v = f(top * i / n);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    if (best_i > 0) {
        const double lo = top * (best_i - 1) / n;
        const double hi = top * std::min(best_i + 1, n) / n;
        best = std::min(best, golden_minimize(f, lo, hi));
    }
    return 0.0 - best;
}

double psi_plus_eps_infimum(const ModelParams& p)
{
    if (p.eps_reg <= 0) throw ParamError("psi_plus_eps_infimum needs eps_reg > 0");
    // Ψ₊,ε is convex and C¹, so its minimiser is the root of Ψ′₊,ε.
    const double eps = p.eps_reg;
    const double f1 = psi_plus(eps, 1, p);
    const double f2 = psi_plus(eps, 2, p);
    double lo = eps - std::abs(f1) / f2 - 1.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (psi_plus(mid, 1, p) < 0) lo = mid;
        else hi = mid;
    }
    return psi_plus(0.5 * (lo + hi), 0, p);
}

ModelParams default_params()
{
    ModelParams p;
    p.kappa = normalized_kappa(p.s_star);
    return p;
}

CoercivityConstants coercivity_constants(const ModelParams& p, const ExtensionConstants& ext)
{
    CoercivityConstants out;
    const double chi2 = p.chi * p.chi;
    out.alpha = 0.25 * (1.0 - chi2 / ext.c1);
    out.beta = ext.c1 - chi2 / (1.0 - 2.0 * out.alpha);
    double kappa_eps = 0;
    if (p.eps_reg > 0) kappa_eps = std::max(0.0, -psi_plus_eps_infimum(p));
    out.constant = ext.c2 + chi2 / (1.0 - 2.0 * out.alpha) + kappa_eps;
    return out;
}

double delta_threshold(const ModelParams& p, const ExtensionConstants& ext)
{
    return std::min(p.gamma * p.gamma / (ext.lip * ext.lip), 0.5);
}

bool ValidationReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

bool ValidationReport::failed(const std::string& id) const
{
    return std::any_of(checks.begin(), checks.end(),
                       [&](const auto& c) { return c.id == id && !c.passed; });
}

std::vector<std::string> ValidationReport::failures() const
{
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed && std::find(out.begin(), out.end(), c.id) == out.end()) out.push_back(c.id);
    return out;
}

std::string ValidationReport::to_string() const
{
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.id << ": " << c.detail << " (value " << fmt_double(c.value)
           << ", bound " << fmt_double(c.bound) << ")\n";
    }
    os << "constants: c0=" << fmt_double(constants.c0) << " c1=" << fmt_double(constants.c1)
       << " c2=" << fmt_double(constants.c2) << " |Psi''_-|=" << fmt_double(constants.lip)
       << " delta0=" << fmt_double(delta0) << " c3=" << fmt_double(c3) << " c4=" << fmt_double(c4)
       << " c5=" << fmt_double(c5) << "\n";
    return os.str();
}

ValidationReport validate_params(const ModelParams& p)
{
    ValidationReport r;
    auto add = [&](std::string id, bool ok, double value, double bound, std::string detail) {
        r.checks.push_back({std::move(id), ok, value, bound, std::move(detail)});
    };

    add("A1", p.gamma > 0, p.gamma, 0, "interface parameter gamma > 0");

    const bool well_ok = p.s_star > 0 && p.s_star <= max_convex_well;
    add("A2", well_ok, p.s_star, max_convex_well, "Psi_+ convex requires s_star in (0, 0.7]");
    if (well_ok) {
        ModelParams exact = p;
        exact.eps_reg = 0;
        double min_curv = std::numeric_limits<double>::infinity();
        for (int i = 1; i < 10000; ++i) min_curv = std::min(min_curv, psi_plus(i / 10000.0, 2, exact));
        add("A2", min_curv > 0, min_curv, 0, "sampled min of Psi_+'' on (0,1) is positive");
    }

    const auto& ext = p.extension;
    const bool ext_ok = ext.margin > 0 && ext.ramp_width > 0 && ext.far_curvature > 0;
    add("A2", ext_ok, ext.far_curvature, 0, "concave extension margin, ramp width and far curvature positive");
    if (!ext_ok) return r;

    r.constants = derive_extension_constants(p);
    add("A2", r.constants.c1 > 0 && r.constants.c2 > 0 && r.constants.c0 > 0, r.constants.c1, 0,
        "coercivity Psi_-(s) >= c1 s^2 - c2 with c0, c1, c2 > 0");

    r.delta0 = delta_threshold(p, r.constants);
    add("A3", p.delta >= 0 && (p.delta == 0 || p.delta < r.delta0), p.delta, r.delta0,
        "relaxation delta < delta0 = min{gamma^2/|Psi''_-|^2, 1/2}");

    const bool eps0_ok = p.eps0 > 0 && p.eps0 < 0.5;
    add("A4", eps0_ok, p.eps0, 0.5, "eps0 in (0, 1/2)");
    if (eps0_ok) {
        bool monotone = true;
        const int n = 2000;
        for (int i = 0; i < n; ++i) {
            const double s0 = p.eps0 * i / n;
            const double s1 = p.eps0 * (i + 1) / n;
            if (mobility(s1, p, false) < mobility(s0, p, false)) monotone = false;
            if (mobility(1 - s1, p, false) < mobility(1 - s0, p, false)) monotone = false;
        }
        add("A4", monotone, p.eps0, 1.0 / 3.0, "b non-decreasing on [0,eps0] and non-increasing on [1-eps0,1]");
    }
    add("A4", p.eps_reg >= 0 && p.eps_reg < p.eps0, p.eps_reg, p.eps0, "regularisation eps_reg < eps0");
    if (well_ok) {
        ModelParams exact = p;
        exact.eps_reg = 0;
        double sup = 0;
        for (int k = 1; k <= 12; ++k) {
            const double s = 1 - std::pow(10.0, -k);
            sup = std::max(sup, std::abs(mobility(s, exact, false) * psi_plus(s, 2, exact)));
        }
        add("A4", std::isfinite(sup), sup, p.well_slope(), "b*Psi_+'' bounded up to s = 1");
    }

    const bool exponent_ok = p.prolif_exponent == 1 || p.prolif_exponent == 2;
    add("A5", exponent_ok && p.p0 >= 0, p.prolif_exponent, 2, "P = P0*b^p with P0 >= 0, p in {1,2}");
    if (exponent_ok) {
        ModelParams exact = p;
        exact.eps_reg = 0;
        auto ratio = [&](double s) {
            const double b = mobility(s, exact, false);
            return std::sqrt(std::max(proliferation(s, exact, false), 0.0)) / b;
        };
        double near = 0;
        double far = 0;
        for (int k = 2; k <= 12; ++k) {
            const double h = std::pow(10.0, -k);
            const double v = std::max(ratio(h), ratio(1 - h));
            if (k == 2) far = v;
            near = std::max(near, v);
        }
        r.c3 = near;
        const bool bounded = near <= 10 * far + 1e-300;
        add("A5", bounded, near, 10 * far,
            "sqrt(P) <= c3*b near the pure phases (sup of sqrt(P)/b stays bounded)");

        double sup_ppsi = 0;
        for (int k = 1; k <= 12; ++k) {
            const double s = 1 - std::pow(10.0, -k);
            if (well_ok) sup_ppsi = std::max(sup_ppsi, std::abs(proliferation(s, exact, false) * psi_plus(s, 1, exact)));
        }
        add("A5", std::isfinite(sup_ppsi), sup_ppsi, 0, "P*Psi_+' bounded up to s = 1");

        if (bounded) {
            r.c4 = r.c3;
            double c5 = 0;
            for (int i = 1; i < 100000; ++i) {
                const double s = i / 100000.0;
                const double v = std::sqrt(proliferation(s, exact, false)) * std::abs(entropy_density(s, 1, exact, false));
                c5 = std::max(c5, v - r.c4 * s);
            }
            r.c5 = c5;
            add("A5", std::isfinite(c5), c5, 0, "|sqrt(P) eta'| <= c4|s| + c5 on [0,1]");
        }
    }

    const double chi2 = p.chi * p.chi;
    add("A6", p.chi >= 0 && chi2 < r.constants.c1, chi2, r.constants.c1, "chemotaxis chi >= 0 with chi^2 < c1");
    return r;
}

} // namespace relaxch
