#pragma once

#include <relaxch/errors.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace relaxch {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 0;  // 0 picks a starting step from the derivative scale
    double min_step = 1e-14;
    long max_steps = 1000000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
};

/// Dormand–Prince 5(4) with FSAL and an elementary step-size controller.
/// f(t, y, dydt) fills dydt; observe(t, y) is called after every accepted
/// step. y is advanced in place from t0 to t1.
template <class Rhs, class Observer>
OdeStats dormand_prince(Rhs&& f, double t0, double t1, Eigen::VectorXd& y, const OdeOptions& opt,
                        Observer&& observe)
{
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeStats stats;
    const Eigen::Index n = y.size();
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);
    f(t0, y, k1);
    ++stats.evaluations;

    double t = t0;
    double h = opt.initial_step;
    if (h <= 0) {
        const Eigen::ArrayXd scale = opt.atol + opt.rtol * y.array().abs();
        const double d0 = std::sqrt((y.array() / scale).square().mean());
        const double d1 = std::sqrt((k1.array() / scale).square().mean());
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, t1 - t0);
    }

    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps) throw ConvergenceError("ODE integrator step limit");
        if (h < opt.min_step) throw ConvergenceError("ODE step size underflow");
        if (t + h > t1) h = t1 - t;

        tmp = y + h * a21 * k1;
        f(t + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, tmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, ynew, k7);
        stats.evaluations += 6;

        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const Eigen::ArrayXd scale = opt.atol + opt.rtol * y.array().abs().max(ynew.array().abs());
        const double enorm = std::sqrt((err.array() / scale).square().mean());
        if (!std::isfinite(enorm)) throw ConvergenceError("non-finite ODE error estimate");

        if (enorm <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;
            ++stats.accepted;
            observe(t, y);
        } else {
            ++stats.rejected;
        }
        const double factor = enorm == 0 ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);
        h *= enorm <= 1.0 ? factor : std::min(factor, 1.0);
    }
    return stats;
}

} // namespace relaxch
