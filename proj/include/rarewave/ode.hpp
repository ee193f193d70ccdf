#pragma once

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) for small dense systems.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rarewave {

struct OdeOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double initial_step = 1e-4;
    double min_step = 1e-14;
    std::size_t max_steps = 2000000;
};

class StepUnderflow : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Integrates y' = f(t, y) from t0 to t1 (t1 may be < t0).  Calls observe
// after each accepted step when provided.
inline std::vector<double> integrate_ode(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& f,
    std::vector<double> y, double t0, double t1, const OdeOptions& opt = {},
    const std::function<void(double, const std::vector<double>&)>& observe = {}) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::fmin(std::fabs(opt.initial_step), std::fabs(t1 - t0));
    if (h == 0.0) return y;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n);
    f(t, y, k1);
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (dir * (t - t1) >= 0.0) return y;
        if (dir * (t + h - t1) > 0.0) h = t1 - t;

        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, yt, k2);
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, yt, k3);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, yt, k4);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, yt, k5);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(t + h, yt, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + h, y5, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double sc = opt.abs_tol + opt.rel_tol * std::fmax(std::fabs(y[i]), std::fabs(y5[i]));
            err = std::fmax(err, std::fabs(e) / sc);
        }

        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            if (observe) observe(t, y);
        }
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        fac = std::fmin(std::fmax(fac, 0.2), 5.0);
        h *= fac;
        if (std::fabs(h) < opt.min_step)
            throw StepUnderflow("integrate_ode: step size underflow");
    }
    throw std::runtime_error("integrate_ode: exceeded max_steps");
}

}  // namespace rarewave
