#pragma once

// Null frames, the cotangent-bundle Hamiltonian system for null geodesics in
// acoustical coordinates, rarefaction-front tracing from the singular
// boundary, and Cartesian bicharacteristic tracing with kappa transport.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rarewave/background.hpp"
#include "rarewave/ode.hpp"
#include "rarewave/slice.hpp"

namespace rarewave {

// ---------------------------------------------------------------------------
// Null frames in Cartesian coordinates
// ---------------------------------------------------------------------------

struct NullFrame {
    std::array<double, 3> L{};   // (t, x1, x2) components
    std::array<double, 2> That{}, Xhat{};
    double kappa = 1.0;
    double mu = 0.0;
};

inline NullFrame frame_at(const CartesianBackground& bg, double t, double x1, double x2,
                          std::array<double, 2> hint) {
    CartesianSample s = bg.eval(t, x1, x2);
    if (!(s.c > 0.0)) throw std::domain_error("frame_at: vacuum point");
    double n = std::hypot(hint[0], hint[1]);
    if (!(n > 0.0)) throw std::invalid_argument("frame_at: zero normal hint");
    NullFrame f;
    f.That = {hint[0] / n, hint[1] / n};
    f.Xhat = {f.That[1], -f.That[0]};
    f.L = {1.0, s.v1 - s.c * f.That[0], s.v2 - s.c * f.That[1]};
    f.kappa = bg.kappa_at(t, x1, x2);
    f.mu = s.c * f.kappa;
    return f;
}

// Second-frame characteristic quantities at a point: y = X(v1+c),
// z = 1 + T(v1+c) with the Cartesian frame X = d/dx2, T = -t d/dx1, and
// their t-rescalings yring = y/t, zring = z/t.  On the exact fan z and y
// vanish; on eps-perturbed flow they are O(eps).
struct SecondFrameQuantities {
    double y = 0.0, z = 0.0;
    double yring = 0.0, zring = 0.0;
};

inline SecondFrameQuantities second_frame_quantities(const CartesianBackground& bg, double t,
                                                     double x1, double x2) {
    CartesianSample s = bg.eval(t, x1, x2);
    SecondFrameQuantities q;
    q.y = s.dv1[1] + s.dc[1];
    q.z = 1.0 - t * (s.dv1[0] + s.dc[0]);
    q.yring = q.y / t;
    q.zring = q.z / t;
    return q;
}

// Acoustical metric applied to two (t,x1,x2) vectors at a state (c, v).
inline double metric_g(double c, double v1, double v2, const std::array<double, 3>& a,
                       const std::array<double, 3>& b) {
    double a1 = a[1] - v1 * a[0], a2 = a[2] - v2 * a[0];
    double b1 = b[1] - v1 * b[0], b2 = b[2] - v2 * b[0];
    return -c * c * a[0] * b[0] + a1 * b1 + a2 * b2;
}

// ---------------------------------------------------------------------------
// Acoustical charts for the Hamiltonian system
// ---------------------------------------------------------------------------

struct ChartSample {
    double mu = 0.0, c = 0.0, gsl = 1.0, xih = 0.0;
    std::array<double, 3> dmu{}, dc{}, dgsl{}, dxih{};  // (d/dt, d/du, d/dtheta)
};

class AcousticalChart {
  public:
    virtual ~AcousticalChart() = default;
    virtual ChartSample eval(double t, double u, double theta) const = 0;
    // Cartesian position of (t, u, theta); identity-like fallback.
    virtual std::array<double, 2> cartesian(double t, double u, double theta) const {
        (void)t;
        return {u, theta};
    }
};

// Constant state: kappa = 1, mu = c.
class ConstantChart final : public AcousticalChart {
  public:
    ConstantChart(const GasLaw& law, const PrimitiveState& s)
        : c_(sound_speed(law, s.rho)), k_(s.v1 + c_), v2_(s.v2) {}
    ChartSample eval(double, double, double) const override {
        ChartSample cs;
        cs.mu = c_;
        cs.c = c_;
        return cs;
    }
    std::array<double, 2> cartesian(double t, double u, double theta) const override {
        return {k_ * t - u, theta + v2_ * t};
    }

  private:
    double c_, k_, v2_;
};

// Exact centered front fan: c(u) = c_r - (gamma-1)/(gamma+1) u, kappa = t.
class FanChart final : public AcousticalChart {
  public:
    FanChart(const GasLaw& law, double wbar_r, double w_r)
        : gamma_(law.gamma),
          wbar_r_(wbar_r),
          c_r_(0.5 * (law.gamma - 1.0) * (wbar_r + w_r)),
          k_(0.5 * (law.gamma + 1.0) * wbar_r + 0.5 * (law.gamma - 3.0) * w_r) {}

    double sound_speed_at(double u) const { return c_r_ - (gamma_ - 1.0) / (gamma_ + 1.0) * u; }
    double wbar_at(double u) const { return wbar_r_ - 2.0 / (gamma_ + 1.0) * u; }

    ChartSample eval(double t, double u, double) const override {
        ChartSample cs;
        cs.c = sound_speed_at(u);
        cs.mu = cs.c * t;
        cs.dmu = {cs.c, -(gamma_ - 1.0) / (gamma_ + 1.0) * t, 0.0};
        cs.dc = {0.0, -(gamma_ - 1.0) / (gamma_ + 1.0), 0.0};
        return cs;
    }
    std::array<double, 2> cartesian(double t, double u, double theta) const override {
        return {(k_ - u) * t, theta};
    }
    double ray_slope() const { return k_; }

  private:
    double gamma_, wbar_r_, c_r_, k_;
};

// mu = c(u, theta) * t with a prescribed positive c; models the degenerate
// singular boundary for the trichotomy check.
class DegenerateChart final : public AcousticalChart {
  public:
    explicit DegenerateChart(std::function<std::array<double, 3>(double, double)> c_and_grad)
        : c_(std::move(c_and_grad)) {}
    ChartSample eval(double t, double u, double theta) const override {
        auto cg = c_(u, theta);  // (c, dc/du, dc/dtheta)
        ChartSample cs;
        cs.c = cg[0];
        cs.mu = cg[0] * t;
        cs.dmu = {cg[0], cg[1] * t, cg[2] * t};
        cs.dc = {0.0, cg[1], cg[2]};
        return cs;
    }

  private:
    std::function<std::array<double, 3>(double, double)> c_;
};

// ---------------------------------------------------------------------------
// Hamiltonian system
// ---------------------------------------------------------------------------

// (t, u, theta, p_t, p_u, p_theta) on the cotangent bundle
using CotangentPoint = std::array<double, 6>;

inline double hamiltonian(const AcousticalChart& chart, const CotangentPoint& y) {
    ChartSample s = chart.eval(y[0], y[1], y[2]);
    double E = -0.5 / (s.c * s.c) * y[3] * y[3] + 0.5 / s.gsl * y[5] * y[5] + s.xih * y[3] * y[5];
    return -y[3] * y[4] + s.mu * E;
}

inline CotangentPoint geodesic_rhs(const AcousticalChart& chart, const CotangentPoint& y) {
    ChartSample s = chart.eval(y[0], y[1], y[2]);
    double ic2 = 1.0 / (s.c * s.c);
    double ig = 1.0 / s.gsl;
    double E = -0.5 * ic2 * y[3] * y[3] + 0.5 * ig * y[5] * y[5] + s.xih * y[3] * y[5];
    CotangentPoint d;
    d[0] = -y[4] + s.mu * (-ic2 * y[3] + s.xih * y[5]);
    d[1] = -y[3];
    d[2] = s.mu * (ig * y[5] + s.xih * y[3]);
    for (int a = 0; a < 3; ++a) {
        double dmu = s.dmu[a], dc = s.dc[a], dgsl = s.dgsl[a], dxi = s.dxih[a];
        d[3 + a] = -dmu * E - s.mu * (dc / (s.c * s.c * s.c) * y[3] * y[3] -
                                      0.5 * ig * ig * dgsl * y[5] * y[5] + dxi * y[3] * y[5]);
    }
    return d;
}

struct RayPoint {
    double tau = 0.0;
    CotangentPoint y{};
    double H = 0.0;
    std::array<double, 2> x{};  // Cartesian position
};

struct Trajectory {
    std::vector<RayPoint> points;
    bool ok = true;
    std::string note;
};

// Integrate the canonical system over a tau interval.
inline Trajectory integrate_geodesic(const AcousticalChart& chart, const CotangentPoint& y0,
                                     double tau0, double tau1, double tol = 1e-9) {
    Trajectory traj;
    auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        CotangentPoint ya;
        std::copy_n(y.begin(), 6, ya.begin());
        auto d = geodesic_rhs(chart, ya);
        std::copy(d.begin(), d.end(), dy.begin());
    };
    auto record = [&](double tau, const std::vector<double>& y) {
        RayPoint p;
        p.tau = tau;
        std::copy_n(y.begin(), 6, p.y.begin());
        p.H = hamiltonian(chart, p.y);
        p.x = chart.cartesian(p.y[0], p.y[1], p.y[2]);
        traj.points.push_back(p);
    };
    OdeOptions opt;
    opt.abs_tol = opt.rel_tol = tol;
    std::vector<double> y(y0.begin(), y0.end());
    record(tau0, y);
    try {
        integrate_ode(rhs, y, tau0, tau1, opt, record);
    } catch (const StepUnderflow& e) {
        traj.ok = false;
        traj.note = e.what();
    }
    return traj;
}

// Integrate until t reaches t_end, parameterizing the curve by t (valid while
// dt/dtau > 0, which holds for outgoing rays).
inline Trajectory integrate_geodesic_to_time(const AcousticalChart& chart,
                                             const CotangentPoint& y0, double tau0,
                                             double t_end, double tol = 1e-9) {
    Trajectory traj;
    // state carries (u, theta, p_t, p_u, p_theta, tau); time is the parameter
    auto pack = [](double t, const std::vector<double>& y) {
        return CotangentPoint{t, y[0], y[1], y[2], y[3], y[4]};
    };
    auto record = [&](double t, const std::vector<double>& y) {
        RayPoint p;
        p.tau = y[5];
        p.y = pack(t, y);
        p.H = hamiltonian(chart, p.y);
        p.x = chart.cartesian(p.y[0], p.y[1], p.y[2]);
        traj.points.push_back(p);
    };
    OdeOptions opt;
    opt.abs_tol = opt.rel_tol = tol;
    std::vector<double> y = {y0[1], y0[2], y0[3], y0[4], y0[5], tau0};
    record(y0[0], y);
    try {
        integrate_ode([&](double t, const std::vector<double>& yy, std::vector<double>& dy) {
            CotangentPoint ya = pack(t, yy);
            auto d = geodesic_rhs(chart, ya);
            if (!(d[0] > 1e-12))
                throw StepUnderflow("integrate_geodesic_to_time: dt/dtau lost positivity");
            dy[0] = d[1] / d[0];
            dy[1] = d[2] / d[0];
            dy[2] = d[3] / d[0];
            dy[3] = d[4] / d[0];
            dy[4] = d[5] / d[0];
            dy[5] = 1.0 / d[0];
        }, y, y0[0], t_end, opt, record);
    } catch (const StepUnderflow& e) {
        traj.ok = false;
        traj.note = e.what();
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Rarefaction fronts from the singular boundary
// ---------------------------------------------------------------------------

struct FrontSurface {
    std::vector<double> alphas;
    std::vector<Trajectory> rays;
};

// Rays start on Gamma_f = {(u,theta) = (f(alpha), alpha)} in S_* with momenta
// from d(-u + f(theta)); the launch state at tau0 comes from the second-order
// expansion of outgoing null geodesics, removing the coordinate degeneracy
// at t = 0.
inline FrontSurface trace_front(const AcousticalChart& chart, const FrontGraph& graph, int n_rays,
                                double t_end, double tol = 1e-9, double tau0 = 1e-6) {
    if (n_rays < 8) throw std::invalid_argument("trace_front: need at least 8 rays");
    FrontSurface surf;
    for (int r = 0; r < n_rays; ++r) {
        double alpha = 2.0 * std::numbers::pi * r / n_rays;
        double u0 = graph.value(alpha);
        double pth = graph.slope(alpha);
        ChartSample s0 = chart.eval(0.0, u0, alpha);
        double dmudt = s0.dmu[0];
        CotangentPoint y0;
        y0[0] = tau0 + 0.5 * dmudt * s0.xih * pth * tau0 * tau0;
        y0[1] = u0 + 0.25 * dmudt * pth * pth * tau0 * tau0;
        y0[2] = alpha + 0.5 * dmudt * pth * tau0 * tau0;
        y0[3] = -0.5 * dmudt * pth * pth * tau0;
        y0[4] = -1.0;
        y0[5] = pth;
        surf.alphas.push_back(alpha);
        surf.rays.push_back(integrate_geodesic_to_time(chart, y0, tau0, t_end, tol));
    }
    return surf;
}

// ---------------------------------------------------------------------------
// Cartesian bicharacteristic tracing (L-integral curves) with frame and
// kappa transport
// ---------------------------------------------------------------------------

struct CharacteristicPoint {
    double t = 0.0, x1 = 0.0, x2 = 0.0;
    std::array<double, 2> That{};
    double kappa = 0.0;
};

struct CharacteristicPath {
    std::vector<CharacteristicPoint> points;
    bool ok = true;
    std::string note;
};

inline CharacteristicPath characteristic_trace_cartesian(const CartesianBackground& bg, double t0,
                                                         double x1_0, double x2_0,
                                                         std::array<double, 2> that0,
                                                         double kappa0, double t_end,
                                                         double tol = 1e-9) {
    const GasLaw& law = bg.law();
    double gm = law.gamma;
    CharacteristicPath path;
    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        CartesianSample s = bg.eval(t, y[0], y[1]);
        double t1 = y[2], t2 = y[3], kap = y[4];
        double xh1 = t2, xh2 = -t1;
        // L(x) = v - c That
        dy[0] = s.v1 - s.c * t1;
        dy[1] = s.v2 - s.c * t2;
        // frame transport: L(That) = (That^j Xhat(psi_j) + Xhat(c)) Xhat
        double xh_v1 = xh1 * s.dv1[0] + xh2 * s.dv1[1];
        double xh_v2 = xh1 * s.dv2[0] + xh2 * s.dv2[1];
        double xh_c = xh1 * s.dc[0] + xh2 * s.dc[1];
        double sigma = -(t1 * xh_v1 + t2 * xh_v2) + xh_c;
        dy[2] = sigma * xh1;
        dy[3] = sigma * xh2;
        // kappa transport: L(kappa) = m' + e' kappa (both proportional to kappa)
        double th_c = t1 * s.dc[0] + t2 * s.dc[1];
        double th_v1 = t1 * s.dv1[0] + t2 * s.dv1[1];
        double th_v2 = t1 * s.dv2[0] + t2 * s.dv2[1];
        double eprime = (2.0 / (gm - 1.0)) * th_c + (t1 * th_v1 + t2 * th_v2);
        dy[4] = kap * (-(gm + 1.0) / (gm - 1.0) * th_c + eprime);
    };
    auto record = [&](double t, const std::vector<double>& y) {
        path.points.push_back({t, y[0], y[1], {y[2], y[3]}, y[4]});
    };
    OdeOptions opt;
    opt.abs_tol = opt.rel_tol = tol;
    std::vector<double> y = {x1_0, x2_0, that0[0], that0[1], kappa0};
    record(t0, y);
    try {
        integrate_ode(rhs, y, t0, t_end, opt, record);
    } catch (const std::exception& e) {
        path.ok = false;
        path.note = e.what();
    }
    return path;
}

}  // namespace rarewave
