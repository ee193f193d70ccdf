#pragma once

// Acoustical chart reconstructed from a sampled Cartesian background: a mesh
// of traced C_u generators carrying (x, That, kappa), from which mu, gslash
// and Xihat are tabulated on a (t, u, theta) grid.  Interpolation is cubic in
// u, cubic-periodic in theta and linear in t, with interpolant derivatives.
// Below the mesh's first time row the chart continues with the singular
// asymptotics kappa ~ t, so fronts can be launched from S_*.

#include <vector>

#include "rarewave/geometry.hpp"

namespace rarewave {

class MeshChart final : public AcousticalChart {
  public:
    // Rays are launched at t0 from x1 = (k_guess - u) t0 with normal (-1, 0)
    // and kappa = t0; k_guess is the background C_0 slope v1_r + c_r.
    MeshChart(const CartesianBackground& bg, double k_guess, double t0, double t1, int n_t,
              double u_max, int n_u, std::size_t m, double tol = 1e-8)
        : t0_(t0), dt_((t1 - t0) / n_t), n_t_(n_t), du_(u_max / n_u), n_u_(n_u), m_(m) {
        const int rows = n_t + 1, cols = n_u + 1;
        auto alloc = [&] { return std::vector<double>(std::size_t(rows) * cols * m, 0.0); };
        mu_ = alloc();
        c_ = alloc();
        gsl_ = alloc();
        xih_ = alloc();
        x1_ = alloc();
        x2_ = alloc();

        std::vector<double> kap(std::size_t(rows) * cols * m), th1 = kap, th2 = kap;
        for (int j = 0; j <= n_u; ++j) {
            double u = j * du_;
            for (std::size_t k = 0; k < m; ++k) {
                double theta = 2.0 * std::numbers::pi * double(k) / double(m);
                CharacteristicPath path = characteristic_trace_cartesian(
                    bg, t0, (k_guess - u) * t0, theta, {-1.0, 0.0}, t0, t1, tol);
                if (!path.ok) throw std::runtime_error("MeshChart: ray failed: " + path.note);
                // resample the path on the uniform t grid
                std::size_t p = 0;
                for (int i = 0; i <= n_t; ++i) {
                    double t = t0 + i * dt_;
                    while (p + 1 < path.points.size() && path.points[p + 1].t < t) ++p;
                    const CharacteristicPoint& a = path.points[p];
                    const CharacteristicPoint& b = path.points[std::min(p + 1, path.points.size() - 1)];
                    double w = b.t > a.t ? (t - a.t) / (b.t - a.t) : 0.0;
                    std::size_t n = idx(i, j, k);
                    x1_[n] = (1 - w) * a.x1 + w * b.x1;
                    // store x2 as displacement from the launch angle
                    x2_[n] = (1 - w) * a.x2 + w * b.x2 - theta;
                    kap[n] = (1 - w) * a.kappa + w * b.kappa;
                    th1[n] = (1 - w) * a.That[0] + w * b.That[0];
                    th2[n] = (1 - w) * a.That[1] + w * b.That[1];
                    CartesianSample s = bg.eval(t, x1_[n], x2_[n]);
                    c_[n] = s.c;
                    mu_[n] = s.c * kap[n];
                }
            }
        }

        // gslash = |dx/dtheta|^2 and Xi from kappa That = x_u - Xi x_theta
        double dth = 2.0 * std::numbers::pi / double(m);
        for (int i = 0; i <= n_t; ++i)
            for (int j = 0; j <= n_u; ++j)
                for (std::size_t k = 0; k < m; ++k) {
                    std::size_t kp = (k + 1) % m, km = (k + m - 1) % m;
                    double x1th = (x1_[idx(i, j, kp)] - x1_[idx(i, j, km)]) / (2 * dth);
                    double x2th = 1.0 + (x2_[idx(i, j, kp)] - x2_[idx(i, j, km)]) / (2 * dth);
                    int jp = std::min(j + 1, n_u), jm = std::max(j - 1, 0);
                    double x1u = (x1_[idx(i, jp, k)] - x1_[idx(i, jm, k)]) / ((jp - jm) * du_);
                    double x2u = (x2_[idx(i, jp, k)] - x2_[idx(i, jm, k)]) / ((jp - jm) * du_);
                    std::size_t n = idx(i, j, k);
                    gsl_[n] = x1th * x1th + x2th * x2th;
                    double r1 = x1u - kap[n] * th1[n], r2 = x2u - kap[n] * th2[n];
                    double xi = (r1 * x1th + r2 * x2th) / gsl_[n];
                    xih_[n] = xi / mu_[n];
                }
    }

    ChartSample eval(double t, double u, double theta) const override {
        if (t < t0_) {
            // singular continuation: mu = (kappa(t0)/t0) c t, geometry frozen
            ChartSample s0 = row_eval(0, u, theta);
            ChartSample s;
            s.c = s0.c;
            s.gsl = s0.gsl;
            s.xih = s0.xih;
            double rate = s0.mu / (s0.c * t0_);  // kappa(t0)/t0
            s.mu = rate * s0.c * t;
            s.dmu = {rate * s0.c, t * rate * s0.dc[1], t * rate * s0.dc[2]};
            s.dc = {0.0, s0.dc[1], s0.dc[2]};
            s.dgsl = {0.0, s0.dgsl[1], s0.dgsl[2]};
            s.dxih = {0.0, s0.dxih[1], s0.dxih[2]};
            return s;
        }
        double ft = std::fmin((t - t0_) / dt_, double(n_t_) - 1e-9);
        int i = int(ft);
        double a = ft - i;
        ChartSample lo = row_eval(i, u, theta);
        ChartSample hi = row_eval(i + 1, u, theta);
        ChartSample s;
        auto blend = [&](double x, double y) { return (1 - a) * x + a * y; };
        s.mu = blend(lo.mu, hi.mu);
        s.c = blend(lo.c, hi.c);
        s.gsl = blend(lo.gsl, hi.gsl);
        s.xih = blend(lo.xih, hi.xih);
        for (int q = 1; q < 3; ++q) {
            s.dmu[q] = blend(lo.dmu[q], hi.dmu[q]);
            s.dc[q] = blend(lo.dc[q], hi.dc[q]);
            s.dgsl[q] = blend(lo.dgsl[q], hi.dgsl[q]);
            s.dxih[q] = blend(lo.dxih[q], hi.dxih[q]);
        }
        s.dmu[0] = (hi.mu - lo.mu) / dt_;
        s.dc[0] = (hi.c - lo.c) / dt_;
        s.dgsl[0] = (hi.gsl - lo.gsl) / dt_;
        s.dxih[0] = (hi.xih - lo.xih) / dt_;
        return s;
    }

    std::array<double, 2> cartesian(double t, double u, double theta) const override {
        if (t < t0_) {
            auto p0 = cartesian(t0_, u, theta);
            return {p0[0] * t / t0_, p0[1]};  // rays through the singular set
        }
        double ft = std::fmin((t - t0_) / dt_, double(n_t_) - 1e-9);
        int i = int(ft);
        double a = ft - i;
        auto pl = row_xy(i, u, theta), ph = row_xy(i + 1, u, theta);
        return {(1 - a) * pl[0] + a * ph[0], (1 - a) * pl[1] + a * ph[1]};
    }

    double t_first() const { return t0_; }

  private:
    std::size_t idx(int i, int j, std::size_t k) const {
        return (std::size_t(i) * (n_u_ + 1) + j) * m_ + k;
    }

    // Catmull-Rom in u (clamped) and theta (periodic) with derivatives.
    struct Interp {
        double v = 0.0, du = 0.0, dth = 0.0;
    };
    Interp field_at(const std::vector<double>& f, int i, double u, double theta) const {
        double fu = std::clamp(u / du_, 0.0, double(n_u_) - 1e-12);
        int j0 = int(fu);
        double su = fu - j0;
        double fth = theta / (2.0 * std::numbers::pi / m_);
        double sth = fth - std::floor(fth);
        long k0 = long(std::floor(fth));
        double wu[4], dwu[4], wt[4], dwt[4];
        detail::cubic_weights(su, wu, dwu);
        detail::cubic_weights(sth, wt, dwt);
        Interp out;
        for (int a = 0; a < 4; ++a) {
            int j = std::clamp(j0 - 1 + a, 0, n_u_);
            for (int b = 0; b < 4; ++b) {
                std::size_t k = std::size_t(((k0 - 1 + b) % long(m_) + long(m_)) % long(m_));
                double fv = f[idx(i, j, k)];
                out.v += wu[a] * wt[b] * fv;
                out.du += dwu[a] * wt[b] * fv / du_;
                out.dth += wu[a] * dwt[b] * fv / (2.0 * std::numbers::pi / m_);
            }
        }
        return out;
    }

    ChartSample row_eval(int i, double u, double theta) const {
        ChartSample s;
        Interp imu = field_at(mu_, i, u, theta), ic = field_at(c_, i, u, theta),
               ig = field_at(gsl_, i, u, theta), ix = field_at(xih_, i, u, theta);
        s.mu = imu.v;
        s.c = ic.v;
        s.gsl = ig.v;
        s.xih = ix.v;
        s.dmu = {0.0, imu.du, imu.dth};
        s.dc = {0.0, ic.du, ic.dth};
        s.dgsl = {0.0, ig.du, ig.dth};
        s.dxih = {0.0, ix.du, ix.dth};
        return s;
    }
    std::array<double, 2> row_xy(int i, double u, double theta) const {
        Interp i1 = field_at(x1_, i, u, theta);
        Interp i2 = field_at(x2_, i, u, theta);
        return {i1.v, theta + i2.v};
    }

    double t0_, dt_;
    int n_t_;
    double du_;
    int n_u_;
    std::size_t m_;
    std::vector<double> mu_, c_, gsl_, xih_, x1_, x2_;
};

}  // namespace rarewave
