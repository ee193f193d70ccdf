#pragma once

// Construction of singular rarefaction data on Sigma_delta: the initial
// foliation (u, theta, That, kappa, gslash), the inductively determined
// Taylor coefficients of the diagonalized variables, ansatz verification,
// the limiting data on the singular set and the front seed curves H0 / H0bar.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rarewave/euler_frame.hpp"
#include "rarewave/fourier.hpp"
#include "rarewave/gas.hpp"
#include "rarewave/series.hpp"

namespace rarewave {

// Trace of the right solution on C0 at a fixed time, as fields over the
// acoustical angle theta (which labels the C0 generators).
struct TraceSample {
    PeriodicField c, v1, v2;
    PeriodicField that1, that2;  // unit normal of S_{t,0} inside Sigma_t
};

class BoundaryTrace {
  public:
    virtual ~BoundaryTrace() = default;
    virtual std::size_t grid_size() const = 0;
    virtual TraceSample at(double t) const = 0;
};

class ConstantTrace final : public BoundaryTrace {
  public:
    ConstantTrace(const GasLaw& law, const PrimitiveState& right, std::size_t m)
        : law_(law), right_(right), m_(m) {}
    std::size_t grid_size() const override { return m_; }
    TraceSample at(double) const override {
        TraceSample s{PeriodicField(m_, sound_speed(law_, right_.rho)),
                      PeriodicField(m_, right_.v1), PeriodicField(m_, right_.v2),
                      PeriodicField(m_, -1.0), PeriodicField(m_, 0.0)};
        return s;
    }

  private:
    GasLaw law_;
    PrimitiveState right_;
    std::size_t m_;
};

// eps-perturbed trace model: smooth O(eps) deviations of c, v and of the
// normal angle, with bounded theta-derivatives independent of delta.
class AnalyticTrace final : public BoundaryTrace {
  public:
    AnalyticTrace(const GasLaw& law, const PrimitiveState& right, double eps, std::size_t m)
        : law_(law), right_(right), eps_(eps), m_(m) {}
    std::size_t grid_size() const override { return m_; }
    TraceSample at(double t) const override {
        TraceSample s{PeriodicField(m_), PeriodicField(m_), PeriodicField(m_), PeriodicField(m_),
                      PeriodicField(m_)};
        double c0 = sound_speed(law_, right_.rho);
        for (std::size_t j = 0; j < m_; ++j) {
            double th = s.c.theta(j);
            double ac = std::sin(th + 0.7) * std::cos(2.0 * t);
            double a1 = 0.8 * std::cos(th) * (1.0 + 0.5 * t);
            double a2 = 0.6 * std::sin(2.0 * th - 0.3) * (1.0 - t);
            double phi = eps_ * 0.7 * std::cos(th - 1.1) * (1.0 + t);
            s.c[j] = c0 + eps_ * ac;
            s.v1[j] = right_.v1 + eps_ * a1;
            s.v2[j] = right_.v2 + eps_ * a2;
            s.that1[j] = -std::cos(phi);
            s.that2[j] = -std::sin(phi);
        }
        return s;
    }

  private:
    GasLaw law_;
    PrimitiveState right_;
    double eps_;
    std::size_t m_;
};

struct SliceChart {
    GasLaw law{2.0, 0.5};
    double delta = 0.0;
    double u_star = 0.0;
    std::size_t m = 0;  // theta grid
    int n_tab = 0;      // u tabulation rows - 1
    double du_tab = 0.0;

    // geometry as functions of x2 on Sigma_delta (uniform periodic tables)
    PeriodicField A_x2, that1_x2, that2_x2, kappa_x2;

    // S_{delta,0} in acoustical theta
    PeriodicField x1_0, x2_0;  // x2_0 stored as displacement from theta
    PeriodicField c_0, v1_0, v2_0, that1_0, that2_0;

    // (u, theta) tabulation of the chart
    Tab2 x1_t, x2_t, that1_t, that2_t, kappa_t, gsl_t;

    // u-series at u = 0 (t-order 0) for the jet recursion
    Jet2 x1_s, x2_s, that1_s, that2_s, kappa_s, gsl_s;
    int order = 0;

    double x2_at(double u, double theta) const;
    double x1_at(double u, double theta) const;

    // acoustical function on Sigma_delta
    double u_of(double x1, double x2) const;
    double theta_of_x2(double x2) const;
};

// The ansatz value u* = c0 * (gamma+1)/(gamma-1) * c_r with c0 = 1/2.
inline double default_u_star(const GasLaw& law, double c_right, double c0 = 0.5) {
    return c0 * (law.gamma + 1.0) / (law.gamma - 1.0) * c_right;
}

namespace detail {

// Trigonometric interpolation with a cached spectrum.
class TrigInterp {
  public:
    explicit TrigInterp(const PeriodicField& f) : m_(f.size()), a_(m_) {
        for (std::size_t j = 0; j < m_; ++j) a_[j] = f[j];
        fft_radix2(a_, false);
    }
    double operator()(double theta) const {
        std::complex<double> acc(0.0);
        for (std::size_t k = 0; k < m_; ++k) {
            if (k == m_ / 2) {
                acc += a_[k] * std::cos(0.5 * double(m_) * theta);
            } else {
                double kk = k < m_ / 2 ? double(k) : double(k) - double(m_);
                acc += a_[k] * std::exp(std::complex<double>(0.0, kk * theta));
            }
        }
        return acc.real() / double(m_);
    }

  private:
    std::size_t m_;
    std::vector<std::complex<double>> a_;
};

// Invert x2 = theta + disp(theta) for theta, given the periodic displacement.
inline double invert_angle(const TrigInterp& disp, double x2) {
    double th = x2;
    for (int it = 0; it < 50; ++it) {
        double f = th + disp(th) - x2;
        if (std::fabs(f) < 1e-14) break;
        th -= f;  // |disp'| << 1
    }
    return th;
}

}  // namespace detail

inline double SliceChart::theta_of_x2(double x2) const {
    detail::TrigInterp disp(x2_0);
    return detail::invert_angle(disp, x2);
}

inline double SliceChart::u_of(double x1, double x2) const {
    // u = -x1/delta - (1/delta) int_0^delta I; the integral equals -x1 of the
    // C0 generator through theta(x2), so u vanishes on S_{delta,0} exactly.
    double th = theta_of_x2(x2);
    detail::TrigInterp xi1(x1_0);
    return -x1 / delta + xi1(th) / delta;
}

inline double SliceChart::x2_at(double u, double theta) const {
    double s = u / du_tab;
    int i = std::max(0, std::min(n_tab - 1, int(s)));
    double a = s - i;
    detail::TrigInterp f0(x2_t.row(i)), f1(x2_t.row(i + 1));
    return theta + (1.0 - a) * f0(theta) + a * f1(theta);
}

inline double SliceChart::x1_at(double u, double theta) const {
    double s = u / du_tab;
    int i = std::max(0, std::min(n_tab - 1, int(s)));
    double a = s - i;
    detail::TrigInterp f0(x1_t.row(i)), f1(x1_t.row(i + 1));
    return (1.0 - a) * f0(theta) + a * f1(theta);
}

inline SliceChart build_chart(const GasLaw& law, const BoundaryTrace& trace, double delta,
                              double u_star, int order = 4, int n_tab = 96) {
    if (!(delta > 0.0)) throw std::invalid_argument("build_chart: delta must be positive");
    if (!(u_star > 0.0)) throw std::invalid_argument("build_chart: u_star must be positive");
    const std::size_t m = trace.grid_size();

    SliceChart ch;
    ch.law = law;
    ch.delta = delta;
    ch.u_star = u_star;
    ch.m = m;
    ch.n_tab = n_tab;
    ch.du_tab = u_star / n_tab;
    ch.order = order;

    // --- march the C0 generators from t=0 to t=delta -----------------------
    // state: x1(theta), x2 displacement, R1, R2 (slashed R)
    PeriodicField x1(m), d2(m), r1(m), r2(m, 1.0);
    const int nt_steps = 512;
    const double ht = delta / nt_steps;
    auto rhs = [&](double t, const PeriodicField& x1c, const PeriodicField& d2c,
                   const PeriodicField& r1c, const PeriodicField& r2c, PeriodicField& dx1,
                   PeriodicField& dd2, PeriodicField& dr1, PeriodicField& dr2) {
        (void)x1c;
        (void)d2c;
        TraceSample s = trace.at(t);
        PeriodicField l1(m), l2(m);
        for (std::size_t j = 0; j < m; ++j) {
            l1[j] = s.v1[j] - s.c[j] * s.that1[j];
            l2[j] = s.v2[j] - s.c[j] * s.that2[j];
        }
        PeriodicField xl1 = l1.derivative(), xl2 = l2.derivative();
        dx1 = l1;
        dd2 = l2;
        dr1 = xl1;  // L(R^k) = X(L^k) on C0
        dr2 = xl2;
        (void)r1c;
        (void)r2c;
    };
    {
        PeriodicField k1a(m), k1b(m), k1c(m), k1d(m), k2a(m), k2b(m), k2c(m), k2d(m), k3a(m),
            k3b(m), k3c(m), k3d(m), k4a(m), k4b(m), k4c(m), k4d(m), ta(m), tb(m), tc(m), td(m);
        for (int n = 0; n < nt_steps; ++n) {
            double t = n * ht;
            rhs(t, x1, d2, r1, r2, k1a, k1b, k1c, k1d);
            for (std::size_t j = 0; j < m; ++j) {
                ta[j] = x1[j] + 0.5 * ht * k1a[j];
                tb[j] = d2[j] + 0.5 * ht * k1b[j];
                tc[j] = r1[j] + 0.5 * ht * k1c[j];
                td[j] = r2[j] + 0.5 * ht * k1d[j];
            }
            rhs(t + 0.5 * ht, ta, tb, tc, td, k2a, k2b, k2c, k2d);
            for (std::size_t j = 0; j < m; ++j) {
                ta[j] = x1[j] + 0.5 * ht * k2a[j];
                tb[j] = d2[j] + 0.5 * ht * k2b[j];
                tc[j] = r1[j] + 0.5 * ht * k2c[j];
                td[j] = r2[j] + 0.5 * ht * k2d[j];
            }
            rhs(t + 0.5 * ht, ta, tb, tc, td, k3a, k3b, k3c, k3d);
            for (std::size_t j = 0; j < m; ++j) {
                ta[j] = x1[j] + ht * k3a[j];
                tb[j] = d2[j] + ht * k3b[j];
                tc[j] = r1[j] + ht * k3c[j];
                td[j] = r2[j] + ht * k3d[j];
            }
            rhs(t + ht, ta, tb, tc, td, k4a, k4b, k4c, k4d);
            for (std::size_t j = 0; j < m; ++j) {
                x1[j] += ht / 6.0 * (k1a[j] + 2 * k2a[j] + 2 * k3a[j] + k4a[j]);
                d2[j] += ht / 6.0 * (k1b[j] + 2 * k2b[j] + 2 * k3b[j] + k4b[j]);
                r1[j] += ht / 6.0 * (k1c[j] + 2 * k2c[j] + 2 * k3c[j] + k4c[j]);
                r2[j] += ht / 6.0 * (k1d[j] + 2 * k2d[j] + 2 * k3d[j] + k4d[j]);
            }
        }
    }
    ch.x1_0 = x1;
    ch.x2_0 = d2;
    TraceSample end = trace.at(delta);
    ch.c_0 = end.c;
    ch.v1_0 = end.v1;
    ch.v2_0 = end.v2;
    ch.that1_0 = end.that1;
    ch.that2_0 = end.that2;

    // --- geometry tables in x2 ---------------------------------------------
    // A(delta, x2) = -x1'(theta)/x2'(theta) at theta(x2); then
    // That = -(1,A)/sqrt(1+A^2), kappa = delta/sqrt(1+A^2).
    {
        PeriodicField x1p = x1.derivative(), d2p = d2.derivative();
        detail::TrigInterp ix1p(x1p), id2p(d2p), idisp(d2);
        ch.A_x2 = PeriodicField(m);
        ch.that1_x2 = PeriodicField(m);
        ch.that2_x2 = PeriodicField(m);
        ch.kappa_x2 = PeriodicField(m);
        for (std::size_t j = 0; j < m; ++j) {
            double x2q = ch.A_x2.theta(j);
            double th = detail::invert_angle(idisp, x2q);
            double a = -ix1p(th) / (1.0 + id2p(th));
            double rq = std::sqrt(1.0 + a * a);
            ch.A_x2[j] = a;
            ch.that1_x2[j] = -1.0 / rq;
            ch.that2_x2[j] = -a / rq;
            ch.kappa_x2[j] = delta / rq;
        }
    }

    // --- (u, theta) tabulation by marching dx/du = kappa That ---------------
    {
        std::size_t M = m;
        detail::TrigInterp it1(ch.that1_x2), it2(ch.that2_x2), ik(ch.kappa_x2);
        PeriodicField dkt1 = ch.kappa_x2, dkt2 = ch.kappa_x2;
        for (std::size_t j = 0; j < M; ++j) {
            dkt1[j] = ch.kappa_x2[j] * ch.that1_x2[j];
            dkt2[j] = ch.kappa_x2[j] * ch.that2_x2[j];
        }
        detail::TrigInterp id1(dkt1.derivative()), id2k(dkt2.derivative());

        ch.x1_t = Tab2(n_tab, M, ch.du_tab);
        ch.x2_t = Tab2(n_tab, M, ch.du_tab);
        ch.that1_t = Tab2(n_tab, M, ch.du_tab);
        ch.that2_t = Tab2(n_tab, M, ch.du_tab);
        ch.kappa_t = Tab2(n_tab, M, ch.du_tab);
        ch.gsl_t = Tab2(n_tab, M, ch.du_tab);

        // per-theta ODE in u: y = (x1, x2, R1, R2)
        for (std::size_t j = 0; j < M; ++j) {
            double th = ch.x1_0.theta(j);
            double y[4] = {x1[j], th + d2[j], r1[j], r2[j]};
            auto f = [&](const double* yy, double* dy) {
                double t1v = it1(yy[1]), t2v = it2(yy[1]), kv = ik(yy[1]);
                dy[0] = kv * t1v;
                dy[1] = kv * t2v;
                dy[2] = yy[3] * id1(yy[1]);
                dy[3] = yy[3] * id2k(yy[1]);
            };
            double h = ch.du_tab;
            for (int i = 0;; ++i) {
                double t1v = it1(y[1]), t2v = it2(y[1]), kv = ik(y[1]);
                ch.x1_t.row(i)[j] = y[0];
                ch.x2_t.row(i)[j] = y[1] - th;  // displacement
                ch.that1_t.row(i)[j] = t1v;
                ch.that2_t.row(i)[j] = t2v;
                ch.kappa_t.row(i)[j] = kv;
                ch.gsl_t.row(i)[j] = y[2] * y[2] + y[3] * y[3];
                if (i == n_tab) break;
                double k1[4], k2[4], k3[4], k4[4], yt[4];
                f(y, k1);
                for (int q = 0; q < 4; ++q) yt[q] = y[q] + 0.5 * h * k1[q];
                f(yt, k2);
                for (int q = 0; q < 4; ++q) yt[q] = y[q] + 0.5 * h * k2[q];
                f(yt, k3);
                for (int q = 0; q < 4; ++q) yt[q] = y[q] + h * k3[q];
                f(yt, k4);
                for (int q = 0; q < 4; ++q) y[q] += h / 6.0 * (k1[q] + 2 * k2[q] + 2 * k3[q] + k4[q]);
            }
        }
    }

    // --- u-series at u = 0 ---------------------------------------------------
    // x2(u) solves dx2/du = (kappa That2)(x2);  R solves dR/du = R2 d(kappa That)/dx2.
    {
        const int N = order;
        auto deriv_stack = [&](const PeriodicField& f) {
            std::vector<PeriodicField> d{f};
            for (int k = 1; k <= N; ++k) d.push_back(d.back().derivative());
            return d;
        };
        PeriodicField kt1(m), kt2(m);
        for (std::size_t j = 0; j < m; ++j) {
            kt1[j] = ch.kappa_x2[j] * ch.that1_x2[j];
            kt2[j] = ch.kappa_x2[j] * ch.that2_x2[j];
        }
        auto s_kt1 = deriv_stack(kt1), s_kt2 = deriv_stack(kt2);
        auto s_dk1 = deriv_stack(kt1.derivative()), s_dk2 = deriv_stack(kt2.derivative());
        auto s_t1 = deriv_stack(ch.that1_x2), s_t2 = deriv_stack(ch.that2_x2),
             s_k = deriv_stack(ch.kappa_x2);

        // evaluate a derivative stack at the base points x2_0(theta)
        PeriodicField base(m);
        for (std::size_t j = 0; j < m; ++j) base[j] = ch.x1_0.theta(j) + d2[j];
        auto stack_at_base = [&](const std::vector<PeriodicField>& st) {
            std::vector<PeriodicField> out;
            for (const auto& f : st) {
                detail::TrigInterp itp(f);
                PeriodicField g(m);
                for (std::size_t j = 0; j < m; ++j) g[j] = itp(base[j]);
                out.push_back(g);
            }
            return out;
        };
        auto b_kt1 = stack_at_base(s_kt1), b_kt2 = stack_at_base(s_kt2),
             b_dk1 = stack_at_base(s_dk1), b_dk2 = stack_at_base(s_dk2),
             b_t1 = stack_at_base(s_t1), b_t2 = stack_at_base(s_t2), b_k = stack_at_base(s_k);

        // compose table stack with xi(u) = x2-series minus base (xi(0)=0)
        auto compose = [&](const std::vector<PeriodicField>& b, const Jet2& xi) {
            Jet2 out(0, N, m);
            Jet2 pw = Jet2::constant(0, N, m, 1.0);
            double fact = 1.0;
            for (int k = 0; k <= N; ++k) {
                if (k > 0) {
                    pw = pw * xi;
                    fact *= k;
                }
                for (int q = 0; q <= N; ++q)
                    for (std::size_t j = 0; j < m; ++j)
                        out.at(0, q)[j] += b[k][j] / fact * pw.at(0, q)[j];
            }
            return out;
        };

        Jet2 x2s(0, N, m);  // full x2 series (value), xi = x2s - base
        x2s.at(0, 0) = base;
        Jet2 r1s(0, N, m), r2s(0, N, m);
        r1s.at(0, 0) = r1;
        r2s.at(0, 0) = r2;
        for (int p = 0; p < N; ++p) {
            Jet2 xi = x2s;
            xi.at(0, 0) = PeriodicField(m);
            Jet2 g2 = compose(b_kt2, xi);
            Jet2 e1 = compose(b_dk1, xi);
            Jet2 e2 = compose(b_dk2, xi);
            for (std::size_t j = 0; j < m; ++j) x2s.at(0, p + 1)[j] = g2.at(0, p)[j] / (p + 1);
            Jet2 dr1 = r2s * e1, dr2 = r2s * e2;
            for (std::size_t j = 0; j < m; ++j) {
                r1s.at(0, p + 1)[j] = dr1.at(0, p)[j] / (p + 1);
                r2s.at(0, p + 1)[j] = dr2.at(0, p)[j] / (p + 1);
            }
        }
        Jet2 xi = x2s;
        xi.at(0, 0) = PeriodicField(m);
        ch.x2_s = x2s;
        ch.that1_s = compose(b_t1, xi);
        ch.that2_s = compose(b_t2, xi);
        ch.kappa_s = compose(b_k, xi);
        ch.gsl_s = r1s * r1s + r2s * r2s;
        Jet2 g1 = compose(b_kt1, xi);
        ch.x1_s = Jet2(0, N, m);
        ch.x1_s.at(0, 0) = x1;
        for (int p = 0; p < N; ++p)
            for (std::size_t j = 0; j < m; ++j) ch.x1_s.at(0, p + 1)[j] = g1.at(0, p)[j] / (p + 1);
    }
    return ch;
}

// L^n jets of the diagonalized right solution on S_{delta,0}.  Along the C0
// generators (theta fixed, L(t) = 1) these are plain t-derivatives of the
// diagonalized trace.
struct RightJets {
    std::vector<PeriodicField> u0, um1, um2;  // index n = 0..N
};

inline std::vector<PeriodicField> diagonal_trace(const GasLaw& law, const TraceSample& s) {
    std::size_t m = s.c.size();
    PeriodicField u0(m), um1(m), um2(m);
    for (std::size_t j = 0; j < m; ++j) {
        InvariantState inv{0.0, 0.0, -s.v2[j]};
        double a = 2.0 * s.c[j] / (law.gamma - 1.0);
        inv.wbar = 0.5 * (a + s.v1[j]);
        inv.w = 0.5 * (a - s.v1[j]);
        DiagonalState d = diagonalize(inv, s.that1[j], s.that2[j]);
        u0[j] = d.u0;
        um1[j] = d.um1;
        um2[j] = d.um2;
    }
    return {u0, um1, um2};
}

inline RightJets constant_right_jets(const GasLaw& law, const PrimitiveState& right, int N,
                                     std::size_t m) {
    ConstantTrace tr(law, right, m);
    auto d = diagonal_trace(law, tr.at(0.0));
    RightJets rj{{d[0]}, {d[1]}, {d[2]}};
    for (int n = 1; n <= N; ++n) {
        rj.u0.push_back(PeriodicField(m));
        rj.um1.push_back(PeriodicField(m));
        rj.um2.push_back(PeriodicField(m));
    }
    return rj;
}

// Jets by centered finite differences of the diagonalized trace in t.
// Repeated central differencing of order n reaches n samples to each side.
inline RightJets right_jets_from_trace(const GasLaw& law, const BoundaryTrace& trace, double delta,
                                       int N, double h_rel = 2e-2) {
    std::size_t m = trace.grid_size();
    double h = h_rel * delta;
    int half = std::max(2, N + 1);
    std::vector<std::array<PeriodicField, 3>> samples;
    for (int q = -half; q <= half; ++q) {
        auto d = diagonal_trace(law, trace.at(delta + q * h));
        samples.push_back({d[0], d[1], d[2]});
    }
    RightJets rj;
    // divided-difference stencils: derivative n from successive differencing
    for (int n = 0; n <= N; ++n) {
        std::array<PeriodicField, 3> out{PeriodicField(m), PeriodicField(m), PeriodicField(m)};
        // central difference of order n applied to the sample stack
        std::vector<double> w(samples.size(), 0.0);
        w[half] = 1.0;
        for (int d = 0; d < n; ++d) {
            std::vector<double> nw(samples.size(), 0.0);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                if (i + 1 < samples.size()) nw[i + 1] += w[i] / (2.0 * h);
                if (i >= 1) nw[i - 1] -= w[i] / (2.0 * h);
            }
            w = nw;
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (w[i] == 0.0) continue;
            for (int c = 0; c < 3; ++c)
                for (std::size_t j = 0; j < m; ++j) out[c][j] += w[i] * samples[i][c][j];
        }
        rj.u0.push_back(out[0]);
        rj.um1.push_back(out[1]);
        rj.um2.push_back(out[2]);
    }
    return rj;
}

// Per-theta coefficient tables U^(lambda)_k, normalized so the series reads
// sum_k U_k u^k / k!, plus the derived Riemann-invariant tables.
struct TaylorData {
    GasLaw law{2.0, 0.5};
    int N = 0;
    std::size_t m = 0;
    std::vector<PeriodicField> u0, um1, um2;    // size N+1
    std::vector<PeriodicField> wb, w, p2;       // derived, size N+1
};

namespace detail {

// Slice series of the invariants V = P(That) U from the coefficient tables.
inline void invariant_series(const SliceChart& ch, const TaylorData& td, Jet2& wb, Jet2& w,
                             Jet2& p2, int nt) {
    const std::size_t m = td.m;
    const int N = td.N;
    Jet2 U0(nt, N, m), U1(nt, N, m), U2(nt, N, m);
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
        if (k > 0) fact *= k;
        for (std::size_t j = 0; j < m; ++j) {
            U0.at(0, k)[j] = td.u0[k][j] / fact;
            U1.at(0, k)[j] = td.um1[k][j] / fact;
            U2.at(0, k)[j] = td.um2[k][j] / fact;
        }
    }
    Jet2 t1(nt, N, m), t2(nt, N, m);
    for (int k = 0; k <= N; ++k) {
        t1.at(0, k) = ch.that1_s.at(0, k);
        t2.at(0, k) = ch.that2_s.at(0, k);
    }
    Jet2 half = Jet2::constant(nt, N, m, 0.5);
    Jet2 one = Jet2::constant(nt, N, m, 1.0);
    wb = half * ((one - t1) * U0 + t2 * U1 + (one + t1) * U2);
    w = half * ((one + t1) * U0 - t2 * U1 + (one - t1) * U2);
    p2 = t1 * U1 + t2 * U0 - t2 * U2;
}

// Builds the full (s=t-delta, u) jets of the frame state to t-order nt.
inline FrameState<Jet2> evolve_jets(const SliceChart& ch, const TaylorData& td, int nt) {
    const std::size_t m = td.m;
    const int N = td.N;
    FrameState<Jet2> st{Jet2(nt, N, m), Jet2(nt, N, m), Jet2(nt, N, m), Jet2(nt, N, m),
                        Jet2(nt, N, m), Jet2(nt, N, m), Jet2(nt, N, m), Jet2(nt, N, m)};
    invariant_series(ch, td, st.wb, st.w, st.p2, nt);
    for (int k = 0; k <= N; ++k) {
        st.t1.at(0, k) = ch.that1_s.at(0, k);
        st.t2.at(0, k) = ch.that2_s.at(0, k);
        st.kap.at(0, k) = ch.kappa_s.at(0, k);
        st.gsl.at(0, k) = ch.gsl_s.at(0, k);
    }
    for (int n = 0; n < nt; ++n) {
        FrameState<Jet2> d = frame_time_derivative(ch.law.gamma, st);
        auto lift = [&](Jet2& q, const Jet2& dq) {
            for (int k = 0; k <= N; ++k) q.at(n + 1, k) = 1.0 / double(n + 1) * dq.at(n, k);
        };
        lift(st.wb, d.wb);
        lift(st.w, d.w);
        lift(st.p2, d.p2);
        lift(st.t1, d.t1);
        lift(st.t2, d.t2);
        lift(st.kap, d.kap);
        lift(st.gsl, d.gsl);
        lift(st.xi, d.xi);
    }
    return st;
}

// Diagonal components of the evolved state: U = P^-1(That) V as jets.
inline std::array<Jet2, 3> diagonal_jets(const SliceChart& ch, const FrameState<Jet2>& st) {
    const int nt = st.wb.order_t(), N = st.wb.order_u();
    const std::size_t m = st.wb.grid_size();
    (void)ch;
    Jet2 half = Jet2::constant(nt, N, m, 0.5);
    Jet2 one = Jet2::constant(nt, N, m, 1.0);
    Jet2 u0 = half * ((one - st.t1) * st.wb + (one + st.t1) * st.w) + half * (st.t2 * st.p2);
    Jet2 u1 = st.t2 * st.wb - st.t2 * st.w + st.t1 * st.p2;
    Jet2 u2 = half * ((one + st.t1) * st.wb + (one - st.t1) * st.w) - half * (st.t2 * st.p2);
    return {u0, u1, u2};
}

}  // namespace detail

// Inductive determination of the Taylor coefficients: U^(0) is imposed
// (U^(0)_1 = -2/(gamma+1), higher coefficients zero) and, for lambda = -1,-2,
// U^(lambda)_{n+1} is solved from the matching condition
// L^{n+1} U^(lambda) = L^{n+1} U^(lambda)_r on S_{delta,0}, whose dependence
// on the new coefficient is linear with factor (lambda c / kappa)^{n+1}.
inline TaylorData taylor_coefficients(const GasLaw& law, const SliceChart& ch,
                                      const RightJets& jets, int N) {
    const std::size_t m = ch.m;
    TaylorData td;
    td.law = law;
    td.N = N;
    td.m = m;
    td.u0.assign(N + 1, PeriodicField(m));
    td.um1.assign(N + 1, PeriodicField(m));
    td.um2.assign(N + 1, PeriodicField(m));
    td.u0[0] = jets.u0[0];
    td.um1[0] = jets.um1[0];
    td.um2[0] = jets.um2[0];
    if (N >= 1) td.u0[1] = PeriodicField(m, -2.0 / (law.gamma + 1.0));

    PeriodicField c0 = ch.c_0;
    PeriodicField kap0(m);
    for (std::size_t j = 0; j < m; ++j) kap0[j] = ch.kappa_s.at(0, 0)[j];

    for (int n = 0; n < N; ++n) {
        FrameState<Jet2> st = detail::evolve_jets(ch, td, n + 1);
        auto uj = detail::diagonal_jets(ch, st);
        double fact = 1.0;
        for (int q = 2; q <= n + 1; ++q) fact *= q;
        for (int lam = 1; lam <= 2; ++lam) {
            const PeriodicField& target = lam == 1 ? jets.um1[n + 1] : jets.um2[n + 1];
            std::vector<PeriodicField>& dst = lam == 1 ? td.um1 : td.um2;
            PeriodicField coeff(m);
            for (std::size_t j = 0; j < m; ++j) {
                double M0 = fact * uj[lam].at(n + 1, 0)[j];
                double principal = std::pow(-double(lam) * c0[j] / kap0[j], n + 1);
                coeff[j] = (target[j] - M0) / principal;
            }
            dst[n + 1] = coeff;
        }
    }

    // derived Riemann-invariant coefficient tables
    Jet2 wb, w, p2;
    detail::invariant_series(ch, td, wb, w, p2, 0);
    td.wb.assign(N + 1, PeriodicField(m));
    td.w.assign(N + 1, PeriodicField(m));
    td.p2.assign(N + 1, PeriodicField(m));
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
        if (k > 0) fact *= k;
        for (std::size_t j = 0; j < m; ++j) {
            td.wb[k][j] = fact * wb.at(0, k)[j];
            td.w[k][j] = fact * w.at(0, k)[j];
            td.p2[k][j] = fact * p2.at(0, k)[j];
        }
    }
    return td;
}

struct MatchingReport {
    // residual[lambda][n] = max_theta |L^n U^(lambda) - L^n U^(lambda)_r|
    std::array<std::vector<double>, 3> residual;
    double max_imposed = 0.0;  // over lambda = -1,-2 and the n = 0 traces
    double max_lambda0 = 0.0;  // lambda = 0, n >= 1: matches automatically
};

inline MatchingReport verify_matching(const GasLaw& law, const SliceChart& ch,
                                      const TaylorData& td, const RightJets& jets) {
    (void)law;
    const int N = td.N;
    FrameState<Jet2> st = detail::evolve_jets(ch, td, N);
    auto uj = detail::diagonal_jets(ch, st);
    MatchingReport rep;
    for (int lam = 0; lam < 3; ++lam) {
        const auto& tgt = lam == 0 ? jets.u0 : (lam == 1 ? jets.um1 : jets.um2);
        double fact = 1.0;
        for (int n = 0; n <= N; ++n) {
            if (n > 0) fact *= n;
            double r = 0.0;
            for (std::size_t j = 0; j < td.m; ++j)
                r = std::fmax(r, std::fabs(fact * uj[lam].at(n, 0)[j] - tgt[n][j]));
            rep.residual[lam].push_back(r);
            if (lam == 0 && n >= 1)
                rep.max_lambda0 = std::fmax(rep.max_lambda0, r);
            else if (lam != 0 || n == 0)
                rep.max_imposed = std::fmax(rep.max_imposed, r);
        }
    }
    return rep;
}

// Finite Taylor sum of the Riemann invariants at (u, theta) on Sigma_delta.
inline InvariantState evaluate_data(const TaylorData& td, double u, double theta) {
    if (u < -1e-12) throw std::domain_error("evaluate_data: u out of range");
    auto horner = [&](const std::vector<PeriodicField>& coeff) {
        double fact = 1.0;
        double acc = 0.0, upow = 1.0;
        for (int k = 0; k <= td.N; ++k) {
            if (k > 0) {
                fact *= k;
                upow *= u;
            }
            acc += coeff[k].interpolate(theta) * upow / fact;
        }
        return acc;
    };
    return {horner(td.wb), horner(td.w), horner(td.p2)};
}

// Limiting data on the singular set and the front seed curves.
struct SingularTrace {
    PeriodicField wbar, w, psi2;  // right/left traces at (0, theta), theta = x2
};

inline InvariantState limiting_data(const SingularTrace& right, double gamma, double u,
                                    double theta) {
    return {right.wbar.interpolate(theta) - 2.0 / (gamma + 1.0) * u, right.w.interpolate(theta),
            right.psi2.interpolate(theta)};
}

struct FrontGraph {
    PeriodicField f;
    PeriodicField fprime;
    double value(double alpha) const { return f.interpolate(alpha); }
    double slope(double alpha) const { return fprime.interpolate(alpha); }
};

inline FrontGraph h0_graph(double gamma, const SingularTrace& right, const SingularTrace& left,
                           double u_star) {
    std::size_t m = right.wbar.size();
    PeriodicField f(m);
    for (std::size_t j = 0; j < m; ++j) {
        f[j] = 0.5 * (gamma + 1.0) * (right.wbar[j] - left.wbar[j]);
        if (!(right.wbar[j] > left.wbar[j]))
            throw std::domain_error("h0_graph: requires wbar_r > wbar_l pointwise");
        if (f[j] > u_star)
            throw std::domain_error("h0_graph: front lies outside the constructed fan");
    }
    return {f, f.derivative()};
}

inline FrontGraph h0bar_graph(double gamma, const SingularTrace& right, const SingularTrace& left,
                              double u_star) {
    std::size_t m = right.w.size();
    PeriodicField f(m);
    for (std::size_t j = 0; j < m; ++j) {
        f[j] = 0.5 * (gamma + 1.0) * (left.w[j] - right.w[j]);
        if (!(left.w[j] > right.w[j]))
            throw std::domain_error("h0bar_graph: requires w_l > w_r pointwise");
        if (f[j] > u_star)
            throw std::domain_error("h0bar_graph: front lies outside the constructed fan");
    }
    return {f, f.derivative()};
}

}  // namespace rarewave
