#pragma once

// Numerical verification of the rarefaction-data ansatz on Sigma_delta:
// the sup-norm hierarchy for the foliation geometry and the Riemann
// invariants, the weighted energies, and the irrotationality of the data.

#include <numbers>
#include <string>
#include <vector>

#include "rarewave/slice.hpp"

namespace rarewave {

struct AnsatzEntry {
    std::string name;
    double measured = 0.0;
    double scale = 0.0;  // asserted bound (eps/delta combination)
    double ratio = 0.0;  // measured / scale, the "constant" of the inequality
};

struct AnsatzReport {
    double eps = 0.0, delta = 0.0, u_star = 0.0;
    std::vector<AnsatzEntry> entries;
    const AnsatzEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

// Tabulated slice state assembled from a chart and constructed Taylor data.
inline FrameState<Tab2> slice_state_tab(const SliceChart& ch, const TaylorData& td) {
    const std::size_t m = ch.m;
    const int n = ch.n_tab;
    FrameState<Tab2> st{Tab2(n, m, ch.du_tab), Tab2(n, m, ch.du_tab), Tab2(n, m, ch.du_tab),
                        Tab2(n, m, ch.du_tab), Tab2(n, m, ch.du_tab), Tab2(n, m, ch.du_tab),
                        Tab2(n, m, ch.du_tab), Tab2(n, m, ch.du_tab)};
    for (int i = 0; i <= n; ++i) {
        double u = i * ch.du_tab;
        double upow = 1.0, fact = 1.0;
        PeriodicField wb(m), w(m), p2(m);
        for (int k = 0; k <= td.N; ++k) {
            if (k > 0) {
                upow *= u;
                fact *= k;
            }
            double c = upow / fact;
            for (std::size_t j = 0; j < m; ++j) {
                wb[j] += c * td.wb[k][j];
                w[j] += c * td.w[k][j];
                p2[j] += c * td.p2[k][j];
            }
        }
        st.wb.row(i) = wb;
        st.w.row(i) = w;
        st.p2.row(i) = p2;
        st.t1.row(i) = ch.that1_t.row(i);
        st.t2.row(i) = ch.that2_t.row(i);
        st.kap.row(i) = ch.kappa_t.row(i);
        st.gsl.row(i) = ch.gsl_t.row(i);
        // xi = 0 on the slice
    }
    return st;
}

namespace detail {

inline Tab2 tab_c(double gamma, const FrameState<Tab2>& s) { return 0.5 * (gamma - 1.0) * (s.wb + s.w); }

// Cartesian derivatives of a tabulated quantity through the chart Jacobian.
inline void cartesian_derivatives(const SliceChart& ch, const Tab2& f, Tab2& d1, Tab2& d2) {
    Tab2 fu = f.du(), fth = f.dtheta();
    Tab2 x1u = ch.x1_t.du(), x1th = ch.x1_t.dtheta();
    Tab2 x2u = ch.x2_t.du(), x2th = ch.x2_t.dtheta();
    d1 = f;
    d2 = f;
    for (int i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.grid_size(); ++j) {
            double a = x1u.row(i)[j], b = x2u.row(i)[j];
            double c = x1th.row(i)[j], d = 1.0 + x2th.row(i)[j];
            double det = a * d - b * c;
            d1.row(i)[j] = (d * fu.row(i)[j] - b * fth.row(i)[j]) / det;
            d2.row(i)[j] = (-c * fu.row(i)[j] + a * fth.row(i)[j]) / det;
        }
}

inline FrameState<Tab2> frame_axpy(const FrameState<Tab2>& a, const FrameState<Tab2>& b,
                                   double w) {
    FrameState<Tab2> r = a;
    r.wb += w * b.wb;
    r.w += w * b.w;
    r.p2 += w * b.p2;
    r.t1 += w * b.t1;
    r.t2 += w * b.t2;
    r.kap += w * b.kap;
    r.gsl += w * b.gsl;
    r.xi += w * b.xi;
    return r;
}

inline FrameState<Tab2> frame_rk4(double gamma, const FrameState<Tab2>& s, double h) {
    auto k1 = frame_time_derivative(gamma, s);
    auto k2 = frame_time_derivative(gamma, frame_axpy(s, k1, 0.5 * h));
    auto k3 = frame_time_derivative(gamma, frame_axpy(s, k2, 0.5 * h));
    auto k4 = frame_time_derivative(gamma, frame_axpy(s, k3, h));
    FrameState<Tab2> r = frame_axpy(s, k1, h / 6.0);
    r = frame_axpy(r, k2, h / 3.0);
    r = frame_axpy(r, k3, h / 3.0);
    r = frame_axpy(r, k4, h / 6.0);
    return r;
}

inline double quad_sigma(const SliceChart& ch, const Tab2& integrand) {
    // trapezoid in u, uniform in theta, measure kappa sqrt(gsl) du dtheta
    const std::size_t m = ch.m;
    double dth = 2.0 * std::numbers::pi / double(m);
    double total = 0.0;
    for (int i = 0; i <= ch.n_tab; ++i) {
        double wu = (i == 0 || i == ch.n_tab) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < m; ++j)
            total += wu * integrand.row(i)[j] * ch.kappa_t.row(i)[j] *
                     std::sqrt(ch.gsl_t.row(i)[j]) * ch.du_tab * dth;
    }
    return total;
}

}  // namespace detail

inline AnsatzReport verify_ansatz(const GasLaw& law, const SliceChart& ch, const TaylorData& td,
                                  double eps) {
    AnsatzReport rep;
    rep.eps = eps;
    rep.delta = ch.delta;
    rep.u_star = ch.u_star;
    const double d = ch.delta;
    const double gm = law.gamma;
    auto add = [&](const std::string& name, double measured, double scale) {
        rep.entries.push_back({name, measured, scale, scale > 0.0 ? measured / scale : 0.0});
    };

    FrameState<Tab2> st = slice_state_tab(ch, td);
    Tab2 c = detail::tab_c(gm, st);
    Tab2 rsg = st.gsl.sqrt().reciprocal();
    auto Xh = [&](const Tab2& f) { return rsg * f.dtheta(); };
    auto T = [&](const Tab2& f) { return f.du(); };  // Xi = 0 on the slice

    // ---- (I_inf,1): foliation geometry ----
    Tab2 one = st.gsl;
    for (int i = 0; i < one.rows(); ++i)
        for (std::size_t j = 0; j < one.grid_size(); ++j) one.row(i)[j] = 1.0;
    add("gslash_minus_1", (st.gsl - one).max_abs(), eps * d);
    add("kappa_over_delta_minus_1", ((1.0 / d) * st.kap - one).max_abs(), eps * d);
    add("kappa_over_delta_minus_1_sharp", ((1.0 / d) * st.kap - one).max_abs(), eps * eps * d * d);
    add("That2", st.t2.max_abs(), eps * d);
    add("That1_plus_1", (st.t1 + one).max_abs(), eps * eps * d * d);

    std::vector<std::pair<std::string, Tab2>> zops;
    zops.emplace_back("T", Tab2());
    auto apply_z = [&](const std::string& which, const Tab2& f) {
        Tab2 g = f;
        for (char zc : which) g = (zc == 'T') ? T(g) : Xh(g);
        return g;
    };
    for (const std::string& alpha : {std::string("T"), std::string("X"), std::string("TT"),
                                     std::string("TX"), std::string("XT"), std::string("XX")}) {
        add("Z[" + alpha + "](gslash)", apply_z(alpha, st.gsl).max_abs(), eps * d);
        add("Z[" + alpha + "](kappa)", apply_z(alpha, st.kap).max_abs(), eps * d * d);
        add("Z[" + alpha + "](That1)", apply_z(alpha, st.t1).max_abs(), eps * eps * d * d);
        add("Z[" + alpha + "](That2)", apply_z(alpha, st.t2).max_abs(), eps * d);
    }

    // ---- (I_inf,2): pointwise bounds on the invariants ----
    FrameState<Tab2> dt = frame_time_derivative(gm, st);
    add("L(wb)", dt.wb.max_abs(), eps);
    add("L(w)", dt.w.max_abs(), eps);
    add("L(psi2)", dt.p2.max_abs(), eps);
    add("Xh(wb)", Xh(st.wb).max_abs(), eps);
    add("Xh(w)", Xh(st.w).max_abs(), eps);
    add("Xh(psi2)", Xh(st.p2).max_abs(), eps);
    add("T(w)", T(st.w).max_abs(), eps * d);
    add("T(psi2)", T(st.p2).max_abs(), eps * d);
    {
        Tab2 twb = T(st.wb);
        for (int i = 0; i < twb.rows(); ++i)
            for (std::size_t j = 0; j < twb.grid_size(); ++j)
                twb.row(i)[j] += 2.0 / (gm + 1.0);
        add("T(wb)_plus_2/(gamma+1)", twb.max_abs(), eps * d);
    }

    // L Z^alpha psi by a central difference of two tiny RK4 steps in time.
    {
        const double h = 1e-4 * d;
        FrameState<Tab2> sp = detail::frame_rk4(gm, st, h), sm = detail::frame_rk4(gm, st, -h);
        auto z_at = [&](const FrameState<Tab2>& s, const std::string& which, int comp) {
            Tab2 rs = s.gsl.sqrt().reciprocal();
            Tab2 g = comp == 0 ? s.wb : (comp == 1 ? s.w : s.p2);
            for (char zc : which)
                g = (zc == 'T') ? Tab2(g.du() - s.xi * g.dtheta()) : Tab2(rs * g.dtheta());
            return g;
        };
        const char* psi_names[3] = {"wb", "w", "psi2"};
        for (const std::string& alpha : {std::string("T"), std::string("X"), std::string("TT"),
                                         std::string("TX"), std::string("XT"), std::string("XX")}) {
            for (int comp = 0; comp < 3; ++comp) {
                Tab2 zp = z_at(sp, alpha, comp), zm = z_at(sm, alpha, comp);
                Tab2 lz = (1.0 / (2.0 * h)) * (zp - zm);
                add("LZ[" + alpha + "](" + psi_names[comp] + ")", lz.max_abs(), eps);
                Tab2 z0 = z_at(st, alpha, comp);
                add("XhZ[" + alpha + "](" + psi_names[comp] + ")", Xh(z0).max_abs(), eps);
                add("TZ[" + alpha + "](" + psi_names[comp] + ")/delta", (1.0 / d) * T(z0).max_abs(),
                    eps);
            }
        }
    }

    // ---- (I_2): energies E + Ebar at (delta, u*) ----
    {
        Tab2 mu = c * st.kap;
        Tab2 ick = c.reciprocal() * st.kap;
        auto energy_pair_of = [&](const Tab2& psi, const Tab2& lpsi) {
            Tab2 xp = Xh(psi);
            Tab2 e_int = 0.5 * (ick * (ick * (lpsi * lpsi) + mu * (xp * xp)));
            Tab2 lbar = ick * lpsi + 2.0 * T(psi);
            Tab2 eb_int = 0.5 * (lbar * lbar + (st.kap * st.kap) * (xp * xp));
            return detail::quad_sigma(ch, e_int) + detail::quad_sigma(ch, eb_int);
        };
        add("E+Ebar(w)", energy_pair_of(st.w, dt.w), eps * eps * d * d);
        add("E+Ebar(psi2)", energy_pair_of(st.p2, dt.p2), eps * eps * d * d);

        // first- and second-order energies with the Cartesian-frame commutators
        // Tring = -delta d/dx1, Xring = d/dx2 on Sigma_delta
        auto zring = [&](const std::string& which, const Tab2& f) {
            Tab2 g = f;
            for (char zc : which) {
                Tab2 d1, d2;
                detail::cartesian_derivatives(ch, g, d1, d2);
                g = (zc == 'T') ? Tab2((-d) * d1) : d2;
            }
            return g;
        };
        const double h_en = 1e-4 * d;
        FrameState<Tab2> st_p = detail::frame_rk4(gm, st, h_en);
        FrameState<Tab2> st_m = detail::frame_rk4(gm, st, -h_en);
        for (const std::string& alpha : {std::string("T"), std::string("X"), std::string("TT"),
                                         std::string("XX")}) {
            for (int comp = 0; comp < 3; ++comp) {
                const Tab2& psi = comp == 0 ? st.wb : (comp == 1 ? st.w : st.p2);
                Tab2 zpsi = zring(alpha, psi);
                // L(Z^alpha psi) via the tiny-step difference along the flow;
                // the Cartesian frame of zring is time-independent
                const double h = h_en;
                const FrameState<Tab2>& stp = st_p;
                const FrameState<Tab2>& stm = st_m;
                const Tab2& pp = comp == 0 ? stp.wb : (comp == 1 ? stp.w : stp.p2);
                const Tab2& pm = comp == 0 ? stm.wb : (comp == 1 ? stm.w : stm.p2);
                Tab2 lzpsi = (1.0 / (2.0 * h)) * (zring(alpha, pp) - zring(alpha, pm));
                Tab2 e_int = 0.5 * (ick * (ick * (lzpsi * lzpsi) + mu * (Xh(zpsi) * Xh(zpsi))));
                Tab2 lbar = ick * lzpsi + 2.0 * T(zpsi);
                Tab2 eb_int = 0.5 * (lbar * lbar + (st.kap * st.kap) * (Xh(zpsi) * Xh(zpsi)));
                double e = detail::quad_sigma(ch, e_int) + detail::quad_sigma(ch, eb_int);
                add("E_n[Zr" + alpha + "](" + (comp == 0 ? "wb" : comp == 1 ? "w" : "psi2") + ")",
                    e, eps * eps * d * d);
            }
        }
    }

    // ---- (I_irrotational): curl of v on the slice ----
    {
        Tab2 v1 = st.wb - st.w;
        Tab2 v2 = -1.0 * st.p2;
        Tab2 a1, a2, b1, b2;
        detail::cartesian_derivatives(ch, v2, a1, a2);
        detail::cartesian_derivatives(ch, v1, b1, b2);
        add("curl_v", (a1 - b2).max_abs(), std::fmax(eps, 1e-30));
    }

    // ---- (I_0): width of the data strip ----
    {
        double c_r_mean = 0.0;
        for (std::size_t j = 0; j < ch.m; ++j) c_r_mean += ch.c_0[j];
        c_r_mean /= double(ch.m);
        add("u_star_over_default", ch.u_star, default_u_star(law, c_r_mean));
    }
    return rep;
}

}  // namespace rarewave
