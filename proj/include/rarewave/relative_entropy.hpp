#pragma once

// Relative entropy machinery for weak-strong comparison: alpha, the relative
// flux beta, the QF remainders, discrete entropy-inequality residuals of
// solver runs, and the Gronwall diagnostic.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rarewave/solver2d.hpp"

namespace rarewave {

inline double rel_entropy_alpha(const GasLaw& law, const ConservedState& u,
                                const ConservedState& ub) {
    if (!(u.rho > 0.0 && ub.rho > 0.0))
        throw std::domain_error("rel_entropy_alpha: requires positive densities");
    double eu = entropy(law, u);
    double eb = entropy(law, ub);
    auto grad = entropy_gradient(law, ub);
    return eu - eb - grad[0] * (u.rho - ub.rho) - grad[1] * (u.p1 - ub.p1) -
           grad[2] * (u.p2 - ub.p2);
}

inline std::array<double, 2> rel_entropy_beta(const GasLaw& law, const ConservedState& u,
                                              const ConservedState& ub) {
    if (!(u.rho > 0.0 && ub.rho > 0.0))
        throw std::domain_error("rel_entropy_beta: requires positive densities");
    EntropyPair pu = entropy_pair(law, to_primitive(u));
    EntropyPair pb = entropy_pair(law, to_primitive(ub));
    auto grad = entropy_gradient(law, ub);
    std::array<double, 2> out{};
    for (int i = 0; i < 2; ++i) {
        ConservedState fu = physical_flux(law, u, i + 1);
        ConservedState fb = physical_flux(law, ub, i + 1);
        out[i] = pu.q[i] - pb.q[i] - grad[0] * (fu.rho - fb.rho) - grad[1] * (fu.p1 - fb.p1) -
                 grad[2] * (fu.p2 - fb.p2);
    }
    return out;
}

// QF^{i} remainders: first components vanish; the rest combine the pressure
// Bregman divergence with rho (v - vbar) quadratics.
inline std::array<std::array<double, 3>, 2> qf_terms(const GasLaw& law, const ConservedState& u,
                                                     const ConservedState& ub) {
    if (!(u.rho > 0.0 && ub.rho > 0.0))
        throw std::domain_error("qf_terms: requires positive densities");
    PrimitiveState s = to_primitive(u), sb = to_primitive(ub);
    double pb = pressure(law, sb.rho);
    double dp_bregman = pressure(law, s.rho) - pb -
                        law.gamma * pb / sb.rho * (s.rho - sb.rho);  // p'(rho) = gamma p / rho
    double d1 = s.v1 - sb.v1, d2 = s.v2 - sb.v2;
    return {{{0.0, dp_bregman + s.rho * d1 * d1, s.rho * d1 * d2},
             {0.0, s.rho * d1 * d2, dp_bregman + s.rho * d2 * d2}}};
}

// ---------------------------------------------------------------------------
// Discrete entropy inequality of the scheme
// ---------------------------------------------------------------------------

struct EntropyResidual {
    double time = 0.0;
    double dt = 0.0;
    double violation_sum = 0.0;      // cell-integrated positive part of D_c
    double max_cell_violation = 0.0;  // max_c D_c (should be <= rounding)
    double dissipation_total = 0.0;   // cell-integrated max(0, -D_c)
    double max_cell_dissipation = 0.0;
};

// One forward step from the given field; D_c = (eta_new - eta_old)/dt +
// div qhat(old) with the Rusanov companion entropy flux.  The scheme is
// entropy stable, so D_c <= 0 up to rounding; -D_c is the local dissipation.
inline EntropyResidual entropy_step_residual(const GasLaw& law, const Field2D& f0, double cfl,
                                             bool muscl = false) {
    Field2D f = f0;
    StepInfo info = step(f, law, cfl, 1, muscl);
    const Grid& g = f.grid();
    EntropyResidual r;
    r.time = f0.time();
    r.dt = info.dt;
    for (int i = 0; i < g.nx1; ++i)
        for (int j = 0; j < g.nx2; ++j) {
            double e0 = entropy(law, f0.at(i, j));
            double e1 = entropy(law, f.at(i, j));
            auto qe = detail::rusanov_entropy_flux(law, f0.at_bc(i, j), f0.at_bc(i + 1, j), 1);
            auto qw = detail::rusanov_entropy_flux(law, f0.at_bc(i - 1, j), f0.at_bc(i, j), 1);
            auto qn = detail::rusanov_entropy_flux(law, f0.at_bc(i, j), f0.at_bc(i, j + 1), 2);
            auto qs = detail::rusanov_entropy_flux(law, f0.at_bc(i, j - 1), f0.at_bc(i, j), 2);
            double d = (e1 - e0) / info.dt + (qe - qw) / g.dx1() + (qn - qs) / g.dx2();
            double cellv = d * g.cell_area();
            if (d > 0.0) {
                r.violation_sum += cellv;
                r.max_cell_violation = std::fmax(r.max_cell_violation, d);
            } else {
                r.dissipation_total -= cellv;
                r.max_cell_dissipation = std::fmax(r.max_cell_dissipation, -d);
            }
        }
    return r;
}

inline std::vector<EntropyResidual> entropy_inequality_residual(const GasLaw& law,
                                                                const std::vector<Field2D>& history,
                                                                double cfl = 0.45) {
    if (history.size() < 2)
        throw std::invalid_argument("entropy_inequality_residual: need >= 2 slices");
    std::vector<EntropyResidual> out;
    for (const Field2D& f : history) out.push_back(entropy_step_residual(law, f, cfl));
    return out;
}

// ---------------------------------------------------------------------------
// Compact-set constants and the weak-strong report
// ---------------------------------------------------------------------------

struct HullConstants {
    double rho_min = 0.0, rho_max = 0.0, vmax = 0.0;
    double c1 = 0.0, c2 = 0.0;  // norm equivalence c1 |dU|^2 <= alpha <= c2 |dU|^2
    double s0 = 0.0;            // |beta| <= s0 alpha
};

// Constants over the convex hull of observed states plus a 10% margin,
// realized by dense deterministic sampling.
inline HullConstants hull_constants(const GasLaw& law, const std::vector<const Field2D*>& fields) {
    HullConstants h;
    h.rho_min = 1e300;
    h.rho_max = 0.0;
    for (const Field2D* f : fields)
        for (const ConservedState& u : f->data()) {
            h.rho_min = std::fmin(h.rho_min, u.rho);
            h.rho_max = std::fmax(h.rho_max, u.rho);
            PrimitiveState p = to_primitive(u);
            h.vmax = std::fmax(h.vmax, std::fmax(std::fabs(p.v1), std::fabs(p.v2)));
        }
    h.rho_min *= 0.9;
    h.rho_max *= 1.1;
    h.vmax = h.vmax * 1.1 + 1e-6;

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> rho_d(h.rho_min, h.rho_max), v_d(-h.vmax, h.vmax);
    double lmin = 1e300, lmax = 0.0;
    for (int n = 0; n < 2000; ++n) {
        ConservedState u = to_conserved({rho_d(rng), v_d(rng), v_d(rng)});
        auto ev = entropy_hessian_eigenvalues(law, u);
        lmin = std::fmin(lmin, ev[0]);
        lmax = std::fmax(lmax, ev[2]);
    }
    h.c1 = 0.5 * lmin;
    h.c2 = 0.5 * lmax;
    for (int n = 0; n < 4000; ++n) {
        ConservedState u = to_conserved({rho_d(rng), v_d(rng), v_d(rng)});
        ConservedState ub = to_conserved({rho_d(rng), v_d(rng), v_d(rng)});
        double a = rel_entropy_alpha(law, u, ub);
        if (a < 1e-14) continue;
        auto b = rel_entropy_beta(law, u, ub);
        h.s0 = std::fmax(h.s0, std::hypot(b[0], b[1]) / a);
    }
    return h;
}

struct RelEntropyReport {
    std::vector<double> times;
    std::vector<double> integral_alpha;
    std::vector<double> sup_alpha;
    std::vector<double> entropy_residual;  // per-slice violation sums of run_a
    double gronwall_A = 0.0;
    double gronwall_C = 0.0;
    double fan_sign_min = 0.0;  // min of d(wbar)/dx1 inside run_b's front fan, t >= 0.1
    HullConstants constants;
};

// Compares an entropy solution (run_a) against a classical reference
// (run_b) on the shared grid: per-slice integral of alpha, a fitted
// exponential growth bound, the discrete entropy residual and the fan-sign
// diagnostic d(wbar)/dx1 > 0.
inline RelEntropyReport weak_strong_compare(const RunArtifacts& run_a, const RunArtifacts& run_b,
                                            const GasLaw& law) {
    if (!(run_a.grid == run_b.grid))
        throw std::invalid_argument("weak_strong_compare: grid mismatch");
    std::size_t n = std::min(run_a.slices.size(), run_b.slices.size());
    RelEntropyReport rep;
    std::vector<const Field2D*> hull_src;
    for (std::size_t s = 0; s < n; ++s) {
        const Field2D& fa = run_a.slices[s];
        const Field2D& fb = run_b.slices[s];
        if (std::fabs(fa.time() - fb.time()) > 1e-12)
            throw std::invalid_argument("weak_strong_compare: slice time mismatch");
        hull_src.push_back(&fa);
        hull_src.push_back(&fb);
        const Grid& g = fa.grid();
        double integral = 0.0, sup = 0.0;
        for (int i = 0; i < g.nx1; ++i)
            for (int j = 0; j < g.nx2; ++j) {
                double a = rel_entropy_alpha(law, fa.at(i, j), fb.at(i, j));
                integral += a * g.cell_area();
                sup = std::fmax(sup, a);
            }
        rep.times.push_back(fa.time());
        rep.integral_alpha.push_back(integral);
        rep.sup_alpha.push_back(sup);
        rep.entropy_residual.push_back(
            entropy_step_residual(law, fa, run_a.config.cfl, run_a.config.muscl).violation_sum);
    }
    rep.constants = hull_constants(law, hull_src);

    // fit integral_alpha(t) <= A exp(C t) by least squares on the log
    {
        std::vector<double> ts, ls;
        for (std::size_t s = 0; s < n; ++s)
            if (rep.integral_alpha[s] > 0.0 && rep.times[s] > 0.0) {
                ts.push_back(rep.times[s]);
                ls.push_back(std::log(rep.integral_alpha[s]));
            }
        if (ts.size() >= 2) {
            double mt = 0, ml = 0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                mt += ts[i];
                ml += ls[i];
            }
            mt /= double(ts.size());
            ml /= double(ts.size());
            double num = 0, den = 0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                num += (ts[i] - mt) * (ls[i] - ml);
                den += (ts[i] - mt) * (ts[i] - mt);
            }
            rep.gronwall_C = den > 0.0 ? num / den : 0.0;
            rep.gronwall_A = std::exp(ml - rep.gronwall_C * mt);
        }
    }

    // fan-sign diagnostic inside the extracted front fan of run_b
    {
        rep.fan_sign_min = 1e300;
        auto fronts = extract_fronts(law, run_b.config, run_b.slices);
        bool any = false;
        for (std::size_t s = 0; s < fronts.size() && s < run_b.slices.size(); ++s) {
            if (fronts[s].time < 0.1 || !fronts[s].separated) continue;
            const Field2D& f = run_b.slices[s];
            const Grid& g = f.grid();
            double width = fronts[s].mean[3] - fronts[s].mean[2];
            double inset = std::fmax(3.0 * g.dx1(), 0.15 * width);
            double lo = fronts[s].mean[2] + inset, hi = fronts[s].mean[3] - inset;
            if (!(lo < hi)) continue;
            for (int i = 1; i < g.nx1 - 1; ++i) {
                if (g.x1(i) < lo || g.x1(i) > hi) continue;
                for (int j = 0; j < g.nx2; ++j) {
                    InvariantState p = to_invariants(law, to_primitive(f.at(i + 1, j)));
                    InvariantState q = to_invariants(law, to_primitive(f.at(i - 1, j)));
                    rep.fan_sign_min =
                        std::fmin(rep.fan_sign_min, (p.wbar - q.wbar) / (2.0 * g.dx1()));
                    any = true;
                }
            }
        }
        if (!any) rep.fan_sign_min = 0.0;
    }
    return rep;
}

}  // namespace rarewave
