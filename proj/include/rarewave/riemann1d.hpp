#pragma once

// Exact self-similar solution of the plane-symmetric isentropic Riemann
// problem: wave curves, region classification, middle-state solve and
// xi = x/t sampling.  Left state sits at x < 0, right state at x > 0.

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rarewave/gas.hpp"

namespace rarewave {

enum class WaveKind { BackShock, FrontShock, BackRarefaction, FrontRarefaction, None };

struct Wave {
    WaveKind kind = WaveKind::None;
    double head = 0.0;  // slower edge (shock: head == tail == s)
    double tail = 0.0;  // faster edge
};

enum class Region { I, II, III, IV, Degenerate, Vacuum };

struct WaveFan {
    GasLaw law;
    PrimitiveState left, middle, right;
    Wave wave1, wave2;
    Region region = Region::Degenerate;
};

class VacuumError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Back-shock branch S1 through ref: velocity offset for rho >= rho_ref.
// Family 2 is the x -> -x mirror.
inline double shock_curve(const GasLaw& law, int family, const PrimitiveState& ref, double rho) {
    if (family != 1 && family != 2) throw std::invalid_argument("shock_curve: family must be 1 or 2");
    if (rho < ref.rho)
        throw std::domain_error("shock_curve: density on the rarefaction side of the curve");
    double h = (rho - ref.rho) * (pressure(law, rho) - pressure(law, ref.rho)) / (rho * ref.rho);
    double s = -std::sqrt(h);
    return family == 1 ? s : -s;
}

// Back-rarefaction branch R1 through ref: closed form of the integral of
// c(rho')/rho', valid for rho <= rho_ref.
inline double rarefaction_curve(const GasLaw& law, int family, const PrimitiveState& ref, double rho) {
    if (family != 1 && family != 2) throw std::invalid_argument("rarefaction_curve: family must be 1 or 2");
    if (rho > ref.rho)
        throw std::domain_error("rarefaction_curve: density on the shock side of the curve");
    double r = 2.0 / (law.gamma - 1.0) * (sound_speed(law, rho) - sound_speed(law, ref.rho));
    return family == 1 ? r : -r;
}

namespace detail {

// Velocity offset of the middle state along the wave curve through ref:
// phi(rho_m; U_l) = v_m - v_l and phi(rho_m; U_r) = v_r - v_m.  The shock and
// rarefaction branches join in the C^2 manner at rho = rho_ref.  Strictly
// decreasing in rho.
inline double wave_curve_phi(const GasLaw& law, const PrimitiveState& ref, double rho) {
    if (rho > ref.rho) return shock_curve(law, 1, ref, rho);
    return -rarefaction_curve(law, 1, ref, rho);
}

inline double wave_curve_phi_drho(const GasLaw& law, const PrimitiveState& ref, double rho) {
    if (rho > ref.rho) {
        double dp = pressure(law, rho) - pressure(law, ref.rho);
        double dr = rho - ref.rho;
        double h  = dr * dp / (rho * ref.rho);
        double c2 = sound_speed(law, rho) * sound_speed(law, rho);
        double hp = (dp + dr * c2) / (rho * ref.rho) - dr * dp / (rho * rho * ref.rho);
        return -0.5 * hp / std::sqrt(h);
    }
    return -sound_speed(law, rho) / rho;
}

inline bool is_vacuum_pair(const GasLaw& law, const PrimitiveState& ul, const PrimitiveState& ur) {
    InvariantState il = to_invariants(law, ul);
    InvariantState ir = to_invariants(law, ur);
    return il.wbar + ir.w <= 0.0;
}

}  // namespace detail

inline Region classify(const GasLaw& law, const PrimitiveState& ul, const PrimitiveState& ur) {
    if (ul.rho < vacuum_rho || ur.rho < vacuum_rho)
        throw std::domain_error("classify: vacuum input state");
    if (detail::is_vacuum_pair(law, ul, ur)) return Region::Vacuum;

    double dv  = ur.v1 - ul.v1;
    double gl  = detail::wave_curve_phi(law, ul, ul.rho) + detail::wave_curve_phi(law, ur, ul.rho) - dv;
    double gr  = detail::wave_curve_phi(law, ul, ur.rho) + detail::wave_curve_phi(law, ur, ur.rho) - dv;
    double tol = 1e-14 * (std::fabs(dv) + sound_speed(law, ul.rho) + sound_speed(law, ur.rho));

    if (std::fabs(gl) <= tol || std::fabs(gr) <= tol) return Region::Degenerate;
    // g decreasing in rho: g(rho_x) > 0 puts the root rho_m above rho_x.
    bool back_shock  = gl > 0.0;
    bool front_shock = gr > 0.0;
    if (back_shock && front_shock) return Region::II;
    if (!back_shock && !front_shock) return Region::IV;
    return back_shock ? Region::III : Region::I;
}

inline WaveFan solve(const GasLaw& law, const PrimitiveState& ul, const PrimitiveState& ur) {
    if (ul.rho < vacuum_rho || ur.rho < vacuum_rho)
        throw VacuumError("solve: vacuum input state");
    if (detail::is_vacuum_pair(law, ul, ur))
        throw VacuumError("solve: two-rarefaction pattern opens a vacuum (wbar_l + w_r <= 0)");

    Region region = classify(law, ul, ur);
    double dv = ur.v1 - ul.v1;

    auto g = [&](double rho) {
        return detail::wave_curve_phi(law, ul, rho) + detail::wave_curve_phi(law, ur, rho) - dv;
    };
    auto dg = [&](double rho) {
        return detail::wave_curve_phi_drho(law, ul, rho) + detail::wave_curve_phi_drho(law, ur, rho);
    };

    // Bracketed Newton with bisection fallback; g is strictly decreasing.
    double lo = 1e-10;
    double hi = 10.0 * std::fmax(ul.rho, ur.rho);
    while (g(hi) > 0.0) hi *= 2.0;
    double rho_m = 0.5 * (ul.rho + ur.rho);
    if (!(rho_m > lo && rho_m < hi)) rho_m = 0.5 * (lo + hi);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        double gm = g(rho_m);
        if (gm > 0.0) lo = rho_m; else hi = rho_m;
        double step = gm / dg(rho_m);
        double next = rho_m - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        double dr = std::fabs(next - rho_m);
        rho_m = next;
        if (dr <= 1e-16 * rho_m + 1e-300 || std::fabs(g(rho_m)) < 1e-14 * (1.0 + std::fabs(dv))) {
            converged = true;
            break;
        }
    }
    if (!converged && std::fabs(g(rho_m)) > 1e-12 * (1.0 + std::fabs(dv))) {
        std::ostringstream msg;
        msg << "solve: middle-state root finder did not converge; bracket [" << lo << ", " << hi
            << "], residual " << g(rho_m);
        throw std::runtime_error(msg.str());
    }

    double v_m = ul.v1 + detail::wave_curve_phi(law, ul, rho_m);
    PrimitiveState um{rho_m, v_m, ul.v2};  // sample() splits v2 at the particle path

    double strength_tol = 1e-13;
    auto make_wave = [&](const PrimitiveState& ref, bool back) {
        Wave wv;
        double cref = sound_speed(law, ref.rho);
        double cm   = sound_speed(law, rho_m);
        if (std::fabs(rho_m - ref.rho) <= strength_tol * std::fmax(rho_m, ref.rho)) {
            wv.kind = WaveKind::None;
            wv.head = wv.tail = back ? ref.v1 - cref : ref.v1 + cref;
        } else if (rho_m > ref.rho) {
            wv.kind = back ? WaveKind::BackShock : WaveKind::FrontShock;
            double j = std::sqrt((rho_m / ref.rho) * (pressure(law, rho_m) - pressure(law, ref.rho)) /
                                 (rho_m - ref.rho));
            wv.head = wv.tail = back ? ref.v1 - j : ref.v1 + j;
        } else if (back) {
            wv.kind = WaveKind::BackRarefaction;
            wv.head = ref.v1 - cref;
            wv.tail = v_m - cm;
        } else {
            wv.kind = WaveKind::FrontRarefaction;
            wv.head = v_m + cm;
            wv.tail = ref.v1 + cref;
        }
        return wv;
    };

    WaveFan fan{law, ul, um, ur, make_wave(ul, true), make_wave(ur, false), region};
    return fan;
}

inline PrimitiveState sample(const WaveFan& fan, double xi) {
    const GasLaw& law = fan.law;
    double gm = law.gamma;

    // Left of / inside wave 1.
    if (fan.wave1.kind == WaveKind::BackShock) {
        if (xi < fan.wave1.head) return fan.left;
    } else if (fan.wave1.kind == WaveKind::BackRarefaction) {
        if (xi < fan.wave1.head) return fan.left;
        if (xi <= fan.wave1.tail) {
            InvariantState il = to_invariants(law, fan.left);
            InvariantState s;
            s.wbar = il.wbar;
            s.w    = -2.0 / (gm + 1.0) * (xi + 0.5 * (gm - 3.0) * il.wbar);
            s.psi2 = -fan.left.v2;
            return from_invariants(law, s);
        }
    } else if (xi < fan.wave1.head) {
        return fan.left;
    }

    // Right of / inside wave 2.
    if (fan.wave2.kind == WaveKind::FrontShock) {
        if (xi >= fan.wave2.head) return fan.right;
    } else if (fan.wave2.kind == WaveKind::FrontRarefaction) {
        if (xi > fan.wave2.tail) return fan.right;
        if (xi >= fan.wave2.head) {
            InvariantState ir = to_invariants(law, fan.right);
            InvariantState s;
            s.w    = ir.w;
            s.wbar = 2.0 / (gm + 1.0) * (xi - 0.5 * (gm - 3.0) * ir.w);
            s.psi2 = -fan.right.v2;
            return from_invariants(law, s);
        }
    } else if (xi >= fan.wave2.head) {
        return fan.right;
    }

    PrimitiveState um = fan.middle;
    um.v2 = xi < um.v1 ? fan.left.v2 : fan.right.v2;
    return um;
}

}  // namespace rarewave
