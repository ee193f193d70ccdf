#pragma once

// Polytropic gas model: equation of state, Riemann invariants, state
// conversions and the mechanical energy pair (eta, q) shared by all solvers.

#include <array>
#include <cmath>
#include <stdexcept>

namespace rarewave {

// Below this density a state is treated as vacuum in conversions.
inline constexpr double vacuum_rho = 1e-12;

struct GasLaw {
    double gamma;
    double k0;

    GasLaw(double gamma_, double k0_) : gamma(gamma_), k0(k0_) {
        if (!(gamma > 1.0 && gamma < 3.0))
            throw std::invalid_argument("GasLaw: gamma must lie in (1,3)");
        if (!(k0 > 0.0))
            throw std::invalid_argument("GasLaw: k0 must be positive");
    }
};

struct PrimitiveState {
    double rho = 0.0;
    double v1  = 0.0;
    double v2  = 0.0;
};

struct ConservedState {
    double rho = 0.0;
    double p1  = 0.0;  // momentum rho*v1
    double p2  = 0.0;
};

// Riemann invariants wbar = (2c/(gamma-1) + v1)/2, w = (2c/(gamma-1) - v1)/2,
// psi2 = -v2. wbar is constant along L, w along Lbar.
struct InvariantState {
    double wbar = 0.0;
    double w    = 0.0;
    double psi2 = 0.0;
};

inline double pressure(const GasLaw& law, double rho) {
    if (rho < 0.0) throw std::domain_error("pressure: negative density");
    return law.k0 * std::pow(rho, law.gamma);
}

inline double sound_speed(const GasLaw& law, double rho) {
    if (rho < 0.0) throw std::domain_error("sound_speed: negative density");
    return std::sqrt(law.k0 * law.gamma) * std::pow(rho, 0.5 * (law.gamma - 1.0));
}

inline double enthalpy(const GasLaw& law, double rho) {
    double c = sound_speed(law, rho);
    return c * c / (law.gamma - 1.0);
}

// Specific internal energy e = k0 rho^(gamma-1)/(gamma-1). k0 is kept explicit
// so that d/dt eta + div q = 0 holds identically for smooth solutions.
inline double internal_energy(const GasLaw& law, double rho) {
    if (rho < 0.0) throw std::domain_error("internal_energy: negative density");
    return law.k0 * std::pow(rho, law.gamma - 1.0) / (law.gamma - 1.0);
}

inline double rho_from_sound_speed(const GasLaw& law, double c) {
    if (c < 0.0) throw std::domain_error("rho_from_sound_speed: negative sound speed");
    return std::pow(c * c / (law.k0 * law.gamma), 1.0 / (law.gamma - 1.0));
}

inline ConservedState to_conserved(const PrimitiveState& s) {
    return {s.rho, s.rho * s.v1, s.rho * s.v2};
}

inline PrimitiveState to_primitive(const ConservedState& s) {
    if (s.rho < vacuum_rho) return {s.rho, 0.0, 0.0};
    return {s.rho, s.p1 / s.rho, s.p2 / s.rho};
}

inline InvariantState to_invariants(const GasLaw& law, const PrimitiveState& s) {
    double c = sound_speed(law, s.rho);
    double a = 2.0 * c / (law.gamma - 1.0);
    return {0.5 * (a + s.v1), 0.5 * (a - s.v1), -s.v2};
}

inline PrimitiveState from_invariants(const GasLaw& law, const InvariantState& s) {
    double c = 0.5 * (law.gamma - 1.0) * (s.wbar + s.w);
    if (c < 0.0)
        throw std::domain_error("from_invariants: wbar + w < 0 (vacuum excursion)");
    return {rho_from_sound_speed(law, c), s.wbar - s.w, -s.psi2};
}

inline double lambda1(const GasLaw& law, const PrimitiveState& s) {
    return s.v1 - sound_speed(law, s.rho);
}

inline double lambda2(const GasLaw& law, const PrimitiveState& s) {
    return s.v1 + sound_speed(law, s.rho);
}

// Mechanical energy pair: eta = rho|v|^2/2 + p/(gamma-1), q = (eta + p) v.
// "Entropy" here is the mathematical selection pair, not thermodynamic entropy.
struct EntropyPair {
    double eta;
    std::array<double, 2> q;
};

inline EntropyPair entropy_pair(const GasLaw& law, const PrimitiveState& s) {
    if (!(s.rho > 0.0)) throw std::domain_error("entropy_pair: requires rho > 0");
    double p    = pressure(law, s.rho);
    double eta  = 0.5 * s.rho * (s.v1 * s.v1 + s.v2 * s.v2) + p / (law.gamma - 1.0);
    double fac  = eta + p;
    return {eta, {fac * s.v1, fac * s.v2}};
}

inline double entropy(const GasLaw& law, const ConservedState& u) {
    return entropy_pair(law, to_primitive(u)).eta;
}

// Gradient of eta with respect to the conserved variables (rho, P1, P2).
inline std::array<double, 3> entropy_gradient(const GasLaw& law, const ConservedState& u) {
    if (!(u.rho > 0.0)) throw std::domain_error("entropy_gradient: requires rho > 0");
    PrimitiveState s = to_primitive(u);
    double c = sound_speed(law, s.rho);
    return {c * c / (law.gamma - 1.0) - 0.5 * (s.v1 * s.v1 + s.v2 * s.v2), s.v1, s.v2};
}

using Mat3 = std::array<std::array<double, 3>, 3>;

// Hessian of eta in conserved variables:
// (1/rho) [[|v|^2+c^2, -v1, -v2], [-v1, 1, 0], [-v2, 0, 1]].
inline Mat3 entropy_hessian(const GasLaw& law, const ConservedState& u) {
    if (!(u.rho > 0.0)) throw std::domain_error("entropy_hessian: requires rho > 0");
    PrimitiveState s = to_primitive(u);
    double c  = sound_speed(law, s.rho);
    double s2 = s.v1 * s.v1 + s.v2 * s.v2;
    double ir = 1.0 / s.rho;
    return {{{ir * (s2 + c * c), -ir * s.v1, -ir * s.v2},
             {-ir * s.v1, ir, 0.0},
             {-ir * s.v2, 0.0, ir}}};
}

// Eigenvalues of the Hessian: 1/rho and the roots of
// lambda^2 - (|v|^2+c^2+1) lambda + c^2, divided by rho. Sorted ascending.
inline std::array<double, 3> entropy_hessian_eigenvalues(const GasLaw& law,
                                                         const ConservedState& u) {
    if (!(u.rho > 0.0)) throw std::domain_error("entropy_hessian_eigenvalues: rho > 0");
    PrimitiveState s = to_primitive(u);
    double c  = sound_speed(law, s.rho);
    double s2 = s.v1 * s.v1 + s.v2 * s.v2;
    double b  = s2 + c * c + 1.0;
    double disc = std::sqrt(std::fmax(b * b - 4.0 * c * c, 0.0));
    std::array<double, 3> ev = {0.5 * (b - disc) / s.rho, 1.0 / s.rho,
                                0.5 * (b + disc) / s.rho};
    if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
    if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
    if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
    return ev;
}

// Physical flux columns F^1, F^2 of the conservative system in (rho, P1, P2).
inline ConservedState physical_flux(const GasLaw& law, const ConservedState& u, int direction) {
    if (!(u.rho > 0.0)) throw std::domain_error("physical_flux: requires rho > 0");
    double p  = pressure(law, u.rho);
    double v1 = u.p1 / u.rho;
    double v2 = u.p2 / u.rho;
    if (direction == 1) return {u.p1, u.p1 * v1 + p, u.p1 * v2};
    if (direction == 2) return {u.p2, u.p2 * v1, u.p2 * v2 + p};
    throw std::invalid_argument("physical_flux: direction must be 1 or 2");
}

// Jacobian dF^i/dU.  Row index a, column index b.
inline Mat3 flux_jacobian(const GasLaw& law, const ConservedState& u, int direction) {
    PrimitiveState s = to_primitive(u);
    double c  = sound_speed(law, s.rho);
    double v1 = s.v1, v2 = s.v2;
    if (direction == 1)
        return {{{0.0, 1.0, 0.0},
                 {-v1 * v1 + c * c, 2.0 * v1, 0.0},
                 {-v1 * v2, v2, v1}}};
    if (direction == 2)
        return {{{0.0, 0.0, 1.0},
                 {-v1 * v2, v2, v1},
                 {-v2 * v2 + c * c, 0.0, 2.0 * v2}}};
    throw std::invalid_argument("flux_jacobian: direction must be 1 or 2");
}

}  // namespace rarewave
