#pragma once

// The diagonalized Euler system in the characteristic frame: the P / P^-1
// matrices with eigenvalues {0,-1,-2}, and the time derivative (along L) of
// the full slice state (wb, w, psi2, That, kappa, gslash, Xi).  The right
// hand side is written once, generically, and instantiated both for formal
// jets (Jet2) and for (u, theta) tabulations (Tab2).

#include <array>
#include <cmath>

#include "rarewave/gas.hpp"
#include "rarewave/series.hpp"

namespace rarewave {

struct DiagonalState {
    double u0;   // eigenvalue 0 component
    double um1;  // eigenvalue -1
    double um2;  // eigenvalue -2
};

// A, P, P^-1 for a unit normal That = (t1, t2); columns of P are the
// eigenvectors for eigenvalues 0, -1, -2.
inline Mat3 frame_a_matrix(double t1, double t2) {
    return {{{-(t1 + 1.0), 0.0, 0.5 * t2}, {0.0, t1 - 1.0, 0.5 * t2}, {t2, t2, -1.0}}};
}

inline Mat3 frame_p_matrix(double t1, double t2) {
    return {{{0.5 * (1.0 - t1), 0.5 * t2, 0.5 * (1.0 + t1)},
             {0.5 * (1.0 + t1), -0.5 * t2, 0.5 * (1.0 - t1)},
             {t2, t1, -t2}}};
}

inline Mat3 frame_p_inverse(double t1, double t2) {
    return {{{0.5 * (1.0 - t1), 0.5 * (1.0 + t1), 0.5 * t2},
             {t2, -t2, t1},
             {0.5 * (1.0 + t1), 0.5 * (1.0 - t1), -0.5 * t2}}};
}

inline DiagonalState diagonalize(const InvariantState& v, double t1, double t2) {
    if (std::fabs(t1 * t1 + t2 * t2 - 1.0) > 1e-10)
        throw std::invalid_argument("diagonalize: That must be a unit vector");
    Mat3 pi = frame_p_inverse(t1, t2);
    auto row = [&](int a) { return pi[a][0] * v.wbar + pi[a][1] * v.w + pi[a][2] * v.psi2; };
    return {row(0), row(1), row(2)};
}

inline InvariantState undiagonalize(const DiagonalState& d, double t1, double t2) {
    if (std::fabs(t1 * t1 + t2 * t2 - 1.0) > 1e-10)
        throw std::invalid_argument("undiagonalize: That must be a unit vector");
    Mat3 p = frame_p_matrix(t1, t2);
    auto row = [&](int a) { return p[a][0] * d.u0 + p[a][1] * d.um1 + p[a][2] * d.um2; };
    return {row(0), row(1), row(2)};
}

// Values on a (u, theta) product grid; same algebraic interface as Jet2 so
// the frame equations below can be evaluated on either representation.
// d/du uses 4th-order finite differences, d/dtheta is spectral.
class Tab2 {
  public:
    Tab2() = default;
    Tab2(int nu, std::size_t m, double du)
        : nu_(nu), du_(du), rows_(std::size_t(nu) + 1, PeriodicField(m)) {}

    int rows() const { return nu_ + 1; }
    double u_step() const { return du_; }
    std::size_t grid_size() const { return rows_[0].size(); }
    PeriodicField& row(int i) { return rows_[i]; }
    const PeriodicField& row(int i) const { return rows_[i]; }

    Tab2& operator+=(const Tab2& o) {
        for (int i = 0; i <= nu_; ++i) rows_[i] += o.rows_[i];
        return *this;
    }
    Tab2& operator-=(const Tab2& o) {
        for (int i = 0; i <= nu_; ++i) rows_[i] -= o.rows_[i];
        return *this;
    }
    Tab2& operator*=(double s) {
        for (auto& r : rows_) r *= s;
        return *this;
    }
    friend Tab2 operator+(Tab2 a, const Tab2& b) { return a += b; }
    friend Tab2 operator-(Tab2 a, const Tab2& b) { return a -= b; }
    friend Tab2 operator*(double s, Tab2 a) { return a *= s; }
    friend Tab2 operator*(const Tab2& a, const Tab2& b) {
        Tab2 r = a;
        for (int i = 0; i <= r.nu_; ++i)
            for (std::size_t j = 0; j < r.rows_[i].size(); ++j) r.rows_[i][j] *= b.rows_[i][j];
        return r;
    }

    Tab2 reciprocal() const {
        Tab2 r = *this;
        for (auto& row : r.rows_)
            for (std::size_t j = 0; j < row.size(); ++j) row[j] = 1.0 / row[j];
        return r;
    }
    Tab2 sqrt() const {
        Tab2 r = *this;
        for (auto& row : r.rows_)
            for (std::size_t j = 0; j < row.size(); ++j) row[j] = std::sqrt(row[j]);
        return r;
    }

    Tab2 du() const {
        Tab2 r(nu_, grid_size(), du_);
        const double h = du_;
        for (std::size_t j = 0; j < grid_size(); ++j) {
            auto v = [&](int i) { return rows_[i][j]; };
            for (int i = 0; i <= nu_; ++i) {
                double d;
                if (i >= 2 && i + 2 <= nu_)
                    d = (-v(i + 2) + 8 * v(i + 1) - 8 * v(i - 1) + v(i - 2)) / (12 * h);
                else if (i + 4 <= nu_ && i < 2)
                    d = (-25 * v(i) + 48 * v(i + 1) - 36 * v(i + 2) + 16 * v(i + 3) - 3 * v(i + 4)) /
                        (12 * h);
                else if (i >= 4)
                    d = (25 * v(i) - 48 * v(i - 1) + 36 * v(i - 2) - 16 * v(i - 3) + 3 * v(i - 4)) /
                        (12 * h);
                else
                    d = (v(std::min(i + 1, nu_)) - v(std::max(i - 1, 0))) /
                        (h * double(std::min(i + 1, nu_) - std::max(i - 1, 0)));
                r.rows_[i][j] = d;
            }
        }
        return r;
    }

    Tab2 dtheta() const {
        Tab2 r(nu_, grid_size(), du_);
        for (int i = 0; i <= nu_; ++i) r.rows_[i] = rows_[i].derivative();
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& row : rows_) m = std::fmax(m, row.max_abs());
        return m;
    }

  private:
    int nu_ = 0;
    double du_ = 0.0;
    std::vector<PeriodicField> rows_;
};

// Full slice state in the characteristic frame.
template <class Q>
struct FrameState {
    Q wb, w, p2;    // Riemann invariants
    Q t1, t2;       // That components
    Q kap, gsl, xi;  // kappa, gslash, Xi
};

// Time derivative along L of every state quantity, from the Euler equations
// in Riemann-invariant form and the structure equations for That, kappa,
// gslash and Xi.  T = d/du - Xi d/dtheta and Xhat = gslash^(-1/2) d/dtheta.
template <class Q>
FrameState<Q> frame_time_derivative(double gamma, const FrameState<Q>& s) {
    auto T = [&](const Q& f) { return f.du() - s.xi * f.dtheta(); };
    Q rsg = s.gsl.sqrt().reciprocal();
    auto Xh = [&](const Q& f) { return rsg * f.dtheta(); };

    Q c = 0.5 * (gamma - 1.0) * (s.wb + s.w);
    Q ik = s.kap.reciprocal();
    Q cok = c * ik;  // c / kappa
    Q xh1 = s.t2;
    Q xh2 = -1.0 * s.t1;
    Q psi1 = s.w - s.wb;

    Q T_wb = T(s.wb), T_w = T(s.w), T_p2 = T(s.p2);
    Q Xh_wb = Xh(s.wb), Xh_w = Xh(s.w), Xh_p2 = Xh(s.p2), Xh_psi1 = Xh(psi1), Xh_c = Xh(c);

    FrameState<Q> d;
    // L(wb) = -c That(wb)(That1+1) + c That(p2) That2 / 2 + c Xh(p2) Xh2 / 2 - c Xh(wb) Xh1
    d.wb = -1.0 * (cok * T_wb * s.t1) - cok * T_wb + 0.5 * (cok * T_p2 * s.t2) +
           0.5 * (c * Xh_p2 * xh2) - c * Xh_wb * xh1;
    d.w = cok * T_w * s.t1 - cok * T_w + 0.5 * (cok * T_p2 * s.t2) + c * Xh_w * xh1 +
          0.5 * (c * Xh_p2 * xh2);
    d.p2 = -1.0 * (cok * T_p2) + cok * T(s.w + s.wb) * s.t2 + c * Xh(s.w + s.wb) * xh2;

    Q sigma = s.t1 * Xh_psi1 + s.t2 * Xh_p2 + Xh_c;
    d.t1 = sigma * xh1;
    d.t2 = sigma * xh2;

    // L(kappa) = m' + e' kappa with m' = -(gamma+1)/(gamma-1) T(c)
    Q L_psi1 = d.w - d.wb;
    Q eprime_kap = c.reciprocal() * (s.t1 * L_psi1 + s.t2 * d.p2) * s.kap;
    d.kap = (-(gamma + 1.0) / (gamma - 1.0)) * T(c) + eprime_kap;

    // L(gslash) = 2 gslash chi
    Q chi = -1.0 * (xh1 * Xh_psi1 + xh2 * Xh_p2) - c * xh2 * Xh(xh1) + c * xh1 * Xh(xh2);
    d.gsl = 2.0 * (s.gsl * chi);

    // L(Xi) = gslash^(-1/2) (zeta + eta)
    Q zeta_eta = -1.0 * (s.kap * (2.0 * (s.t1 * Xh_psi1 + s.t2 * Xh_p2) + Xh_c)) + c * Xh(s.kap);
    d.xi = rsg * zeta_eta;
    return d;
}

}  // namespace rarewave
