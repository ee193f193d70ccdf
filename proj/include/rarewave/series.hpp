#pragma once

// Truncated bivariate power series in (s, u) whose coefficients are periodic
// fields on a theta grid.  Backbone of the Taylor-data construction: time
// jets are built in s = t - delta, spatial expansion in u.

#include <stdexcept>
#include <vector>

#include "rarewave/fourier.hpp"

namespace rarewave {

class Jet2 {
  public:
    Jet2() = default;
    Jet2(int nt, int nu, std::size_t m)
        : nt_(nt), nu_(nu), m_(m), c_(std::size_t(nt + 1) * (nu + 1), PeriodicField(m)) {}

    static Jet2 constant(int nt, int nu, std::size_t m, double value) {
        Jet2 j(nt, nu, m);
        for (std::size_t i = 0; i < m; ++i) j.at(0, 0)[i] = value;
        return j;
    }
    static Jet2 from_field(int nt, int nu, const PeriodicField& f) {
        Jet2 j(nt, nu, f.size());
        j.at(0, 0) = f;
        return j;
    }

    int order_t() const { return nt_; }
    int order_u() const { return nu_; }
    std::size_t grid_size() const { return m_; }

    PeriodicField& at(int i, int k) { return c_[std::size_t(i) * (nu_ + 1) + k]; }
    const PeriodicField& at(int i, int k) const { return c_[std::size_t(i) * (nu_ + 1) + k]; }

    Jet2& operator+=(const Jet2& o) {
        for (int i = 0; i <= nt_; ++i)
            for (int k = 0; k <= nu_; ++k) at(i, k) += o.at(i, k);
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        for (int i = 0; i <= nt_; ++i)
            for (int k = 0; k <= nu_; ++k) at(i, k) -= o.at(i, k);
        return *this;
    }
    Jet2& operator*=(double s) {
        for (auto& f : c_) f *= s;
        return *this;
    }
    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator*(double s, Jet2 a) { return a *= s; }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r(a.nt_, a.nu_, a.m_);
        for (int i = 0; i <= a.nt_; ++i)
            for (int k = 0; k <= a.nu_; ++k) {
                PeriodicField acc(a.m_);
                for (int i1 = 0; i1 <= i; ++i1)
                    for (int k1 = 0; k1 <= k; ++k1) {
                        const PeriodicField& fa = a.at(i1, k1);
                        const PeriodicField& fb = b.at(i - i1, k - k1);
                        for (std::size_t j = 0; j < a.m_; ++j) acc[j] += fa[j] * fb[j];
                    }
                r.at(i, k) = acc;
            }
        return r;
    }

    // 1/A; requires the (0,0) coefficient to be nonzero on the whole grid.
    Jet2 reciprocal() const {
        Jet2 r(nt_, nu_, m_);
        for (std::size_t j = 0; j < m_; ++j) {
            if (at(0, 0)[j] == 0.0) throw std::domain_error("Jet2::reciprocal: zero leading term");
            r.at(0, 0)[j] = 1.0 / at(0, 0)[j];
        }
        for (int d = 1; d <= nt_ + nu_; ++d)
            for (int i = 0; i <= nt_; ++i) {
                int k = d - i;
                if (k < 0 || k > nu_) continue;
                PeriodicField acc(m_);
                for (int i1 = 0; i1 <= i; ++i1)
                    for (int k1 = 0; k1 <= k; ++k1) {
                        if (i1 == 0 && k1 == 0) continue;
                        const PeriodicField& fa = at(i1, k1);
                        const PeriodicField& fb = r.at(i - i1, k - k1);
                        for (std::size_t j = 0; j < m_; ++j) acc[j] += fa[j] * fb[j];
                    }
                for (std::size_t j = 0; j < m_; ++j) r.at(i, k)[j] = -acc[j] * r.at(0, 0)[j];
            }
        return r;
    }

    // sqrt(A); requires the (0,0) coefficient to be positive.
    Jet2 sqrt() const {
        Jet2 r(nt_, nu_, m_);
        for (std::size_t j = 0; j < m_; ++j) {
            if (!(at(0, 0)[j] > 0.0)) throw std::domain_error("Jet2::sqrt: nonpositive leading term");
            r.at(0, 0)[j] = std::sqrt(at(0, 0)[j]);
        }
        for (int d = 1; d <= nt_ + nu_; ++d)
            for (int i = 0; i <= nt_; ++i) {
                int k = d - i;
                if (k < 0 || k > nu_) continue;
                PeriodicField acc(m_);
                for (int i1 = 0; i1 <= i; ++i1)
                    for (int k1 = 0; k1 <= k; ++k1) {
                        if ((i1 == 0 && k1 == 0) || (i1 == i && k1 == k)) continue;
                        const PeriodicField& fa = r.at(i1, k1);
                        const PeriodicField& fb = r.at(i - i1, k - k1);
                        for (std::size_t j = 0; j < m_; ++j) acc[j] += fa[j] * fb[j];
                    }
                for (std::size_t j = 0; j < m_; ++j)
                    r.at(i, k)[j] = (at(i, k)[j] - acc[j]) / (2.0 * r.at(0, 0)[j]);
            }
        return r;
    }

    Jet2 du() const {  // d/du
        Jet2 r(nt_, nu_, m_);
        for (int i = 0; i <= nt_; ++i)
            for (int k = 0; k + 1 <= nu_; ++k) r.at(i, k) = double(k + 1) * at(i, k + 1);
        return r;
    }

    Jet2 dtheta() const {  // spectral d/dtheta of every coefficient
        Jet2 r(nt_, nu_, m_);
        for (int i = 0; i <= nt_; ++i)
            for (int k = 0; k <= nu_; ++k) r.at(i, k) = at(i, k).derivative();
        return r;
    }

    // Evaluate the u-series at t-order 0, fixed u (theta stays gridded).
    PeriodicField eval_u(double u) const {
        PeriodicField r = at(0, nu_);
        for (int k = nu_ - 1; k >= 0; --k) {
            for (std::size_t j = 0; j < m_; ++j) r[j] = r[j] * u + at(0, k)[j];
        }
        return r;
    }

  private:
    int nt_ = 0, nu_ = 0;
    std::size_t m_ = 0;
    std::vector<PeriodicField> c_;
};

}  // namespace rarewave
