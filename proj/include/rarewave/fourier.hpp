#pragma once

// Periodic scalar fields on a uniform grid over [0, 2pi): FFT, spectral
// differentiation and trigonometric interpolation.  Grid sizes are powers
// of two.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rarewave {

namespace detail {

inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                auto u = a[i + k];
                auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= double(n);
}

}  // namespace detail

// Real periodic function sampled at theta_j = 2 pi j / M.
class PeriodicField {
  public:
    PeriodicField() = default;
    explicit PeriodicField(std::size_t m, double value = 0.0) : v_(m, value) {
        if (m == 0 || (m & (m - 1)) != 0)
            throw std::invalid_argument("PeriodicField: size must be a power of two");
    }
    explicit PeriodicField(std::vector<double> values) : v_(std::move(values)) {
        if (v_.empty() || (v_.size() & (v_.size() - 1)) != 0)
            throw std::invalid_argument("PeriodicField: size must be a power of two");
    }

    std::size_t size() const { return v_.size(); }
    double& operator[](std::size_t j) { return v_[j]; }
    double operator[](std::size_t j) const { return v_[j]; }
    const std::vector<double>& values() const { return v_; }
    double theta(std::size_t j) const { return 2.0 * std::numbers::pi * double(j) / double(size()); }

    // Spectral d/dtheta.
    PeriodicField derivative() const {
        const std::size_t m = size();
        std::vector<std::complex<double>> a(m);
        for (std::size_t j = 0; j < m; ++j) a[j] = v_[j];
        detail::fft_radix2(a, false);
        for (std::size_t k = 0; k < m; ++k) {
            double kk = k <= m / 2 ? double(k) : double(k) - double(m);
            if (k == m / 2) kk = 0.0;  // drop the unpaired Nyquist mode
            a[k] *= std::complex<double>(0.0, kk);
        }
        detail::fft_radix2(a, true);
        PeriodicField out(m);
        for (std::size_t j = 0; j < m; ++j) out[j] = a[j].real();
        return out;
    }

    // Trigonometric interpolation at arbitrary theta.
    double interpolate(double theta) const {
        const std::size_t m = size();
        std::vector<std::complex<double>> a(m);
        for (std::size_t j = 0; j < m; ++j) a[j] = v_[j];
        detail::fft_radix2(a, false);
        std::complex<double> acc(0.0);
        for (std::size_t k = 0; k < m; ++k) {
            if (k == m / 2) {
                acc += a[k] * std::cos(0.5 * double(m) * theta);
            } else {
                double kk = k < m / 2 ? double(k) : double(k) - double(m);
                acc += a[k] * std::exp(std::complex<double>(0.0, kk * theta));
            }
        }
        return acc.real() / double(m);
    }

    double max_abs() const {
        double r = 0.0;
        for (double x : v_) r = std::fmax(r, std::fabs(x));
        return r;
    }

    PeriodicField& operator+=(const PeriodicField& o) {
        for (std::size_t j = 0; j < size(); ++j) v_[j] += o[j];
        return *this;
    }
    PeriodicField& operator-=(const PeriodicField& o) {
        for (std::size_t j = 0; j < size(); ++j) v_[j] -= o[j];
        return *this;
    }
    PeriodicField& operator*=(double s) {
        for (auto& x : v_) x *= s;
        return *this;
    }

    friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
    friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
    friend PeriodicField operator*(double s, PeriodicField a) { return a *= s; }

  private:
    std::vector<double> v_;
};

}  // namespace rarewave
