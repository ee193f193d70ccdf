#pragma once

// Acoustic backgrounds in Cartesian coordinates: evaluators returning
// (c, v) and their spatial derivatives at (t, x1, x2).  Flavors: constant
// state, the exact 1D centered fan, and fields sampled from solver output
// (bicubic in space, linear in time, analytically differentiated).

#include <memory>
#include <vector>

#include "rarewave/riemann1d.hpp"
#include "rarewave/solver2d.hpp"

namespace rarewave {

struct CartesianSample {
    double c = 0.0, v1 = 0.0, v2 = 0.0;
    // spatial gradients (d/dx1, d/dx2)
    std::array<double, 2> dc{}, dv1{}, dv2{};
};

class CartesianBackground {
  public:
    virtual ~CartesianBackground() = default;
    virtual CartesianSample eval(double t, double x1, double x2) const = 0;
    virtual const GasLaw& law() const = 0;
    // inverse foliation density carried by the background's u-chart
    virtual double kappa_at(double t, double x1, double x2) const {
        (void)t, (void)x1, (void)x2;
        return 1.0;
    }
};

class ConstantBackground final : public CartesianBackground {
  public:
    ConstantBackground(const GasLaw& law, const PrimitiveState& s) : law_(law), s_(s) {}
    CartesianSample eval(double, double, double) const override {
        return {sound_speed(law_, s_.rho), s_.v1, s_.v2, {0, 0}, {0, 0}, {0, 0}};
    }
    const GasLaw& law() const override { return law_; }

  private:
    GasLaw law_;
    PrimitiveState s_;
};

// Exact plane-symmetric Riemann solution as a 2D background.
class FanBackground final : public CartesianBackground {
  public:
    FanBackground(const GasLaw& law, const WaveFan& fan) : law_(law), fan_(fan) {}

    CartesianSample eval(double t, double x1, double) const override {
        double xi = x1 / t;
        PrimitiveState s = sample(fan_, xi);
        CartesianSample out{sound_speed(law_, s.rho), s.v1, s.v2, {0, 0}, {0, 0}, {0, 0}};
        auto in_fan = [&](const Wave& wv) {
            return (wv.kind == WaveKind::BackRarefaction || wv.kind == WaveKind::FrontRarefaction) &&
                   xi > wv.head && xi < wv.tail;
        };
        // inside a fan: dv/dxi = 2/(gamma+1), dc/dxi = +-(gamma-1)/(gamma+1)
        if (in_fan(fan_.wave1)) {
            out.dv1[0] = 2.0 / ((law_.gamma + 1.0) * t);
            out.dc[0] = -(law_.gamma - 1.0) / ((law_.gamma + 1.0) * t);
        } else if (in_fan(fan_.wave2)) {
            out.dv1[0] = 2.0 / ((law_.gamma + 1.0) * t);
            out.dc[0] = (law_.gamma - 1.0) / ((law_.gamma + 1.0) * t);
        }
        return out;
    }
    const GasLaw& law() const override { return law_; }
    double kappa_at(double t, double, double) const override { return t; }

  private:
    GasLaw law_;
    WaveFan fan_;
};

namespace detail {

// Cubic convolution (Catmull-Rom) weights and their derivatives.
inline void cubic_weights(double s, double* w, double* dw) {
    w[0] = 0.5 * (-s + 2.0 * s * s - s * s * s);
    w[1] = 0.5 * (2.0 - 5.0 * s * s + 3.0 * s * s * s);
    w[2] = 0.5 * (s + 4.0 * s * s - 3.0 * s * s * s);
    w[3] = 0.5 * (-s * s + s * s * s);
    dw[0] = 0.5 * (-1.0 + 4.0 * s - 3.0 * s * s);
    dw[1] = 0.5 * (-10.0 * s + 9.0 * s * s);
    dw[2] = 0.5 * (1.0 + 8.0 * s - 9.0 * s * s);
    dw[3] = 0.5 * (-2.0 * s + 3.0 * s * s);
}

}  // namespace detail

// Bicubic-in-space, linear-in-time interpolant over stored solver slices.
class SampledBackground final : public CartesianBackground {
  public:
    SampledBackground(const GasLaw& law, const std::vector<Field2D>& slices) : law_(law) {
        if (slices.empty()) throw std::invalid_argument("SampledBackground: no slices");
        grid_ = slices.front().grid();
        for (const Field2D& f : slices) {
            times_.push_back(f.time());
            Slice s;
            s.c.resize(std::size_t(grid_.nx1) * grid_.nx2);
            s.v1.resize(s.c.size());
            s.v2.resize(s.c.size());
            for (int i = 0; i < grid_.nx1; ++i)
                for (int j = 0; j < grid_.nx2; ++j) {
                    PrimitiveState p = to_primitive(f.at(i, j));
                    std::size_t n = std::size_t(i) * grid_.nx2 + j;
                    s.c[n] = sound_speed(law_, p.rho);
                    s.v1[n] = p.v1;
                    s.v2[n] = p.v2;
                }
            slices_.push_back(std::move(s));
        }
    }

    CartesianSample eval(double t, double x1, double x2) const override {
        std::size_t k = 0;
        while (k + 2 < times_.size() && times_[k + 1] <= t) ++k;
        double t0 = times_[k], t1 = times_[k + 1];
        double a = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
        CartesianSample s0 = eval_slice(k, x1, x2);
        CartesianSample s1 = eval_slice(k + 1, x1, x2);
        CartesianSample out;
        out.c = (1 - a) * s0.c + a * s1.c;
        out.v1 = (1 - a) * s0.v1 + a * s1.v1;
        out.v2 = (1 - a) * s0.v2 + a * s1.v2;
        for (int d = 0; d < 2; ++d) {
            out.dc[d] = (1 - a) * s0.dc[d] + a * s1.dc[d];
            out.dv1[d] = (1 - a) * s0.dv1[d] + a * s1.dv1[d];
            out.dv2[d] = (1 - a) * s0.dv2[d] + a * s1.dv2[d];
        }
        return out;
    }
    const GasLaw& law() const override { return law_; }

  private:
    struct Slice {
        std::vector<double> c, v1, v2;
    };

    double field_at(const std::vector<double>& f, int i, int j) const {
        i = std::clamp(i, 0, grid_.nx1 - 1);
        j = grid_.wrap2(j);
        return f[std::size_t(i) * grid_.nx2 + j];
    }

    CartesianSample eval_slice(std::size_t k, double x1, double x2) const {
        const Slice& sl = slices_[k];
        double dx1 = grid_.dx1(), dx2 = grid_.dx2();
        double fi = (x1 - grid_.x1(0)) / dx1;
        double fj = (x2 - grid_.x2(0)) / dx2;
        int i0 = int(std::floor(fi)), j0 = int(std::floor(fj));
        double si = fi - i0, sj = fj - j0;
        double wi[4], dwi[4], wj[4], dwj[4];
        detail::cubic_weights(si, wi, dwi);
        detail::cubic_weights(sj, wj, dwj);

        CartesianSample out;
        auto accum = [&](const std::vector<double>& f, double& val, std::array<double, 2>& grad) {
            val = 0.0;
            grad = {0.0, 0.0};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    double fv = field_at(f, i0 - 1 + a, j0 - 1 + b);
                    val += wi[a] * wj[b] * fv;
                    grad[0] += dwi[a] * wj[b] * fv / dx1;
                    grad[1] += wi[a] * dwj[b] * fv / dx2;
                }
        };
        accum(sl.c, out.c, out.dc);
        accum(sl.v1, out.v1, out.dv1);
        accum(sl.v2, out.v2, out.dv2);
        return out;
    }

    GasLaw law_;
    Grid grid_;
    std::vector<double> times_;
    std::vector<Slice> slices_;
};

}  // namespace rarewave
