#pragma once

// Structured periodic-strip grid and the conserved field living on it.
// x1 spans [-X, X] with zero-gradient outflow, x2 spans [0, 2pi) periodically.

#include <numbers>
#include <stdexcept>
#include <vector>

#include "rarewave/gas.hpp"

namespace rarewave {

struct Grid {
    int nx1 = 0;
    int nx2 = 0;
    double half_width = 0.0;  // X

    double dx1() const { return 2.0 * half_width / nx1; }
    double dx2() const { return 2.0 * std::numbers::pi / nx2; }
    // Exactly antisymmetric under i -> nx1-1-i (mirror tests compare bitwise).
    double x1(int i) const { return 0.5 * dx1() * double(2 * i + 1 - nx1); }
    double x2(int j) const { return (j + 0.5) * dx2(); }
    double cell_area() const { return dx1() * dx2(); }
    int wrap2(int j) const { return (j % nx2 + nx2) % nx2; }

    bool operator==(const Grid&) const = default;
};

class Field2D {
  public:
    Field2D() = default;
    Field2D(const Grid& g, double time = 0.0) : grid_(g), time_(time), u_(std::size_t(g.nx1) * g.nx2) {
        if (g.nx1 <= 0 || g.nx2 <= 0 || g.half_width <= 0.0)
            throw std::invalid_argument("Field2D: invalid grid");
    }

    const Grid& grid() const { return grid_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    ConservedState& at(int i, int j) { return u_[std::size_t(i) * grid_.nx2 + grid_.wrap2(j)]; }
    const ConservedState& at(int i, int j) const {
        return u_[std::size_t(i) * grid_.nx2 + grid_.wrap2(j)];
    }

    // Zero-gradient outflow in x1, periodic wrap in x2.
    const ConservedState& at_bc(int i, int j) const {
        if (i < 0) i = 0;
        if (i >= grid_.nx1) i = grid_.nx1 - 1;
        return at(i, j);
    }

    std::vector<ConservedState>& data() { return u_; }
    const std::vector<ConservedState>& data() const { return u_; }

    // Componentwise sums in a fixed order (row-major).
    std::array<double, 3> totals() const {
        std::array<double, 3> t{0.0, 0.0, 0.0};
        for (const auto& c : u_) {
            t[0] += c.rho;
            t[1] += c.p1;
            t[2] += c.p2;
        }
        return t;
    }

  private:
    Grid grid_;
    double time_ = 0.0;
    std::vector<ConservedState> u_;
};

}  // namespace rarewave
