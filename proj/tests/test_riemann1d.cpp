#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rarewave/riemann1d.hpp"

using namespace rarewave;

namespace {

const GasLaw ref_law(2.0, 0.5);

// Adaptive Simpson oracle for the rarefaction-curve integral of c(r)/r.
double simpson(const GasLaw& law, double a, double b) {
    auto f = [&](double r) { return sound_speed(law, r) / r; };
    auto rec = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi,
                   double whole, double tol, int depth) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = f(lm), frm = f(rm);
        double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return self(self, lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1) +
               self(self, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1);
    };
    double mid = 0.5 * (a + b);
    double whole = (b - a) / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
    return rec(rec, a, b, f(a), f(mid), f(b), whole, 1e-13, 0);
}

PrimitiveState mirror(const PrimitiveState& s) { return {s.rho, -s.v1, s.v2}; }

double rh_residual(const GasLaw& law, const PrimitiveState& a, const PrimitiveState& b, double s) {
    ConservedState ua = to_conserved(a), ub = to_conserved(b);
    ConservedState fa = physical_flux(law, ua, 1), fb = physical_flux(law, ub, 1);
    double r0 = fb.rho - fa.rho - s * (ub.rho - ua.rho);
    double r1 = fb.p1 - fa.p1 - s * (ub.p1 - ua.p1);
    double r2 = fb.p2 - fa.p2 - s * (ub.p2 - ua.p2);
    return std::fmax(std::fabs(r0), std::fmax(std::fabs(r1), std::fabs(r2)));
}

// Random state pair in region IV (two rarefactions), away from vacuum.
std::pair<PrimitiveState, PrimitiveState> random_region4(const GasLaw& law, std::mt19937& rng) {
    std::uniform_real_distribution<double> u01(0.05, 0.8);
    while (true) {
        double wbar_l = 0.6 + u01(rng);
        double w_l = 0.6 + u01(rng);
        double wbar_r = wbar_l + u01(rng);
        double w_r = w_l - u01(rng);
        if (wbar_l + w_r < 0.3) continue;
        if (w_r < 0.0 || wbar_l + w_l < 0.3 || wbar_r + w_r < 0.3) continue;
        PrimitiveState ul = from_invariants(law, {wbar_l, w_l, 0.0});
        PrimitiveState ur = from_invariants(law, {wbar_r, w_r, 0.0});
        return {ul, ur};
    }
}

// Converging streams, rejected until both waves are shocks.
std::pair<PrimitiveState, PrimitiveState> random_region2(const GasLaw& law, std::mt19937& rng) {
    std::uniform_real_distribution<double> rho_d(0.4, 2.0), dv(0.2, 1.2);
    while (true) {
        PrimitiveState ul{rho_d(rng), dv(rng), 0.0};
        PrimitiveState ur{rho_d(rng), -dv(rng), 0.0};
        if (classify(law, ul, ur) == Region::II) return {ul, ur};
    }
}

}  // namespace

TEST_CASE("shock curve") {
    PrimitiveState ul{1.0, 0.0, 0.0};
    CHECK(shock_curve(ref_law, 1, ul, 1.0) == 0.0);
    CHECK(shock_curve(ref_law, 1, ul, 2.0) == Catch::Approx(-std::sqrt(0.75)).margin(1e-12));
    CHECK_THROWS_AS(shock_curve(ref_law, 1, ul, 0.5), std::domain_error);

    // mirror symmetry S2(rho; mirrored U_l) = -S1(rho; U_l)
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> rho_d(0.2, 3.0), v_d(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        PrimitiveState s{rho_d(rng), v_d(rng), 0.0};
        double rho = s.rho * (1.0 + rho_d(rng));
        CHECK(shock_curve(ref_law, 2, mirror(s), rho) ==
              Catch::Approx(-shock_curve(ref_law, 1, s, rho)).margin(1e-14));
    }
}

TEST_CASE("rarefaction curve closed form matches quadrature") {
    PrimitiveState ul{1.0, 0.0, 0.0};
    CHECK(rarefaction_curve(ref_law, 1, ul, 1.0) == 0.0);
    CHECK(rarefaction_curve(ref_law, 1, ul, 0.25) == Catch::Approx(-1.0).margin(1e-13));
    CHECK_THROWS_AS(rarefaction_curve(ref_law, 1, ul, 2.0), std::domain_error);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> rho_d(0.05, 4.0);
    GasLaw laws[] = {ref_law, GasLaw(1.4, 1.0), GasLaw(2.4, 0.7)};
    for (int i = 0; i < 50; ++i) {
        const GasLaw& law = laws[i % 3];
        double a = rho_d(rng), b = rho_d(rng);
        double lo = std::fmin(a, b), hi = std::fmax(a, b);
        PrimitiveState ref{hi, 0.0, 0.0};
        double closed = rarefaction_curve(law, 1, ref, lo);
        double quad = -simpson(law, lo, hi);
        REQUIRE(closed == Catch::Approx(quad).margin(1e-10));
    }
}

TEST_CASE("wave curve branches join C2 at the reference state") {
    PrimitiveState ref{1.3, 0.2, 0.0};
    auto phi = [&](double rho) { return detail::wave_curve_phi(ref_law, ref, rho); };
    double h = 1e-4;
    double d2p = (phi(ref.rho + 2 * h) - 2 * phi(ref.rho + h) + phi(ref.rho)) / (h * h);
    double d2m = (phi(ref.rho) - 2 * phi(ref.rho - h) + phi(ref.rho - 2 * h)) / (h * h);
    CHECK(d2p == Catch::Approx(d2m).margin(5e-3));
    double d1p = (phi(ref.rho + h) - phi(ref.rho)) / h;
    double d1m = (phi(ref.rho) - phi(ref.rho - h)) / h;
    CHECK(d1p == Catch::Approx(d1m).margin(1e-4));
}

TEST_CASE("classification") {
    PrimitiveState ul{1.0, -0.2, 0.0}, ur{1.0, 0.2, 0.0};
    CHECK(classify(ref_law, ul, ul) == Region::Degenerate);
    CHECK(classify(ref_law, ul, ur) == Region::IV);
    CHECK(classify(ref_law, {1.0, -3.0, 0.0}, {1.0, 3.0, 0.0}) == Region::Vacuum);
    CHECK(classify(ref_law, {1.0, 0.5, 0.0}, {1.0, -0.5, 0.0}) == Region::II);
}

TEST_CASE("solve: region IV example and independent oracles") {
    PrimitiveState ul{1.0, -0.2, 0.0}, ur{1.0, 0.2, 0.0};
    WaveFan fan = solve(ref_law, ul, ur);
    CHECK(fan.region == Region::IV);
    CHECK(fan.wave1.kind == WaveKind::BackRarefaction);
    CHECK(fan.wave2.kind == WaveKind::FrontRarefaction);
    CHECK(fan.middle.rho == Catch::Approx(0.81).margin(1e-12));
    CHECK(fan.middle.v1 == Catch::Approx(0.0).margin(1e-12));

    // bisection oracle on the wave-curve equation
    double lo = 1e-6, hi = 5.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double g = detail::wave_curve_phi(ref_law, ul, mid) +
                   detail::wave_curve_phi(ref_law, ur, mid) - (ur.v1 - ul.v1);
        (g > 0.0 ? lo : hi) = mid;
    }
    CHECK(fan.middle.rho == Catch::Approx(0.5 * (lo + hi)).margin(1e-11));
}

TEST_CASE("solve: degenerate and mirror symmetry") {
    PrimitiveState u{1.5, 0.3, 0.1};
    WaveFan fan = solve(ref_law, u, u);
    CHECK(fan.wave1.kind == WaveKind::None);
    CHECK(fan.wave2.kind == WaveKind::None);
    CHECK(fan.middle.rho == Catch::Approx(u.rho).epsilon(1e-12));
    CHECK(fan.middle.v1 == Catch::Approx(u.v1).margin(1e-12));

    CHECK_THROWS_AS(solve(ref_law, {1.0, -3.0, 0.0}, {1.0, 3.0, 0.0}), VacuumError);

    std::mt19937 rng(23);
    for (int i = 0; i < 40; ++i) {
        auto [ul, ur] = i % 2 ? random_region4(ref_law, rng) : random_region2(ref_law, rng);
        WaveFan a = solve(ref_law, ul, ur);
        WaveFan b = solve(ref_law, mirror(ur), mirror(ul));
        CHECK(b.middle.rho == Catch::Approx(a.middle.rho).epsilon(1e-11));
        CHECK(b.middle.v1 == Catch::Approx(-a.middle.v1).margin(1e-11));
        CHECK(b.wave1.head == Catch::Approx(-a.wave2.tail).margin(1e-11));
        CHECK(b.wave2.tail == Catch::Approx(-a.wave1.head).margin(1e-11));
    }
}

TEST_CASE("solve: middle state matches the invariant-algebra closed form in region IV") {
    std::mt19937 rng(29);
    for (int i = 0; i < 200; ++i) {
        auto [ul, ur] = random_region4(ref_law, rng);
        WaveFan fan = solve(ref_law, ul, ur);
        REQUIRE(fan.region == Region::IV);
        InvariantState il = to_invariants(ref_law, ul), ir = to_invariants(ref_law, ur);
        double c_m = 0.5 * (ref_law.gamma - 1.0) * (il.wbar + ir.w);
        double v_m = il.wbar - ir.w;
        REQUIRE(fan.middle.rho ==
                Catch::Approx(rho_from_sound_speed(ref_law, c_m)).epsilon(1e-12).margin(1e-12));
        REQUIRE(fan.middle.v1 == Catch::Approx(v_m).margin(1e-12));
    }
}

TEST_CASE("shock determinism and Rankine-Hugoniot") {
    std::mt19937 rng(31);
    for (int i = 0; i < 50; ++i) {
        auto [ul, ur] = random_region2(ref_law, rng);
        WaveFan fan = solve(ref_law, ul, ur);
        REQUIRE(fan.region == Region::II);
        REQUIRE(fan.wave1.kind == WaveKind::BackShock);
        REQUIRE(fan.wave2.kind == WaveKind::FrontShock);

        double s1 = fan.wave1.head, s2 = fan.wave2.head;
        CHECK(lambda1(ref_law, fan.middle) < s1);
        CHECK(s1 < lambda1(ref_law, fan.left));
        CHECK(lambda2(ref_law, fan.right) < s2);
        CHECK(s2 < lambda2(ref_law, fan.middle));

        PrimitiveState ml = fan.middle, mr = fan.middle;
        ml.v2 = fan.left.v2;
        mr.v2 = fan.right.v2;
        CHECK(rh_residual(ref_law, fan.left, ml, s1) < 1e-10);
        CHECK(rh_residual(ref_law, mr, fan.right, s2) < 1e-10);
    }
}

TEST_CASE("sample: constants, fan interior and continuity") {
    PrimitiveState ul{1.0, -0.2, 0.3}, ur{1.0, 0.2, -0.4};
    WaveFan fan = solve(ref_law, ul, ur);

    PrimitiveState far_r = sample(fan, fan.wave2.tail + 1.0);
    CHECK(far_r.rho == ur.rho);
    CHECK(far_r.v1 == ur.v1);
    CHECK(far_r.v2 == ur.v2);
    PrimitiveState far_l = sample(fan, fan.wave1.head - 1.0);
    CHECK(far_l.rho == ul.rho);
    CHECK(far_l.v2 == ul.v2);

    // continuity at the front fan edge: at xi = v_r + c_r, wbar equals wbar_r
    InvariantState ir = to_invariants(ref_law, ur);
    double xi_edge = lambda2(ref_law, ur);
    CHECK(xi_edge == Catch::Approx(1.2).margin(1e-14));
    InvariantState edge = to_invariants(ref_law, sample(fan, xi_edge));
    CHECK(edge.wbar == Catch::Approx(1.1).margin(1e-12));
    CHECK(edge.w == Catch::Approx(ir.w).margin(1e-12));

    // interior of both fans: lambda(sample(xi)) == xi and invariants constant
    InvariantState il = to_invariants(ref_law, ul);
    for (int i = 1; i < 100; ++i) {
        double a = double(i) / 100.0;
        double xi1 = fan.wave1.head + a * (fan.wave1.tail - fan.wave1.head);
        PrimitiveState s1 = sample(fan, xi1);
        REQUIRE(lambda1(ref_law, s1) == Catch::Approx(xi1).margin(1e-12));
        REQUIRE(to_invariants(ref_law, s1).wbar == Catch::Approx(il.wbar).margin(1e-12));
        REQUIRE(s1.v2 == ul.v2);

        double xi2 = fan.wave2.head + a * (fan.wave2.tail - fan.wave2.head);
        PrimitiveState s2 = sample(fan, xi2);
        REQUIRE(lambda2(ref_law, s2) == Catch::Approx(xi2).margin(1e-12));
        REQUIRE(to_invariants(ref_law, s2).w == Catch::Approx(ir.w).margin(1e-12));
        REQUIRE(s2.v2 == ur.v2);
    }

    // v2 rides with the particle path: split at xi = v_m inside the middle region
    CHECK(sample(fan, fan.middle.v1 - 1e-9).v2 == ul.v2);
    CHECK(sample(fan, fan.middle.v1 + 1e-9).v2 == ur.v2);
}

TEST_CASE("sample: shock tie-break returns the right state") {
    PrimitiveState ul{1.0, 0.5, 0.0}, ur{1.0, -0.5, 0.0};
    WaveFan fan = solve(ref_law, ul, ur);
    PrimitiveState at_s1 = sample(fan, fan.wave1.head);
    CHECK(at_s1.rho == Catch::Approx(fan.middle.rho));
    PrimitiveState at_s2 = sample(fan, fan.wave2.head);
    CHECK(at_s2.rho == ur.rho);
    CHECK(at_s2.v1 == ur.v1);
}

TEST_CASE("mixed regions: one rarefaction plus one deterministic shock") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> rho_d(0.4, 2.5), v_d(-1.0, 1.0);
    int seen_i = 0, seen_iii = 0;
    while (seen_i < 20 || seen_iii < 20) {
        PrimitiveState ul{rho_d(rng), v_d(rng), 0.0}, ur{rho_d(rng), v_d(rng), 0.0};
        Region r = classify(ref_law, ul, ur);
        if (r != Region::I && r != Region::III) continue;
        WaveFan fan = solve(ref_law, ul, ur);
        if (r == Region::I) {
            ++seen_i;
            REQUIRE(fan.wave1.kind == WaveKind::BackRarefaction);
            REQUIRE(fan.wave2.kind == WaveKind::FrontShock);
            CHECK(lambda2(ref_law, fan.right) < fan.wave2.head);
            CHECK(fan.wave2.head < lambda2(ref_law, fan.middle));
            CHECK(rh_residual(ref_law, fan.middle, fan.right, fan.wave2.head) < 1e-10);
        } else {
            ++seen_iii;
            REQUIRE(fan.wave1.kind == WaveKind::BackShock);
            REQUIRE(fan.wave2.kind == WaveKind::FrontRarefaction);
            CHECK(lambda1(ref_law, fan.middle) < fan.wave1.head);
            CHECK(fan.wave1.head < lambda1(ref_law, fan.left));
            CHECK(rh_residual(ref_law, fan.left, fan.middle, fan.wave1.head) < 1e-10);
        }
        // middle state sits on both wave curves
        double res = detail::wave_curve_phi(ref_law, ul, fan.middle.rho) +
                     detail::wave_curve_phi(ref_law, ur, fan.middle.rho) - (ur.v1 - ul.v1);
        CHECK(std::fabs(res) < 1e-11);
    }
}
