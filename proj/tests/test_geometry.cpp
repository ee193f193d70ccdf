#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rarewave/geometry.hpp"
#include "rarewave/mesh_chart.hpp"

using namespace rarewave;

namespace {

const GasLaw ref_law(2.0, 0.5);

WaveFan region4_fan() {
    return solve(ref_law, {1.0, -0.2, 0.0}, {1.0, 0.2, 0.0});
}

FanChart region4_chart() {
    InvariantState ir = to_invariants(ref_law, {1.0, 0.2, 0.0});
    return FanChart(ref_law, ir.wbar, ir.w);
}

}  // namespace

TEST_CASE("frame_at: explicit values and metric relations") {
    ConstantBackground bg(ref_law, {1.0, 0.0, 0.0});
    NullFrame f = frame_at(bg, 0.5, 0.0, 1.0, {-1.0, 0.0});
    CHECK(f.L[0] == 1.0);
    CHECK(f.L[1] == Catch::Approx(1.0).margin(1e-15));
    CHECK(f.L[2] == Catch::Approx(0.0).margin(1e-15));

    std::mt19937 rng(101);
    std::uniform_real_distribution<double> rho_d(0.3, 3.0), v_d(-1.0, 1.0),
        ang(0.0, 2.0 * std::numbers::pi);
    for (int n = 0; n < 100; ++n) {
        ConstantBackground b(ref_law, {rho_d(rng), v_d(rng), v_d(rng)});
        CartesianSample s = b.eval(0, 0, 0);
        double phi = ang(rng);
        NullFrame fr = frame_at(b, 0.1, 0.0, 0.0, {std::cos(phi), std::sin(phi)});
        std::array<double, 3> T{0.0, fr.kappa * fr.That[0], fr.kappa * fr.That[1]};
        std::array<double, 3> X{0.0, fr.Xhat[0], fr.Xhat[1]};
        REQUIRE(std::fabs(metric_g(s.c, s.v1, s.v2, fr.L, fr.L)) < 1e-10);
        REQUIRE(std::fabs(metric_g(s.c, s.v1, s.v2, X, X) - 1.0) < 1e-10);
        REQUIRE(std::fabs(metric_g(s.c, s.v1, s.v2, fr.L, T) + fr.mu) < 1e-10);
        REQUIRE(std::fabs(metric_g(s.c, s.v1, s.v2, fr.L, X)) < 1e-10);
    }

    CHECK_THROWS_AS(frame_at(bg, 0.0, 0.0, 0.0, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("frame_at on the analytic fan interior") {
    WaveFan fan = region4_fan();
    FanBackground bg(ref_law, fan);
    double xi = 0.5 * (fan.wave2.head + fan.wave2.tail);
    double t = 0.4;
    CartesianSample s = bg.eval(t, xi * t, 0.0);
    NullFrame f = frame_at(bg, t, xi * t, 0.0, {-1.0, 0.0});
    CHECK(f.L[1] == Catch::Approx(s.v1 + s.c).margin(1e-14));
    CHECK(f.L[2] == Catch::Approx(s.v2).margin(1e-14));
    CHECK(f.kappa == Catch::Approx(t));
}

TEST_CASE("geodesic RHS: outgoing and ingoing data at the singular boundary") {
    FanChart chart = region4_chart();

    auto d = geodesic_rhs(chart, {0.0, 0.5, 1.0, 0.0, -1.0, 0.0});
    CHECK(d[0] == Catch::Approx(1.0).margin(1e-15));
    CHECK(d[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(d[2] == Catch::Approx(0.0).margin(1e-15));

    // ingoing-type data at t = 0 on a background with mu = c t: dt/dtau = 0
    auto di = geodesic_rhs(chart, {0.0, 0.5, 1.0, -1.0, 0.0, 0.0});
    CHECK(di[0] == 0.0);
}

TEST_CASE("flat background geodesics are straight") {
    ConstantChart chart(ref_law, {1.0, 0.1, -0.2});
    std::array<double, 6> y0{0.0, 0.7, 2.0, 0.0, -1.0, 0.0};
    Trajectory traj = integrate_geodesic(chart, y0, 0.0, 1.0, 1e-10);
    REQUIRE(traj.ok);
    for (const RayPoint& p : traj.points) {
        REQUIRE(p.y[0] == Catch::Approx(p.tau).margin(1e-12));
        REQUIRE(p.y[1] == Catch::Approx(0.7).margin(1e-12));
        REQUIRE(p.y[2] == Catch::Approx(2.0).margin(1e-12));
        REQUIRE(std::fabs(p.H) < 1e-12);
    }
}

TEST_CASE("Hamiltonian conservation and nullity along fan geodesics") {
    FanChart chart = region4_chart();
    const double tol = 1e-10;
    std::array<double, 6> y0{0.05, 0.4, 1.0, 0.0, -1.0, 0.35};
    {
        // make the data null: solve p_t from H = 0
        ChartSample s = chart.eval(y0[0], y0[1], y0[2]);
        double a = -s.mu / (2.0 * s.c * s.c);
        double b = -y0[4];
        double c0 = s.mu * y0[5] * y0[5] / (2.0 * s.gsl);
        double disc = std::sqrt(b * b - 4.0 * a * c0);
        y0[3] = (-b + disc) / (2.0 * a);
    }
    REQUIRE(std::fabs(hamiltonian(chart, y0)) < 1e-12);

    Trajectory traj = integrate_geodesic(chart, y0, 0.0, 0.5, tol);
    REQUIRE(traj.ok);
    REQUIRE(traj.points.size() > 4);
    for (const RayPoint& p : traj.points) {
        REQUIRE(std::fabs(p.H) < 10.0 * tol * (1.0 + p.tau));

        // nullity of the reconstructed velocity in the acoustical metric
        auto d = geodesic_rhs(chart, p.y);
        ChartSample s = chart.eval(p.y[0], p.y[1], p.y[2]);
        double kap = s.mu / s.c;
        double xi = s.mu * s.xih;
        double gdot = -2.0 * s.mu * d[0] * d[1] + kap * kap * d[1] * d[1] +
                      s.gsl * (d[2] + xi * d[1]) * (d[2] + xi * d[1]);
        REQUIRE(std::fabs(gdot) < 1e-8);
    }
}

TEST_CASE("second-order launch expansion near the singular boundary") {
    FanChart chart = region4_chart();
    double u0 = 0.3, th0 = 1.2, pth = 0.4;
    ChartSample s0 = chart.eval(0.0, u0, th0);
    double dmudt = s0.dmu[0];

    double tau0 = 1e-6;
    std::array<double, 6> y0{tau0 + 0.5 * dmudt * s0.xih * pth * tau0 * tau0,
                             u0 + 0.25 * dmudt * pth * pth * tau0 * tau0,
                             th0 + 0.5 * dmudt * pth * tau0 * tau0,
                             -0.5 * dmudt * pth * pth * tau0, -1.0, pth};
    Trajectory traj = integrate_geodesic(chart, y0, tau0, 0.02, 1e-12);
    REQUIRE(traj.ok);
    const RayPoint& p = traj.points.back();
    double a_fit = (p.y[1] - u0) / (p.tau * p.tau);
    CHECK(a_fit == Catch::Approx(0.25 * dmudt * pth * pth).epsilon(1e-5));

    double th_fit = (p.y[2] - th0) / (p.tau * p.tau);
    CHECK(th_fit == Catch::Approx(0.5 * dmudt * pth).epsilon(1e-4));

    // causality: the curve lies in the future of C_{u0}
    CHECK(p.y[1] > u0);
}

TEST_CASE("trichotomy: p_u = 0 data stays in the singular boundary") {
    DegenerateChart chart([](double u, double th) {
        return std::array<double, 3>{1.0 + 0.1 * std::sin(th) + 0.05 * u, 0.05,
                                     0.1 * std::cos(th)};
    });
    std::array<double, 6> y0{0.0, 0.4, 0.9, -1.0, 0.0, 0.3};
    Trajectory traj = integrate_geodesic(chart, y0, 0.0, 1.0, 1e-10);
    REQUIRE(traj.ok);
    for (const RayPoint& p : traj.points) {
        REQUIRE(p.y[0] == 0.0);  // machine zero: mu vanishes identically at t = 0
        REQUIRE(p.y[4] == 0.0);
    }
    CHECK(traj.points.back().y[1] != y0[1]);
}

TEST_CASE("trace_front: constant graphs ride the coordinate hypersurfaces") {
    FanChart chart = region4_chart();
    double u0 = 0.45;
    FrontGraph g{PeriodicField(16, u0), PeriodicField(16, 0.0)};
    FrontSurface surf = trace_front(chart, g, 8, 0.5, 1e-10);
    REQUIRE(surf.rays.size() == 8);
    for (const Trajectory& ray : surf.rays) {
        REQUIRE(ray.ok);
        for (const RayPoint& p : ray.points) {
            REQUIRE(p.y[1] == Catch::Approx(u0).margin(1e-9));
            REQUIRE(std::fabs(p.H) < 1e-9);
            if (p.y[0] > 1e-3)
                REQUIRE(p.x[0] / p.y[0] == Catch::Approx(chart.ray_slope() - u0).margin(1e-8));
        }
        // wbar is the H0-defining value all along the front
        double wbar = chart.wbar_at(ray.points.back().y[1]);
        REQUIRE(wbar == Catch::Approx(chart.wbar_at(u0)).margin(1e-9));
    }
}

TEST_CASE("characteristic tracing on analytic backgrounds") {
    SECTION("constant state: straight line with slope v1 + c") {
        ConstantBackground bg(ref_law, {1.0, 0.2, 0.0});
        CharacteristicPath path =
            characteristic_trace_cartesian(bg, 0.1, 0.0, 1.0, {-1.0, 0.0}, 1.0, 0.6);
        REQUIRE(path.ok);
        for (const auto& p : path.points)
            REQUIRE(p.x1 == Catch::Approx(1.2 * (p.t - 0.1)).margin(1e-10));
    }

    SECTION("fan: rays through the origin, kappa = t, |That| = 1") {
        WaveFan fan = region4_fan();
        FanBackground bg(ref_law, fan);
        double xi0 = 0.5 * (fan.wave2.head + fan.wave2.tail);
        double t0 = 0.1;
        CharacteristicPath path =
            characteristic_trace_cartesian(bg, t0, xi0 * t0, 2.0, {-1.0, 0.0}, t0, 0.5);
        REQUIRE(path.ok);
        for (const auto& p : path.points) {
            REQUIRE(p.x1 / p.t == Catch::Approx(xi0).margin(1e-8));
            REQUIRE(std::hypot(p.That[0], p.That[1]) == Catch::Approx(1.0).margin(1e-8));
            REQUIRE(p.kappa == Catch::Approx(p.t).margin(1e-8));
        }
    }
}

TEST_CASE("sampled background: derivatives consistent with values") {
    Grid g{64, 32, 1.0};
    Field2D f(g, 0.0);
    for (int i = 0; i < g.nx1; ++i)
        for (int j = 0; j < g.nx2; ++j) {
            double x1 = g.x1(i), x2 = g.x2(j);
            PrimitiveState s{1.0 + 0.2 * std::sin(2.0 * x2) * std::exp(-x1 * x1),
                             0.1 * std::cos(x2), 0.05 * std::sin(x2 + 1.0)};
            f.at(i, j) = to_conserved(s);
        }
    Field2D f2 = f;
    f2.set_time(0.1);
    SampledBackground bg(ref_law, {f, f2});

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> x1d(-0.7, 0.7), x2d(0.0, 2.0 * std::numbers::pi);
    const double h = 1e-5;
    for (int n = 0; n < 50; ++n) {
        double x1 = x1d(rng), x2 = x2d(rng);
        CartesianSample s = bg.eval(0.05, x1, x2);
        CartesianSample sp = bg.eval(0.05, x1 + h, x2);
        CartesianSample sm = bg.eval(0.05, x1 - h, x2);
        REQUIRE(s.dc[0] == Catch::Approx((sp.c - sm.c) / (2 * h)).margin(1e-4));
        sp = bg.eval(0.05, x1, x2 + h);
        sm = bg.eval(0.05, x1, x2 - h);
        REQUIRE(s.dc[1] == Catch::Approx((sp.c - sm.c) / (2 * h)).margin(1e-4));
        REQUIRE(s.dv1[1] == Catch::Approx((sp.v1 - sm.v1) / (2 * h)).margin(1e-4));
    }
}

TEST_CASE("mesh chart reconstructed from solver output") {
    // eps = 0: the reconstructed chart must agree with the analytic fan chart
    RunConfig cfg;
    cfg.law = ref_law;
    cfg.left = {1.0, -0.5, 0.0};
    cfg.right = {1.0, 0.5, 0.0};
    cfg.nx1 = 400;
    cfg.nx2 = 8;
    cfg.t_end = 0.5;
    cfg.out_every = 0.02;
    cfg.muscl = true;
    cfg.threads = 2;
    RunArtifacts art = run(cfg);
    SampledBackground bg(ref_law, art.slices);

    InvariantState ir = to_invariants(ref_law, cfg.right);
    FanChart exact(ref_law, ir.wbar, ir.w);
    MeshChart mesh(bg, lambda2(ref_law, cfg.right), 0.1, 0.5, 20, 0.6, 24, 16, 1e-7);

    for (double t : {0.15, 0.3, 0.45}) {
        for (double u : {0.15, 0.3, 0.45}) {
            ChartSample a = mesh.eval(t, u, 2.0);
            ChartSample b = exact.eval(t, u, 2.0);
            INFO("t=" << t << " u=" << u);
            REQUIRE(a.c == Catch::Approx(b.c).margin(0.02));
            REQUIRE(a.mu == Catch::Approx(b.mu).margin(0.02 + 0.15 * b.mu));
            REQUIRE(a.gsl == Catch::Approx(1.0).margin(0.02));
            REQUIRE(std::fabs(a.xih) < 0.1);
        }
    }

    // derivative evaluation consistent with value evaluation
    {
        const double h = 1e-5;
        for (double u : {0.2, 0.4}) {
            ChartSample a = mesh.eval(0.3, u, 2.0);
            double fd_u = (mesh.eval(0.3, u + h, 2.0).mu - mesh.eval(0.3, u - h, 2.0).mu) / (2 * h);
            double fd_th = (mesh.eval(0.3, u, 2.0 + h).mu - mesh.eval(0.3, u, 2.0 - h).mu) / (2 * h);
            REQUIRE(a.dmu[1] == Catch::Approx(fd_u).margin(1e-4));
            REQUIRE(a.dmu[2] == Catch::Approx(fd_th).margin(1e-4));
        }
    }

    // front traced from an H0-style graph rides a C_u surface: wbar constant
    FrontGraph g{PeriodicField(16, 0.3), PeriodicField(16, 0.0)};
    FrontSurface surf = trace_front(mesh, g, 8, 0.45, 1e-7);
    double wbar_want = exact.wbar_at(0.3);
    for (const Trajectory& ray : surf.rays) {
        REQUIRE(ray.ok);
        const RayPoint& p = ray.points.back();
        auto xy = mesh.cartesian(p.y[0], p.y[1], p.y[2]);
        CartesianSample s = bg.eval(p.y[0], xy[0], xy[1]);
        double wbar = 0.5 * (2.0 * s.c / (ref_law.gamma - 1.0) + s.v1);
        REQUIRE(wbar == Catch::Approx(wbar_want).margin(0.02));
    }
}

TEST_CASE("second-frame quantities y and z") {
    WaveFan fan = region4_fan();
    FanBackground bg(ref_law, fan);
    double t = 0.3;
    double xi = 0.5 * (fan.wave2.head + fan.wave2.tail);
    SecondFrameQuantities q = second_frame_quantities(bg, t, xi * t, 1.0);
    // inside the exact fan v1 + c = x1/t, so z = 1 - t d/dx1(v1+c) = 0
    CHECK(q.z == Catch::Approx(0.0).margin(1e-12));
    CHECK(q.y == Catch::Approx(0.0).margin(1e-12));
    CHECK(q.zring == Catch::Approx(0.0).margin(1e-11));

    // outside the fan the state is constant: z = 1
    SecondFrameQuantities qc = second_frame_quantities(bg, t, fan.wave2.tail * t + 0.3, 1.0);
    CHECK(qc.z == Catch::Approx(1.0).margin(1e-12));
}
