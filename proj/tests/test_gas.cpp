#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rarewave/gas.hpp"

using namespace rarewave;

namespace {

const GasLaw ref_law(2.0, 0.5);  // c = sqrt(rho)

std::array<double, 2> q_of(const GasLaw& law, const ConservedState& u) {
    return entropy_pair(law, to_primitive(u)).q;
}

}  // namespace

TEST_CASE("gas law construction rejects invalid parameters") {
    CHECK_THROWS_AS(GasLaw(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GasLaw(3.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(GasLaw(2.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(GasLaw(1.4, 1.0));
}

TEST_CASE("sound speed and enthalpy") {
    CHECK(sound_speed(ref_law, 1.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(sound_speed(ref_law, 4.0) == Catch::Approx(2.0).margin(1e-14));
    CHECK(sound_speed(ref_law, 0.0) == 0.0);
    CHECK_THROWS_AS(sound_speed(ref_law, -1.0), std::domain_error);

    CHECK(enthalpy(ref_law, 1.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(enthalpy(ref_law, 4.0) == Catch::Approx(4.0).margin(1e-13));
    CHECK(enthalpy(ref_law, 0.0) == 0.0);
    CHECK_THROWS_AS(enthalpy(ref_law, -1.0), std::domain_error);

    // monotone in rho
    double prev = 0.0;
    for (double rho = 0.1; rho < 10.0; rho += 0.1) {
        double c = sound_speed(ref_law, rho);
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("Riemann invariants") {
    InvariantState inv = to_invariants(ref_law, {1.0, 0.2, 0.0});
    CHECK(inv.wbar == Catch::Approx(1.1).margin(1e-14));
    CHECK(inv.w == Catch::Approx(0.9).margin(1e-14));
    CHECK(inv.psi2 == Catch::Approx(0.0).margin(1e-15));

    InvariantState rest = to_invariants(ref_law, {1.0, 0.0, 0.0});
    CHECK(rest.wbar == Catch::Approx(rest.w).margin(1e-15));

    CHECK_THROWS_AS(from_invariants(ref_law, {-1.0, 0.5, 0.0}), std::domain_error);
}

TEST_CASE("conversion round trips are identities") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> rho_d(0.1, 10.0), v_d(-5.0, 5.0);
    GasLaw laws[] = {ref_law, GasLaw(1.4, 1.0), GasLaw(2.6, 0.3)};
    for (const auto& law : laws) {
        for (int i = 0; i < 200; ++i) {
            PrimitiveState s{rho_d(rng), v_d(rng), v_d(rng)};
            PrimitiveState a = to_primitive(to_conserved(s));
            PrimitiveState b = from_invariants(law, to_invariants(law, s));
            for (auto [got, want] : {std::pair{a.rho, s.rho}, {a.v1, s.v1}, {a.v2, s.v2},
                                     {b.rho, s.rho}, {b.v1, s.v1}, {b.v2, s.v2}}) {
                REQUIRE(got == Catch::Approx(want).epsilon(1e-12).margin(1e-12));
            }
        }
    }
}

TEST_CASE("entropy pair values") {
    EntropyPair ep = entropy_pair(ref_law, {1.0, 0.0, 0.0});
    CHECK(ep.eta == Catch::Approx(0.5).margin(1e-15));
    CHECK(ep.q[0] == 0.0);
    CHECK(ep.q[1] == 0.0);

    EntropyPair moving = entropy_pair(ref_law, {2.0, 0.0, 0.0});
    CHECK(moving.q[0] == 0.0);

    CHECK_THROWS_AS(entropy_pair(ref_law, {0.0, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("entropy flux compatibility dq/dU = grad eta . dF/dU") {
    // Central differences, step 1e-5, against the compatibility relation.
    auto comp = [](ConservedState& s, int b) -> double& {
        return b == 0 ? s.rho : (b == 1 ? s.p1 : s.p2);
    };
    auto check_state = [&](const GasLaw& law, const ConservedState& u) {
        const double h = 1e-5;
        for (int i = 0; i < 2; ++i) {
            for (int b = 0; b < 3; ++b) {
                ConservedState up = u, um = u;
                comp(up, b) += h;
                comp(um, b) -= h;
                double dq = (q_of(law, up)[i] - q_of(law, um)[i]) / (2.0 * h);
                ConservedState fp = physical_flux(law, up, i + 1);
                ConservedState fm = physical_flux(law, um, i + 1);
                auto grad = entropy_gradient(law, u);
                double rhs = grad[0] * (fp.rho - fm.rho) / (2.0 * h) +
                             grad[1] * (fp.p1 - fm.p1) / (2.0 * h) +
                             grad[2] * (fp.p2 - fm.p2) / (2.0 * h);
                REQUIRE(std::fabs(dq - rhs) < 1e-6);
            }
        }
    };

    check_state(ref_law, to_conserved({1.0, 0.2, 0.1}));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> rho_d(0.3, 3.0), v_d(-2.0, 2.0);
    for (int i = 0; i < 100; ++i)
        check_state(ref_law, to_conserved({rho_d(rng), v_d(rng), v_d(rng)}));
}

TEST_CASE("entropy Hessian is SPD with the closed-form eigenvalues") {
    auto ev0 = entropy_hessian_eigenvalues(ref_law, to_conserved({1.0, 0.0, 0.0}));
    for (double lam : ev0) CHECK(lam == Catch::Approx(1.0).margin(1e-14));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> rho_d(0.2, 5.0), v_d(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        ConservedState u = to_conserved({rho_d(rng), v_d(rng), v_d(rng)});
        Mat3 m = entropy_hessian(ref_law, u);
        auto ev = entropy_hessian_eigenvalues(ref_law, u);

        // symmetry and positive definiteness via leading minors
        CHECK(m[0][1] == m[1][0]);
        CHECK(m[0][2] == m[2][0]);
        CHECK(m[1][2] == m[2][1]);
        double m1 = m[0][0];
        double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        double m3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        CHECK(m1 > 0.0);
        CHECK(m2 > 0.0);
        CHECK(m3 > 0.0);

        // each closed-form eigenvalue is a root of det(H - lambda I)
        for (double lam : ev) {
            double a = m[0][0] - lam, b = m[1][1] - lam, c = m[2][2] - lam;
            double det = a * (b * c - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * c) +
                         m[0][2] * (-b * m[2][0]);
            REQUIRE(std::fabs(det) < 1e-10 * (1.0 + std::fabs(lam * lam * lam)));
        }
        CHECK(std::fabs(m3 - ev[0] * ev[1] * ev[2]) < 1e-10 * (1.0 + std::fabs(m3)));
    }
}
