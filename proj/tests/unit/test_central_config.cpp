#include <doctest.h>

#include <cmath>
#include <numbers>

#include "c3b/central_config.hpp"
#include "fixtures.hpp"

using namespace c3b;
using std::numbers::pi;

TEST_SUITE("centralconfig") {

TEST_CASE("masses are normalized and normalization is idempotent") {
    const BodySetup a({2.0, 1.0, 1.0}, {0.0, 0.1, 0.0});
    CHECK(a.mass(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a.mass(0) + a.mass(1) + a.mass(2) == doctest::Approx(1.0).epsilon(1e-15));
    const BodySetup b(a.masses(), a.charges());
    CHECK(b == a);
    CHECK(a.charge(1) == 0.1);
    CHECK_THROWS_AS(BodySetup({1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(BodySetup({1.0, -1.0, 1.0}, {0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("delta matrix") {
    const DeltaMatrix zero = delta_matrix(BodySetup({0.5, 0.3, 0.2}, {0.0, 0.0, 0.0}));
    CHECK(zero.d12 == 1.0);
    CHECK(zero.d23 == 1.0);
    CHECK(zero.d31 == 1.0);

    const DeltaMatrix equal = delta_matrix(BodySetup({1.0, 1.0, 1.0}, {0.1, 0.1, 0.1}));
    CHECK(equal.d12 == doctest::Approx(0.91).epsilon(1e-14));
    CHECK(equal(2, 0) == doctest::Approx(0.91).epsilon(1e-14));

    const DeltaMatrix neg = delta_matrix(BodySetup({1.0, 1.0, 1.0}, {0.4, 0.4, 0.0}));
    CHECK(neg.d12 == doctest::Approx(-0.44).epsilon(1e-14));
    CHECK(neg.d23 == 1.0);
    CHECK(neg.d31 == 1.0);
    CHECK(neg(0, 1) == neg(1, 0));
}

TEST_CASE("admissibility verdicts") {
    CHECK(admissible({1.0, 1.0, 1.0}).accepted());
    const auto neg = admissible({-0.44, 1.0, 1.0});
    CHECK_FALSE(neg.accepted());
    CHECK(neg.failure == AdmissibilityFailure::non_positive_delta);
    CHECK(neg.message.find("delta_12") != std::string::npos);
    const auto flat = admissible({8.0, 0.001, 0.001});
    CHECK(flat.failure == AdmissibilityFailure::degenerate_triangle);
}

TEST_CASE("equal masses without charges give the equilateral triangle with beta 9") {
    const auto config = build_configuration(testing::equal_newtonian());
    for (double t : config.angles) CHECK(t == doctest::Approx(pi / 3).epsilon(1e-14));
    CHECK(config.beta == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("zero charges: equilateral for any masses, beta = 27 sum m_i m_j") {
    const BodySetup setup({0.5, 0.3, 0.2}, {0.0, 0.0, 0.0});
    const auto config = build_configuration(setup);
    for (double t : config.angles) CHECK(t == doctest::Approx(pi / 3).epsilon(1e-13));
    CHECK(config.beta == doctest::Approx(27.0 * 0.31).epsilon(1e-13));
}

TEST_CASE("equal charges keep the triangle equilateral and set mu = k^3") {
    const BodySetup setup({1.0, 1.0, 1.0}, {0.1, 0.1, 0.1});
    const auto config = build_configuration(setup);
    CHECK(config.beta == doctest::Approx(9.0).epsilon(1e-13));
    const double k = std::cbrt(0.91) * config.alpha / std::sin(pi / 3);
    CHECK(config.k == doctest::Approx(k).epsilon(1e-13));
    CHECK(config.mu == doctest::Approx(k * k * k).epsilon(1e-12));
}

TEST_CASE("inadmissible and near-collinear setups are rejected") {
    try {
        build_configuration(BodySetup({1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}));
        FAIL("expected rejection");
    } catch (const InadmissibleSetup& ex) {
        CHECK(ex.verdict().failure == AdmissibilityFailure::non_positive_delta);
        CHECK(std::string(ex.what()) == "delta_12 non-positive");
    }
    // Opposite specific charges +-a give cube-root sides 1, 1, (1 + a^2)^(1/3);
    // just below 2 the triangle is a sliver with angles near 1e-7.
    const double side = 2.0 - 1e-14;
    const double a = std::sqrt(side * side * side - 1.0);
    try {
        build_configuration(BodySetup({1.0, 1.0, 1.0}, {a / 3.0, -a / 3.0, 0.0}));
        FAIL("expected rejection");
    } catch (const InadmissibleSetup& ex) {
        CHECK(ex.verdict().failure == AdmissibilityFailure::near_collinear);
    }
}

TEST_CASE("configuration invariants on random admissible setups") {
    for (const auto& [setup, c] : testing::random_admissible(100, 11)) {
        const DeltaMatrix d = delta_matrix(setup);
        Vec2 com = Vec2::Zero();
        double moment = 0.0;
        for (int i = 0; i < 3; ++i) {
            com += setup.mass(i) * c.positions[i];
            moment += setup.mass(i) * c.positions[i].squaredNorm();
            CHECK(c.angles[i] > 0.0);
            CHECK(c.angles[i] < pi);
        }
        CHECK(c.angles[0] + c.angles[1] + c.angles[2] == doctest::Approx(pi).epsilon(1e-14));
        CHECK(com.norm() < 1e-12);
        CHECK(std::abs(moment - 1.0) < 1e-12);

        // Law of sines: the side opposite angle l is proportional to the
        // cube root of the coupling of the other two bodies.
        const double s1 = std::cbrt(d.d23), s2 = std::cbrt(d.d31), s3 = std::cbrt(d.d12);
        CHECK(std::abs(std::sin(c.angles[0]) / s1 - std::sin(c.angles[1]) / s2) < 1e-12);
        CHECK(std::abs(std::sin(c.angles[0]) / s1 - std::sin(c.angles[2]) / s3) < 1e-12);

        CHECK(std::abs((c.positions[1] - c.positions[2]).norm() - std::sin(c.angles[0]) / c.alpha) < 1e-12);
        CHECK(std::abs((c.positions[2] - c.positions[0]).norm() - std::sin(c.angles[1]) / c.alpha) < 1e-12);
        CHECK(std::abs((c.positions[0] - c.positions[1]).norm() - std::sin(c.angles[2]) / c.alpha) < 1e-12);

        double f = 0.0;
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            f += setup.mass(j) * setup.mass(k) * std::pow(std::sin(c.angles[i]), 2);
        }
        CHECK(std::abs(36.0 * f - c.beta) < 1e-12);
        CHECK(std::abs(36.0 * c.alpha * c.alpha - c.beta) < 1e-12);
        CHECK(c.beta >= 0.0);
        CHECK(c.beta <= 9.0);
        CHECK(std::abs(c.mu - c.k * c.k * c.k) / c.mu < 1e-10);
        CHECK(std::abs(c.mu - potential(c.positions, setup)) / c.mu < 1e-12);
        CHECK(cc_residual(c, setup) < 1e-10);
    }
}

TEST_CASE("central configuration residual") {
    const BodySetup eq = testing::equal_newtonian();
    auto config = build_configuration(eq);
    CHECK(cc_residual(config, eq) < 1e-12);

    const BodySetup charged = testing::charged_reference();
    auto cc = build_configuration(charged);
    CHECK(cc_residual(cc, charged) < 1e-10);
    cc.positions[0].x() += 1e-3;
    CHECK(cc_residual(cc, charged) > 1e-5);
}

TEST_CASE("json round trip uses the documented field names") {
    const BodySetup setup = testing::charged_reference();
    const auto config = build_configuration(setup);
    nlohmann::json j = setup;
    nlohmann::json c = config;
    j.update(c);
    for (const char* key : {"masses", "charges", "angles_rad", "positions", "alpha", "beta", "mu", "k"}) {
        CHECK(j.contains(key));
    }
    const auto back_setup = j.get<BodySetup>();
    const auto back = j.get<CentralConfiguration>();
    CHECK(back_setup == setup);
    CHECK(back.beta == config.beta);
    CHECK(back.mu == config.mu);
    CHECK(back.positions[2] == config.positions[2]);
}

}
