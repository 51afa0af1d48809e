#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hedgemap/kernels.hpp"
#include "hedgemap/model.hpp"
#include "hedgemap/rng.hpp"
#include "hedgemap/solver.hpp"

using namespace hedgemap;

namespace {

// Independent decomposition oracle: dense lambda grid over [0, 2]^3, step
// 0.01, deciding q in boat + rotated orthant by batched slack evaluation.
bool grid_decomposition_exists(const Point3& q, const BoatSet& boat) {
    const Point3 g1 = rotate_inv({1.0, 0.0, 0.0});
    const Point3 g2 = rotate_inv({0.0, 1.0, 0.0});
    const Point3 g3 = rotate_inv({0.0, 0.0, 1.0});
    const int steps = 201;
    const double step = 0.01;
    const auto& ops = kernels::active_ops();
    std::vector<double> x1(steps), x2(steps), x3(steps), out(steps);
    for (int i = 0; i < steps; ++i) {
        for (int j = 0; j < steps; ++j) {
            const Point3 base = q - (i * step) * g1 - (j * step) * g2;
            for (int k = 0; k < steps; ++k) {
                const Point3 y = base - (k * step) * g3;
                x1[k] = y.x1;
                x2[k] = y.x2;
                x3[k] = y.x3;
            }
            ops.boat_slack(boat.profile.patches.data(), boat.profile.patches.size(),
                           boat.r, x1.data(), x2.data(), x3.data(), out.data(), steps);
            for (int k = 0; k < steps; ++k)
                if (out[k] <= 1e-9) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("payoff space and price functional") {
    const AdmissibleTriple t = basic_triple();
    const Point3 b1 = t.payoffs.basis_unit;
    const Point3 b2 = t.payoffs.basis_zero;
    CHECK(norm(rotate_inv(b1) - Point3{0.0, 0.0, std::sqrt(3.0)}) <= 1e-12);
    CHECK(std::abs(rotate_inv(b1).x2) <= 1e-12);
    CHECK(std::abs(rotate_inv(b2).x2) <= 1e-12);

    CHECK(t.price({1.0, 1.0, 1.0}) == 1.0);
    CHECK(t.price({1.0, -1.0, 0.0}) == 0.0);
    CHECK(t.price({3.0, 1.0, 2.0}) == 2.0);  // 2*(1,1,1) + 1*(1,-1,0)
    CHECK_THROWS_AS(t.price({1.0, 0.0, 0.0}), NotInPayoffSpace);

    // Linearity on the span.
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        const double c = rng.uniform(-2.0, 2.0), d = rng.uniform(-2.0, 2.0);
        const Point3 z = a * b1 + b * b2;
        const Point3 w = c * b1 + d * b2;
        CHECK(t.price(1.0 * z + 1.0 * w) ==
              doctest::Approx(t.price(z) + t.price(w)).epsilon(1e-12));
    }
}

TEST_CASE("canonical triples") {
    const AdmissibleTriple basic = basic_triple();
    CHECK(basic.boat.r == 3.0);
    CHECK(basic.boat.profile.patches.size() == 1);
    CHECK(basic.cone_radius_check == doctest::Approx(std::sqrt(2.0)));

    const AdmissibleTriple twisted = twisted_triple();
    CHECK(twisted.boat.r == 16.0);
    CHECK(twisted.boat.profile.patches.size() == 4);

    // Acceptance membership: construction points are in, a negative unit of
    // the numeraire is out.
    CHECK(acceptance_contains(basic, {0.0, 0.0, 0.0}));
    for (double n : {1.0, 4.0, 25.0})
        CHECK(acceptance_contains(basic, rotate({0.0, 3.0 / std::sqrt(n), 1.0 / n})));
    CHECK_FALSE(acceptance_contains(basic, rotate({0.0, 0.0, -1.0})));

    CHECK(acceptance_contains(twisted, {0.0, 0.0, 0.0}));
    for (double n : {1.0, 4.0}) {
        const double w1 = -0.5 * std::sqrt(1.0 + 256.0 / n);
        CHECK(acceptance_contains(
            twisted, rotate({w1, -16.0 / std::sqrt(n), 1.0 / n})));
    }
    CHECK_FALSE(acceptance_contains(twisted, rotate({0.0, 0.0, -1.0})));
}

TEST_CASE("membership program agrees with the dense-grid oracle") {
    const AdmissibleTriple basic = basic_triple();
    // Points chosen so the optimal shift sits inside the grid box.
    const Point3 probes[] = {
        {0.0, 0.0, -0.1},   {0.3, 0.9, 0.2},  {1.2, -0.4, 0.5},
        {-0.8, 0.6, -0.2},  {0.05, 3.05, 1.02},
    };
    for (const Point3& q : probes) {
        const bool direct = acceptance_membership(q, basic);
        const bool grid = grid_decomposition_exists(q, basic.boat);
        CHECK(direct == grid);
    }
}

TEST_CASE("no arbitrage") {
    CHECK(check_no_arbitrage(basic_triple(), 100000, 1));
    CHECK(check_no_arbitrage(twisted_triple(), 100000, 2));
    // z = (2,0,1) = Phi(sqrt(2), 0, sqrt(3)) is a nonnegative payoff of price 1.
    const AdmissibleTriple t = basic_triple();
    CHECK(t.price({2.0, 0.0, 1.0}) == 1.0);
}

TEST_CASE("acceptance set is convex and monotone (sampled)") {
    const AdmissibleTriple triple = basic_triple();
    Rng rng(9);
    int convexity_failures = 0, monotone_failures = 0;
    for (int checked = 0; checked < 10000; ++checked) {
        // Members by construction: rotated body points plus positive shifts.
        const double t1 = rng.uniform(0.0, 1.0);
        const double ang = rng.uniform(0.0, 6.283185307179586);
        const double rad = std::sqrt(rng.uniform(0.0, 1.0));
        const Point3 b1{rad * std::cos(ang) * std::sqrt(1.0 + 9.0 * t1),
                        rad * std::sin(ang) * 3.0 * std::sqrt(t1), t1};
        const Point3 x = rotate(b1) + Point3{rng.uniform(0.0, 0.5),
                                             rng.uniform(0.0, 0.5),
                                             rng.uniform(0.0, 0.5)};
        const Point3 y = rotate(Point3{-b1.x1, b1.x2, b1.x3});
        if (!acceptance_contains(triple, 0.5 * (x + y))) ++convexity_failures;
        const Point3 d{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
                       rng.uniform(0.0, 1.0)};
        if (!acceptance_contains(triple, x + d)) ++monotone_failures;
    }
    CHECK(convexity_failures == 0);
    CHECK(monotone_failures == 0);
}

TEST_CASE("model descriptors") {
    CHECK(triple_from_json({{"model", "basic"}}).name == "basic");
    CHECK(triple_from_json({{"model", "twisted"}}).boat.r == 16.0);
    CHECK_THROWS_AS(triple_from_json({{"model", "basic"}, {"r", 4.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(triple_from_json({{"model", "boat"}}), std::invalid_argument);

    nlohmann::json custom = {
        {"model", "custom"},
        {"r", 2.0},
        {"cone_R", 0.5},
        {"patches",
         {{{"a", 0.0},
           {"alpha", 1.0},
           {"beta", 2.0},
           {"u_range", {-1.0, 1.0}},
           {"v_range", {-1.0, 1.0}}}}},
    };
    const AdmissibleTriple t = triple_from_json(custom);
    CHECK(t.boat.r == 2.0);
    CHECK(t.boat.profile.patches[0].beta == 2.0);
    CHECK_FALSE(t.canonical);

    // Round trip.
    const AdmissibleTriple back = triple_from_json(triple_to_json(t));
    CHECK(back.boat.r == t.boat.r);
    CHECK(back.boat.profile.patches.size() == t.boat.profile.patches.size());

    const auto cert = certify_triple(t, 500, 7);
    CHECK(cert.no_arbitrage);
    CHECK(cert.convexity_ok);
    CHECK(cert.lipschitz_estimate <= 1.0 + 1e-6);
}

TEST_CASE("lipschitz sandwich via the solver") {
    Rng rng(11);
    for (const AdmissibleTriple& triple : {basic_triple(), twisted_triple()}) {
        for (int i = 0; i < 60; ++i) {
            const Point3 x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                           rng.uniform(-0.5, 0.5)};
            const double v = rho(x, triple);
            CHECK(v <= norm_inf(x) + 1e-6);
            CHECK(v >= -norm_inf(x) - 1e-6);
        }
    }
}
