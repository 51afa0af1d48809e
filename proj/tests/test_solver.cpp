#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hedgemap/model.hpp"
#include "hedgemap/rng.hpp"
#include "hedgemap/solver.hpp"

using namespace hedgemap;

namespace {

const double kSqrt3 = std::sqrt(3.0);

}  // namespace

TEST_CASE("rho at pinned positions") {
    const AdmissibleTriple basic = basic_triple();
    CHECK(std::abs(rho({0.0, 0.0, 0.0}, basic)) <= 1e-9);
    CHECK(rho({1.0, 1.0, 1.0}, basic) == doctest::Approx(-1.0).epsilon(1e-9));

    // Hand value 4/(9 sqrt(3)), cross-checked against the grid oracle below.
    const Point3 x = rotate({0.0, 2.0, 0.0});
    const double expected = 4.0 / (9.0 * kSqrt3);
    CHECK(rho(x, basic) == doctest::Approx(expected).epsilon(1e-7));

    const AdmissibleTriple twisted = twisted_triple();
    CHECK(std::abs(rho({0.0, 0.0, 0.0}, twisted)) <= 1e-9);

    // A short unit of the numeraire is unacceptable and costs 1/sqrt(3).
    const Point3 below = rotate({0.0, 0.0, -1.0});
    CHECK(rho(below, basic) == doctest::Approx(1.0 / kSqrt3).epsilon(1e-7));
    CHECK(rho(below, basic) > 0.0);
}

TEST_CASE("band and general evaluation agree where both apply") {
    const AdmissibleTriple twisted = twisted_triple();
    const SolverConfig cfg;
    Rng rng(3);
    // Compare the in-band height formula with membership bisection directly.
    for (int i = 0; i < 40; ++i) {
        const Point3 p{rng.uniform(-1.0, 1.0), rng.uniform(-3.0, 3.0),
                       rng.uniform(-1.0, 1.0)};
        const double w1 = rng.uniform(-2.0, 2.0);
        const double hb = twisted.boat.height(p.x1 + w1, p.x2);
        if (!std::isfinite(hb)) continue;

        // General route: least w3 with p + (w1, 0, w3) acceptable.
        double lo = -p.x3 - 1e-6, hi = std::max(1.0 - p.x3, lo + 1.0);
        while (!acceptance_membership({p.x1 + w1, p.x2, p.x3 + hi}, twisted, cfg))
            hi = lo + 2.0 * (hi - lo);
        for (int k = 0; k < 50; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (acceptance_membership({p.x1 + w1, p.x2, p.x3 + mid}, twisted, cfg))
                hi = mid;
            else
                lo = mid;
        }
        CHECK(hi == doctest::Approx(hb - p.x3).epsilon(5e-7));
    }
}

TEST_CASE("optimal sets at pinned positions") {
    const AdmissibleTriple basic = basic_triple();

    const OptimalSet at0 = optimal_set({0.0, 0.0, 0.0}, basic);
    CHECK(std::abs(at0.rho) <= 1e-9);
    CHECK_FALSE(at0.singleton);
    CHECK(norm(at0.endpoint_lo - rotate({-1.0, 0.0, 0.0})) <= 1e-6);
    CHECK(norm(at0.endpoint_hi - rotate({1.0, 0.0, 0.0})) <= 1e-6);

    // Vanishing-sequence terms give the zero singleton.
    for (double n : {1.0, 4.0, 16.0}) {
        const Point3 x = rotate({0.0, 3.0 / std::sqrt(n), 1.0 / n});
        const OptimalSet set = optimal_set(x, basic);
        CHECK(set.w1.width() <= 1e-4);
        CHECK(norm(rotate({set.w1.mid(), 0.0, set.w3_star})) <= 1e-4);
    }

    // Twisted closed forms: the support point of the hedged position.
    const AdmissibleTriple twisted = twisted_triple();
    for (double n : {1.0, 4.0, 16.0}) {
        const double r = 16.0;
        const Point3 x = rotate({0.0, r / std::sqrt(n), 0.0});
        const OptimalSet set = optimal_set(x, twisted);
        CHECK(set.w1.width() <= 1e-4);
        const Point3 support = rotate({set.w1.mid(), 0.0, set.w3_star}) + x;
        const Point3 expected =
            rotate({0.5 * std::sqrt(1.0 + r * r / n), r / std::sqrt(n), 1.0 / n});
        CHECK(norm(support - expected) <= 1e-4);
    }

    // Reported sets are feasible at the reported price.
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        const Point3 x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                       rng.uniform(-1.0, 1.0)};
        const OptimalSet set = optimal_set(x, basic);
        for (double lam : {0.0, 0.1, 0.2, 0.3, 0.37, 0.5, 0.62, 0.77, 0.9, 1.0}) {
            const double w1 = set.w1.lo + lam * set.w1.width();
            const Point3 z = rotate({w1, 0.0, set.w3_star});
            CHECK(basic.price(z) == doctest::Approx(set.rho).epsilon(1e-6));
            CHECK(acceptance_contains(basic, z + x,
                                      SolverConfig{.membership_tol = 1e-6}));
        }
    }
}

TEST_CASE("oracle equivalence on a small sample") {
    Rng rng(23);
    for (const AdmissibleTriple& triple : {basic_triple(), twisted_triple()}) {
        for (int i = 0; i < 6; ++i) {
            const Point3 x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                           rng.uniform(-1.0, 1.0)};
            const OracleResult oracle = brute_force_oracle(x, triple, 1e-2);
            const double direct = rho(x, triple);
            CHECK(std::abs(direct - oracle.rho) <= 2e-2);
        }
    }

    // Pinned oracle values.
    const AdmissibleTriple basic = basic_triple();
    const OracleResult at0 = brute_force_oracle({0.0, 0.0, 0.0}, basic, 1e-2);
    CHECK(std::abs(at0.rho) <= 2e-2 / kSqrt3);
    CHECK(at0.w1_range.lo == doctest::Approx(-1.0).epsilon(2e-2));
    CHECK(at0.w1_range.hi == doctest::Approx(1.0).epsilon(2e-2));

    const OracleResult ones = brute_force_oracle({1.0, 1.0, 1.0}, basic, 1e-2);
    CHECK(ones.rho == doctest::Approx(-1.0).epsilon(2e-2));

    const OracleResult mid = brute_force_oracle(rotate({0.0, 2.0, 0.0}), basic, 1e-3);
    CHECK(mid.rho == doctest::Approx(4.0 / (9.0 * kSqrt3)).epsilon(1e-3));
}

TEST_CASE("translation, sandwich, convexity of rho") {
    Rng rng(29);
    const AdmissibleTriple basic = basic_triple();
    const Point3 e{1.0, 1.0, 1.0};
    for (int i = 0; i < 25; ++i) {
        const Point3 x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                       rng.uniform(-1.0, 1.0)};
        const double lam = rng.uniform(-1.0, 1.0);
        const double base = rho(x, basic);
        CHECK(rho(x + lam * e, basic) == doctest::Approx(base - lam).epsilon(1e-6));

        const Point3 y{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                       rng.uniform(-1.0, 1.0)};
        const double ry = rho(y, basic);
        CHECK(rho(0.5 * (x + y), basic) <= 0.5 * (base + ry) + 1e-6);

        CHECK(std::abs(base - ry) <= norm_inf(x - y) + 1e-6);
    }
}

TEST_CASE("infeasible custom model raises") {
    // An empty profile: the ellipse and the box never meet.
    AdmissibleTriple broken = custom_triple(
        2.0, {EllipsePatch{0.0, 1e12, 1.0, 0.4, 0.5, -1.0, 1.0}}, 0.5);
    SolverConfig cfg;
    cfg.w3_cap = 50.0;
    CHECK_THROWS_AS(rho({0.0, 0.0, 0.0}, broken, cfg), SolverInfeasible);
}
