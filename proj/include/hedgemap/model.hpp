#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hedgemap/boat.hpp"
#include "hedgemap/point3.hpp"
#include "hedgemap/rotation.hpp"

#include "json.hpp"

namespace hedgemap {

// Two-dimensional space of traded payoffs inside R^3: the rotated image of
// the plane {w2 = 0}, spanned by a price-1 and a price-0 direction.
struct PayoffSpace {
    Point3 basis_unit{1.0, 1.0, 1.0};
    Point3 basis_zero{1.0, -1.0, 0.0};
};

struct PriceFunctional {
    // Residual of the span condition z1 + z2 = 2 z3 characterizing membership
    // in the payoff plane.
    static double span_residual(const Point3& z) {
        return std::abs(z.x1 + z.x2 - 2.0 * z.x3);
    }

    // Throws NotInPayoffSpace if z lies outside the span beyond tolerance.
    double operator()(const Point3& z, double tol = kMembershipTol) const;
};

// An acceptance-set model: the boat body (in rotated coordinates), the fixed
// rotation, the payoff plane and the pricing rule. The acceptance set itself
// is the rotated boat fattened by the positive orthant.
struct AdmissibleTriple {
    std::string name = "custom";
    bool canonical = false;
    BoatSet boat;
    PayoffSpace payoffs;
    PriceFunctional price;
    double cone_radius_check = 1.4142135623730951;  // sqrt(2), certified bound

    const Rotation& rotation() const { return Rotation::canonical(); }
};

AdmissibleTriple basic_triple();
AdmissibleTriple twisted_triple();
AdmissibleTriple custom_triple(double r, std::vector<EllipsePatch> patches,
                               double cone_radius);

// Samples nonzero componentwise-nonnegative payoffs and checks strict price
// positivity. Returns true iff no violation was found.
bool check_no_arbitrage(const AdmissibleTriple& triple, std::size_t samples,
                        std::uint64_t seed);

// Empirical certification of a custom model (the canonical ones are proven):
// convexity and monotonicity spot checks plus a Lipschitz estimate for the
// risk functional. Warnings flag parameter corners the checks cannot settle.
struct TripleCertification {
    bool no_arbitrage = false;
    bool convexity_ok = false;
    bool monotone_ok = false;
    double lipschitz_estimate = 0.0;
    std::vector<std::string> warnings;
};

TripleCertification certify_triple(const AdmissibleTriple& triple, std::size_t samples,
                                   std::uint64_t seed);

// Model descriptor:
//   {"model":"basic"|"twisted"|"custom", "r":..., "patches":[...], "cone_R":...}
// Canonical names reject parameter overrides.
AdmissibleTriple triple_from_json(const nlohmann::json& j);
nlohmann::json triple_to_json(const AdmissibleTriple& triple);

}  // namespace hedgemap
