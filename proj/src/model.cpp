#include "hedgemap/model.hpp"

#include <cmath>

#include "hedgemap/rng.hpp"
#include "hedgemap/solver.hpp"

namespace hedgemap {

double PriceFunctional::operator()(const Point3& z, double tol) const {
    if (span_residual(z) > tol * std::max(1.0, norm_inf(z)))
        throw NotInPayoffSpace("price: vector outside the payoff span");
    return z.x3;
}

AdmissibleTriple basic_triple() {
    AdmissibleTriple t;
    t.name = "basic";
    t.canonical = true;
    t.boat = basic_boat(3.0);
    return t;
}

AdmissibleTriple twisted_triple() {
    AdmissibleTriple t;
    t.name = "twisted";
    t.canonical = true;
    t.boat = twisted_boat(16.0);
    return t;
}

AdmissibleTriple custom_triple(double r, std::vector<EllipsePatch> patches,
                               double cone_radius) {
    if (r <= 0.0) throw std::invalid_argument("custom_triple: r must be > 0");
    for (const auto& p : patches) {
        if (p.alpha <= 0.0 || p.beta <= 0.0)
            throw std::invalid_argument("custom_triple: alpha and beta must be > 0");
        if (p.u_lo > p.u_hi || p.v_lo > p.v_hi)
            throw std::invalid_argument("custom_triple: empty patch range");
    }
    AdmissibleTriple t;
    t.name = "custom";
    t.canonical = false;
    t.boat = BoatSet{r, BoatProfile{std::move(patches)}, false};
    t.cone_radius_check = cone_radius;
    return t;
}

bool check_no_arbitrage(const AdmissibleTriple& triple, std::size_t samples,
                        std::uint64_t seed) {
    Rng rng(seed);
    const PayoffSpace& ps = triple.payoffs;
    for (std::size_t i = 0; i < samples; ++i) {
        // z = a*(1,1,1) + b*(1,-1,0) is componentwise nonnegative iff a >= |b|.
        const double a = rng.uniform(0.0, 2.0);
        const double b = rng.uniform(-a, a);
        const Point3 z = a * ps.basis_unit + b * ps.basis_zero;
        if (norm_inf(z) <= 1e-12) continue;  // nonzero filter
        if (triple.price(z) <= 0.0) return false;
    }
    return true;
}

namespace {

Point3 random_boat_point(const BoatSet& boat, Rng& rng) {
    for (;;) {
        const EllipsePatch& p =
            boat.profile.patches[rng.uniform_index(boat.profile.patches.size())];
        const double u = rng.uniform(p.u_lo, p.u_hi);
        const double v = rng.uniform(p.v_lo, p.v_hi);
        if (p.ellipse_residual(u, v) > 0.0) continue;
        const double t = rng.uniform(0.0, 1.0);
        const double w = std::sqrt(1.0 + boat.r * boat.r * t);
        return {u * w, v * boat.r * std::sqrt(t), t};
    }
}

}  // namespace

TripleCertification certify_triple(const AdmissibleTriple& triple, std::size_t samples,
                                   std::uint64_t seed) {
    TripleCertification cert;
    Rng rng(seed);
    const BoatSet& boat = triple.boat;

    cert.no_arbitrage = check_no_arbitrage(triple, samples, seed ^ 0x9e3779b9ull);

    cert.convexity_ok = true;
    for (std::size_t i = 0; i < samples && cert.convexity_ok; ++i) {
        const Point3 a = random_boat_point(boat, rng);
        const Point3 b = random_boat_point(boat, rng);
        if (boat.member_slack(0.5 * (a + b)) > kMembershipTol) cert.convexity_ok = false;
    }

    const IceCreamCone cone{triple.cone_radius_check};
    cert.monotone_ok = true;
    for (std::size_t i = 0; i < samples && cert.monotone_ok; ++i) {
        const Point3 b = random_boat_point(boat, rng);
        const double k3 = rng.uniform(0.0, 1.0 - b.x3);
        const double rad = cone.R * k3 * rng.uniform(0.0, 1.0);
        const double ang = rng.uniform(0.0, 6.283185307179586);
        const Point3 k{rad * std::cos(ang), rad * std::sin(ang), k3};
        if (boat.member_slack(b + k) > kMembershipTol) cert.monotone_ok = false;
    }

    SolverConfig cfg;
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(samples, 64); ++i) {
        const Point3 x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                       rng.uniform(-0.5, 0.5)};
        Point3 y = x;
        y.x1 += rng.uniform(-0.05, 0.05);
        y.x2 += rng.uniform(-0.05, 0.05);
        y.x3 += rng.uniform(-0.05, 0.05);
        const double dr = std::abs(rho(x, triple, cfg) - rho(y, triple, cfg));
        const double dx = norm_inf(x - y);
        if (dx > 1e-9) worst = std::max(worst, dr / dx);
    }
    cert.lipschitz_estimate = worst;

    for (const auto& p : boat.profile.patches) {
        const double edge = std::abs(p.a) * std::sqrt(p.alpha);
        if (std::abs(edge - 1.0) < 1e-9)
            cert.warnings.push_back(
                "patch center sits on the sublevel-support boundary case "
                "(|a|*sqrt(alpha) = 1); convexity checked empirically only");
        else if (edge > 1.0)
            cert.warnings.push_back(
                "patch has |a|*sqrt(alpha) > 1; no convexity guarantee");
    }
    return cert;
}

namespace {

EllipsePatch patch_from_json(const nlohmann::json& j) {
    EllipsePatch p;
    p.a = j.at("a").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    const auto& ur = j.at("u_range");
    const auto& vr = j.at("v_range");
    p.u_lo = ur.at(0).get<double>();
    p.u_hi = ur.at(1).get<double>();
    p.v_lo = vr.at(0).get<double>();
    p.v_hi = vr.at(1).get<double>();
    return p;
}

nlohmann::json patch_to_json(const EllipsePatch& p) {
    return {{"a", p.a},
            {"alpha", p.alpha},
            {"beta", p.beta},
            {"u_range", {p.u_lo, p.u_hi}},
            {"v_range", {p.v_lo, p.v_hi}}};
}

}  // namespace

AdmissibleTriple triple_from_json(const nlohmann::json& j) {
    const std::string model = j.at("model").get<std::string>();
    if (model == "basic" || model == "twisted") {
        if (j.contains("r") || j.contains("patches") || j.contains("cone_R"))
            throw std::invalid_argument(
                "model descriptor: canonical models reject parameter overrides");
        return model == "basic" ? basic_triple() : twisted_triple();
    }
    if (model != "custom")
        throw std::invalid_argument("model descriptor: unknown model '" + model + "'");
    std::vector<EllipsePatch> patches;
    for (const auto& pj : j.at("patches")) patches.push_back(patch_from_json(pj));
    const double r = j.at("r").get<double>();
    const double cone_radius = j.value("cone_R", 1.4142135623730951);
    return custom_triple(r, std::move(patches), cone_radius);
}

nlohmann::json triple_to_json(const AdmissibleTriple& triple) {
    nlohmann::json j;
    j["model"] = triple.name;
    if (!triple.canonical) {
        j["r"] = triple.boat.r;
        j["cone_R"] = triple.cone_radius_check;
        nlohmann::json patches = nlohmann::json::array();
        for (const auto& p : triple.boat.profile.patches)
            patches.push_back(patch_to_json(p));
        j["patches"] = patches;
    }
    return j;
}

}  // namespace hedgemap
