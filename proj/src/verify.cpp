#include "hedgemap/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>

#include "hedgemap/diagnostics.hpp"
#include "hedgemap/kernels.hpp"
#include "hedgemap/model.hpp"
#include "hedgemap/rng.hpp"
#include "hedgemap/solver.hpp"

namespace hedgemap {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Check {
    double worst = 0.0;
    double tol = 0.0;
    long samples = 0;
};

Point3 random_boat_point(const BoatSet& boat, Rng& rng) {
    for (;;) {
        const EllipsePatch& p =
            boat.profile.patches[rng.uniform_index(boat.profile.patches.size())];
        const double u = rng.uniform(p.u_lo, p.u_hi);
        const double v = rng.uniform(p.v_lo, p.v_hi);
        if (p.ellipse_residual(u, v) > 0.0) continue;
        const double t = rng.uniform(0.0, 1.0);
        return {u * std::sqrt(1.0 + boat.r * boat.r * t), v * boat.r * std::sqrt(t), t};
    }
}

Check check_rotation() {
    const Rotation& rot = Rotation::canonical();
    double worst = rot.orthogonality_error();
    worst = std::max(worst, std::abs(rot.determinant() - 1.0));
    const double s3 = std::sqrt(3.0);
    const double s2 = std::sqrt(2.0);
    worst = std::max(worst, norm(rot.apply({0.0, 0.0, s3}) - Point3{1.0, 1.0, 1.0}));
    worst = std::max(worst, norm(rot.apply({s2, 0.0, 0.0}) - Point3{1.0, -1.0, 0.0}));
    return {worst, 1e-12, 4};
}

Check check_convexity(const BoatSet& boat, long pairs, Rng rng) {
    double worst = -1.0;
    for (long i = 0; i < pairs; ++i) {
        const Point3 a = random_boat_point(boat, rng);
        const Point3 b = random_boat_point(boat, rng);
        worst = std::max(worst, boat.member_slack(0.5 * (a + b)));
    }
    return {std::max(worst, 0.0), 1e-9, pairs};
}

Check check_monotonicity(const BoatSet& boat, double cone_radius, long samples,
                         Rng rng) {
    double worst = -1.0;
    for (long i = 0; i < samples; ++i) {
        const Point3 b = random_boat_point(boat, rng);
        const double k3 = rng.uniform(0.0, 1.0 - b.x3);
        const double rad = cone_radius * k3 * std::sqrt(rng.uniform(0.0, 1.0));
        const double ang = rng.uniform(0.0, 2.0 * kPi);
        const Point3 k{rad * std::cos(ang), rad * std::sin(ang), k3};
        worst = std::max(worst, boat.member_slack(b + k));
    }
    return {std::max(worst, 0.0), 1e-9, samples};
}

// Boundary samples of the disc boat; squared gradient norm of the boundary
// function must stay below 4(1+r^2)/r^4.
Check check_gradient_bound_basic(double r, long samples, Rng rng) {
    std::vector<double> x1(samples), x2(samples), out(samples);
    for (long i = 0; i < samples; ++i) {
        const double t = rng.uniform(1e-6, 1.0 - 1e-6);
        const double ang = rng.uniform(0.0, 2.0 * kPi);
        x1[i] = std::cos(ang) * std::sqrt(1.0 + r * r * t);
        x2[i] = std::sin(ang) * r * std::sqrt(t);
    }
    kernels::active_ops().f_basic_grad_sq(x1.data(), x2.data(), out.data(), samples, r);
    const double bound = 4.0 * (1.0 + r * r) / (r * r * r * r);
    double worst = 0.0;
    for (double v : out) worst = std::max(worst, v - bound);
    return {worst, 1e-9, samples};
}

Check check_cone_inclusion(long samples, Rng rng) {
    const IceCreamCone cone{std::sqrt(2.0)};
    double worst = 0.0;
    for (long i = 0; i < samples; ++i) {
        const Point3 mu{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
                        rng.uniform(0.0, 1.0)};
        worst = std::max(worst, cone.slack(rotate_inv(mu)));
    }
    return {worst, 1e-9, samples};
}

Check check_rho_zero(const AdmissibleTriple& triple) {
    return {std::abs(rho({0.0, 0.0, 0.0}, triple)), 1e-9, 1};
}

// The disc boat equals a section of the boundary-function epigraph: the
// membership predicate and f <= x3 must agree wherever the point is not
// within the comparison blur of the graph itself.
Check check_epigraph_section(double r, long samples, Rng rng) {
    const BoatSet boat = basic_boat(r);
    long mismatches = 0;
    long used = 0;
    for (long i = 0; i < samples; ++i) {
        const Point3 x{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0),
                       rng.uniform(0.0, 1.0)};
        const double f = f_basic(x.x1, x.x2, r);
        if (std::abs(f - x.x3) <= 1e-7) continue;
        ++used;
        if ((f <= x.x3) != (boat.member_slack(x) <= 1e-9)) ++mismatches;
    }
    return {static_cast<double>(mismatches), 0.0, used};
}

Check check_sandwich(const AdmissibleTriple& triple, long samples, Rng rng) {
    double worst = 0.0;
    for (long i = 0; i < samples; ++i) {
        const Point3 x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                       rng.uniform(-0.5, 0.5)};
        const double v = rho(x, triple);
        const double m = norm_inf(x);
        worst = std::max(worst, std::max(v - m, -m - v));
    }
    return {worst, 1e-6, samples};
}

Check check_no_arbitrage_claim(const AdmissibleTriple& triple, long samples,
                               std::uint64_t seed) {
    const bool ok = check_no_arbitrage(triple, static_cast<std::size_t>(samples), seed);
    return {ok ? 0.0 : 1.0, 0.0, samples};
}

// Midpoint concavity of the sublevel support function in the height argument,
// for every patch whose ellipse has 0 interior.
Check check_support_concavity(long samples, Rng rng) {
    struct Item {
        EllipsePatch patch;
        double r;
    };
    std::vector<Item> items;
    for (const auto& p : disc_profile().patches) items.push_back({p, 3.0});
    for (const auto& p : quarter_profile().patches)
        if (p.center_interior()) items.push_back({p, 16.0});

    double worst = 0.0;
    long total = 0;
    const long per_item = samples / static_cast<long>(items.size());
    std::vector<double> s1(3), s2(3), ts(3), out(3);
    for (const auto& item : items) {
        for (long i = 0; i < per_item; ++i) {
            const double a1 = rng.uniform(-2.0, 2.0);
            const double a2 = rng.uniform(-2.0, 2.0);
            const double t1 = rng.uniform(0.0, 1.0);
            const double t2 = rng.uniform(0.0, 1.0);
            s1[0] = s1[1] = s1[2] = a1;
            s2[0] = s2[1] = s2[2] = a2;
            ts[0] = t1;
            ts[1] = t2;
            ts[2] = 0.5 * (t1 + t2);
            kernels::active_ops().support_sigma(&item.patch, item.r, s1.data(),
                                                s2.data(), ts.data(), out.data(), 3);
            worst = std::max(worst, 0.5 * (out[0] + out[1]) - out[2]);
            ++total;
        }
    }
    return {worst, 1e-9, total};
}

// The height derivative of the patch equation never vanishes inside the body
// (patches with 0 interior to the ellipse).
Check check_nonvanishing_d3(long samples, Rng rng) {
    struct Item {
        EllipsePatch patch;
        double r;
    };
    std::vector<Item> items;
    for (const auto& p : disc_profile().patches) items.push_back({p, 3.0});
    for (const auto& p : quarter_profile().patches)
        if (p.center_interior()) items.push_back({p, 16.0});

    double min_abs = std::numeric_limits<double>::infinity();
    long total = 0;
    for (const auto& item : items) {
        // Full-ellipse sampling: interior (u, v), any height.
        for (long i = 0; i < samples / static_cast<long>(items.size()); ++i) {
            const double w = 1.0 / std::sqrt(item.patch.alpha);
            const double u = rng.uniform(item.patch.a - w, item.patch.a + w);
            const double vmax =
                std::sqrt(std::max(0.0, 1.0 - item.patch.alpha * (u - item.patch.a) *
                                                  (u - item.patch.a)) /
                          item.patch.beta);
            const double v = rng.uniform(-vmax, vmax);
            const double t = rng.uniform(1e-12, 1.0);
            const Point3 x{u * std::sqrt(1.0 + item.r * item.r * t),
                           v * item.r * std::sqrt(t), t};
            const Vec3 g = patch_F_gradient(x, item.r, item.patch);
            min_abs = std::min(min_abs, std::abs(g.d3));
            ++total;
        }
    }
    return {std::max(0.0, 1e-12 - min_abs), 0.0, total};
}

// Patch boundary samples with their analytic squared gradient norm.
Check check_patch_gradient_bound(const EllipsePatch& patch, double r, double bound_sq,
                                 long samples, Rng rng) {
    std::vector<double> x1(samples), x2(samples), x3(samples), out(samples);
    // Angle range whose (u, v) arc lies in the patch box.
    for (long i = 0; i < samples; ++i) {
        double u, v;
        for (;;) {
            const double ang = rng.uniform(0.0, 2.0 * kPi);
            u = patch.a + std::cos(ang) / std::sqrt(patch.alpha);
            v = std::sin(ang) / std::sqrt(patch.beta);
            if (u >= patch.u_lo - 1e-12 && u <= patch.u_hi + 1e-12 &&
                v >= patch.v_lo - 1e-12 && v <= patch.v_hi + 1e-12)
                break;
        }
        const double t = rng.uniform(1e-9, 1.0);
        x1[i] = u * std::sqrt(1.0 + r * r * t);
        x2[i] = v * r * std::sqrt(t);
        x3[i] = t;
    }
    kernels::active_ops().patch_grad_sq(&patch, r, x1.data(), x2.data(), x3.data(),
                                        out.data(), samples);
    double worst = 0.0;
    for (double v : out) worst = std::max(worst, v - bound_sq);
    return {worst, 1e-9, samples};
}

Check check_grad_bound_steep(double bound, long samples, Rng rng) {
    const double r = 16.0;
    const double bound_sq = bound * bound;
    const auto patches = quarter_profile().patches;
    Check c1 = check_patch_gradient_bound(patches[0], r, bound_sq, samples / 2, rng);
    Check c2 = check_patch_gradient_bound(patches[2], r, bound_sq, samples / 2, rng);
    return {std::max(c1.worst, c2.worst), 1e-9, c1.samples + c2.samples};
}

Check check_grad_bound_shallow(long samples, Rng rng) {
    const double r = 16.0;
    const auto patches = quarter_profile().patches;
    double worst = 0.0;
    long total = 0;
    for (std::size_t idx : {std::size_t{1}, std::size_t{3}}) {
        const EllipsePatch& p = patches[idx];
        const double denom = r * (8.0 - 9.0 * p.alpha * p.a * p.a);
        const double bound =
            16.0 * std::max(p.alpha * r * r / (r * r + 1.0), 1.0) / denom;
        Check c = check_patch_gradient_bound(p, r, bound * bound, samples / 2, rng);
        worst = std::max(worst, c.worst);
        total += c.samples;
    }
    return {worst, 1e-9, total};
}

// Matched gradients on the u = 1/2 seam and the three sign relations at the
// outer x2 = 0 seam (factors -1/3, 0, +1/3).
Check check_seam_smoothness(long heights, Rng rng) {
    const double r = 16.0;
    const auto patches = quarter_profile().patches;
    const EllipsePatch& e1 = patches[0];
    const EllipsePatch& e2 = patches[1];
    double worst = 0.0;
    for (long i = 0; i < heights; ++i) {
        const double t = rng.uniform(1e-9, 1.0);
        const double w = std::sqrt(1.0 + r * r * t);

        // Interior seam: u = 1/2, where both patch ellipses allow v in [0, 1].
        const double x2 = rng.uniform(0.0, r * std::sqrt(t));
        const Point3 xs{0.5 * w, x2, t};
        const Vec3 g1 = patch_F_gradient(xs, r, e1);
        const Vec3 g2 = patch_F_gradient(xs, r, e2);
        worst = std::max({worst, std::abs(g1.d1 - g2.d1), std::abs(g1.d2 - g2.d2),
                          std::abs(g1.d3 - g2.d3)});

        // Outer seam: compare the two patches across the body at u = +-1.
        const Point3 xr{w, 0.0, t};
        const Point3 xl{-w, 0.0, t};
        const Vec3 gr = patch_F_gradient(xr, r, e1);
        const Vec3 gl = patch_F_gradient(xl, r, e2);
        worst = std::max(worst, std::abs(gl.d1 + gr.d1 / 3.0));
        worst = std::max(worst, std::abs(gl.d2 - gr.d2));
        worst = std::max(worst, std::abs(gl.d3 - gr.d3 / 3.0));
    }
    return {worst, 1e-9, heights};
}

Check check_lsc_gap(const AdmissibleTriple& triple) {
    SequenceSpec seq;
    seq.kind = SequenceKind::basic_lsc;
    seq.n_max = 100;
    const LscReport report = lsc_probe({0.0, 0.0, 0.0}, seq, triple);
    const double lo = 0.99, hi = 1.01;
    const double viol = std::max(lo - report.gap, report.gap - hi);
    return {std::max(viol, 0.0), 0.0, seq.n_max};
}

Check check_selection_oscillation(const AdmissibleTriple& triple) {
    SequenceSpec seq;
    seq.kind = SequenceKind::twisted_alternating;
    seq.n_max = 400;
    const SelectionReport report = selection_oscillation(seq, triple);
    return {std::max(0.0, 0.99 - report.oscillation), 0.0, seq.n_max};
}

Check check_parameters() {
    double worst = 0.0;
    const double r_twisted = 16.0;
    for (double alpha : {4.0, 4.0 / 9.0}) {
        const double need = std::max(std::sqrt(2.0), 1.0 / std::sqrt(5.0 - alpha));
        worst = std::max(worst, need - r_twisted);
    }
    for (const auto& p : quarter_profile().patches)
        if (p.center_interior())
            worst = std::max(worst, 9.0 * p.alpha * p.a * p.a - 8.0);
    // Certified cone radius must fit under both shape-dependent caps.
    const double r_basic = 3.0;
    const double cap_basic = r_basic * r_basic / (2.0 * std::sqrt(1.0 + r_basic * r_basic));
    worst = std::max(worst, std::sqrt(2.0) - cap_basic);
    worst = std::max(worst, std::sqrt(2.0) - 7.0 * r_twisted / 16.0);
    return {std::max(0.0, worst), 0.0, 6};
}

}  // namespace

std::vector<ClaimResult> run_all_claims(std::uint64_t seed) {
    struct Entry {
        const char* id;
        const char* statement;
        std::function<Check(std::uint64_t)> run;
    };

    const AdmissibleTriple basic = basic_triple();
    const AdmissibleTriple twisted = twisted_triple();
    const double r3 = 3.0, r16 = 16.0;

    const std::vector<Entry> entries = {
        {"rotation_certification",
         "rotation is orthogonal with determinant 1 and maps the two anchors",
         [&](std::uint64_t) { return check_rotation(); }},
        {"convexity_basic", "midpoints of the plain boat stay inside",
         [&](std::uint64_t s) { return check_convexity(basic.boat, 10000, Rng(s)); }},
        {"boundary_function_section",
         "the plain boat is exactly the height band under its boundary function",
         [&](std::uint64_t s) { return check_epigraph_section(r3, 20000, Rng(s)); }},
        {"monotonicity_basic",
         "plain boat absorbs cone shifts of radius r^2/(2 sqrt(1+r^2))",
         [&](std::uint64_t s) {
             const double cap = r3 * r3 / (2.0 * std::sqrt(1.0 + r3 * r3));
             return check_monotonicity(basic.boat, cap, 10000, Rng(s));
         }},
        {"gradient_bound_basic",
         "squared boundary gradient of the plain boat stays below 4(1+r^2)/r^4",
         [&](std::uint64_t s) { return check_gradient_bound_basic(r3, 100000, Rng(s)); }},
        {"cone_inclusion", "the rotated positive orthant fits in the sqrt(2) cone",
         [&](std::uint64_t s) { return check_cone_inclusion(10000, Rng(s)); }},
        {"rho_zero_basic", "risk of the zero position vanishes (basic model)",
         [&](std::uint64_t) { return check_rho_zero(basic); }},
        {"rho_zero_twisted", "risk of the zero position vanishes (twisted model)",
         [&](std::uint64_t) { return check_rho_zero(twisted); }},
        {"sandwich_basic", "-|x| <= rho(x) <= |x| in sup norm (basic model)",
         [&](std::uint64_t s) { return check_sandwich(basic, 1000, Rng(s)); }},
        {"sandwich_twisted", "-|x| <= rho(x) <= |x| in sup norm (twisted model)",
         [&](std::uint64_t s) { return check_sandwich(twisted, 1000, Rng(s)); }},
        {"no_arbitrage_basic", "nonzero nonnegative payoffs have positive price",
         [&](std::uint64_t s) { return check_no_arbitrage_claim(basic, 100000, s); }},
        {"no_arbitrage_twisted", "nonzero nonnegative payoffs have positive price",
         [&](std::uint64_t s) { return check_no_arbitrage_claim(twisted, 100000, s); }},
        {"support_concavity",
         "slice support functions are concave in the height argument",
         [&](std::uint64_t s) { return check_support_concavity(100000, Rng(s)); }},
        {"nonvanishing_height_derivative",
         "the patch equation keeps a nonzero height derivative inside the body",
         [&](std::uint64_t s) { return check_nonvanishing_d3(10000, Rng(s)); }},
        {"grad_bound_steep_quarters",
         "stated 2/r gradient cap on the outer quarters; the top rim exceeds it "
         "(sharp value 2 sqrt(1+r^2)/r^2), so this check reports red",
         [&](std::uint64_t s) {
             return check_grad_bound_steep(2.0 / r16, 100000, Rng(s));
         }},
        {"grad_bound_steep_envelope",
         "corrected outer-quarter envelope 2 sqrt(1+r^2)/r^2 holds",
         [&](std::uint64_t s) {
             return check_grad_bound_steep(2.0 * std::sqrt(1.0 + r16 * r16) /
                                               (r16 * r16),
                                           100000, Rng(s));
         }},
        {"grad_bound_shallow_quarters",
         "inner quarter patches satisfy the 16 max{...}/(r(8-9 alpha a^2)) bound",
         [&](std::uint64_t s) { return check_grad_bound_shallow(100000, Rng(s)); }},
        {"convexity_twisted", "midpoints of the twisted boat stay inside",
         [&](std::uint64_t s) { return check_convexity(twisted.boat, 10000, Rng(s)); }},
        {"seam_smoothness",
         "patch gradients agree on the interior seam and match 1/3 factors outside",
         [&](std::uint64_t s) { return check_seam_smoothness(1000, Rng(s)); }},
        {"monotonicity_twisted", "twisted boat absorbs cone shifts of radius 7r/16",
         [&](std::uint64_t s) {
             return check_monotonicity(twisted.boat, 7.0 * r16 / 16.0, 10000, Rng(s));
         }},
        {"lsc_gap_basic",
         "solution sets collapse along the vanishing sequence: gap near 1",
         [&](std::uint64_t) { return check_lsc_gap(basic); }},
        {"selection_oscillation_twisted",
         "forced selections oscillate along the alternating sequence",
         [&](std::uint64_t) { return check_selection_oscillation(twisted); }},
        {"parameter_sanity", "model constants satisfy every hypothesis they rely on",
         [&](std::uint64_t) { return check_parameters(); }},
    };

    std::vector<ClaimResult> results;
    results.reserve(entries.size());
    for (const auto& e : entries) {
        ClaimResult cr;
        cr.id = e.id;
        cr.statement = e.statement;
        cr.seed = seed ^ fnv1a64(e.id);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Check c = e.run(cr.seed);
            cr.worst_violation = c.worst;
            cr.tolerance = c.tol;
            cr.samples = c.samples;
            cr.pass = c.worst <= c.tol;
        } catch (const std::exception&) {
            cr.pass = false;
            cr.worst_violation = std::numeric_limits<double>::infinity();
        }
        cr.millis = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        results.push_back(std::move(cr));
    }
    return results;
}

bool all_pass(const std::vector<ClaimResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

void print_claim_summary(std::ostream& os, const std::vector<ClaimResult>& results) {
    char line[256];
    for (const auto& r : results) {
        std::snprintf(line, sizeof(line),
                      "[%s] %-34s worst=%.3e tol=%.1e samples=%ld (%.0f ms)\n",
                      r.pass ? "PASS" : "FAIL", r.id.c_str(), r.worst_violation,
                      r.tolerance, r.samples, r.millis);
        os << line;
    }
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::snprintf(line, sizeof(line), "%zu claims, %d failed\n", results.size(), failed);
    os << line;
}

nlohmann::json claims_to_json(const std::vector<ClaimResult>& results,
                              std::uint64_t seed) {
    nlohmann::json out;
    out["seed"] = seed;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        arr.push_back({{"id", r.id},
                       {"statement", r.statement},
                       {"pass", r.pass},
                       {"worst_violation", r.worst_violation},
                       {"tolerance", r.tolerance},
                       {"samples", r.samples},
                       {"seed", r.seed}});
    }
    out["claims"] = arr;
    return out;
}

}  // namespace hedgemap
