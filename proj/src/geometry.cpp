#include "hedgemap/boat.hpp"

#include <cmath>

#include "hedgemap/detail/geometry_core.hpp"
#include "hedgemap/rotation.hpp"

namespace hedgemap {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490393;
constexpr double kInvSqrt3 = 0.5773502691896257645091487805019574556;
constexpr double kInvSqrt6 = 0.4082482904638630163662140124509818986;
constexpr double kSqrt2Over3 = 0.8164965809277260327324280249019637974;  // sqrt(2)/sqrt(3)

// Gradients are only reported above this boundary height; the analytic
// formulas divide by quantities that vanish at the flat bottom.
constexpr double kGradHeightFloor = 1e-8;

}  // namespace

const Rotation& Rotation::canonical() {
    static const Rotation rot({{{kInvSqrt2, kInvSqrt6, kInvSqrt3},
                                {-kInvSqrt2, kInvSqrt6, kInvSqrt3},
                                {0.0, -kSqrt2Over3, kInvSqrt3}}});
    return rot;
}

double Rotation::orthogonality_error() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dotij = 0.0;
            for (int k = 0; k < 3; ++k) dotij += m_[k][i] * m_[k][j];
            worst = std::max(worst, std::abs(dotij - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double Rotation::determinant() const {
    return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
           m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
           m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
}

BoatProfile disc_profile() {
    BoatProfile profile;
    profile.patches.push_back({0.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0});
    return profile;
}

BoatProfile quarter_profile() {
    BoatProfile profile;
    profile.patches.push_back({0.5, 4.0, 1.0, 0.5, 1.0, 0.0, 1.0});
    profile.patches.push_back({0.5, 4.0 / 9.0, 1.0, -1.0, 0.5, 0.0, 1.0});
    profile.patches.push_back({-0.5, 4.0, 1.0, -1.0, -0.5, -1.0, 0.0});
    profile.patches.push_back({-0.5, 4.0 / 9.0, 1.0, -0.5, 1.0, -1.0, 0.0});
    return profile;
}

BoatSet basic_boat(double r) {
    return {r, disc_profile(), true};
}

BoatSet twisted_boat(double r) {
    return {r, quarter_profile(), false};
}

double BoatSet::member_slack(const Point3& x) const {
    return detail::boat_slack_point(profile.patches.data(), profile.patches.size(), r,
                                    x.x1, x.x2, x.x3);
}

double BoatSet::height(double x1, double x2, int iters) const {
    if (disc_closed_form) {
        const double f = f_basic(x1, x2, r);
        if (f > 1.0 + kMembershipTol) return std::numeric_limits<double>::infinity();
        return std::min(f, 1.0);
    }
    return detail::boat_height_point(profile.patches.data(), profile.patches.size(), r,
                                     x1, x2, iters);
}

double f_basic(double x1, double x2, double r) {
    return detail::f_basic_point(x1, x2, r);
}

bool basic_membership(const Point3& x, double r, double tol) {
    if (x.x3 < -tol || x.x3 > 1.0 + tol) return false;
    if (x.x3 <= 0.0) return std::abs(x.x2) <= tol && std::abs(x.x1) <= 1.0 + tol;
    return f_basic(x.x1, x.x2, r) <= x.x3 + tol;
}

Vec2 grad_f_basic(double x1, double x2, double r) {
    const double f = f_basic(x1, x2, r);
    if (f < kGradHeightFloor)
        throw DegenerateInput("grad_f_basic: boundary height below 1e-8");
    const double r2 = r * r;
    const double s = x1 * x1 + x2 * x2 - 1.0;
    const double d = std::sqrt(s * s + 4.0 * x2 * x2);
    return {x1 / r2 * (1.0 + s / d), x2 / r2 * (1.0 + (s + 2.0) / d)};
}

double patch_F(const Point3& x, double r, const EllipsePatch& patch) {
    const double r2x3 = r * r * x.x3;
    const double u = x.x1 / std::sqrt(1.0 + r2x3);
    const double du = u - patch.a;
    return r2x3 / patch.beta * (patch.alpha * du * du - 1.0) + x.x2 * x.x2;
}

Vec3 patch_F_gradient(const Point3& x, double r, const EllipsePatch& patch) {
    const double r2 = r * r;
    const double w = 1.0 + r2 * x.x3;
    const double q = std::sqrt(w);
    const double u = x.x1 / q;
    const double du = u - patch.a;
    Vec3 g;
    g.d1 = r2 * x.x3 / patch.beta * patch.alpha * 2.0 * du / q;
    g.d2 = 2.0 * x.x2;
    g.d3 = r2 / patch.beta * ((patch.alpha * du * du - 1.0) - patch.alpha * r2 * x.x3 * du * u / w);
    return g;
}

double patch_f_implicit(double x1, double x2, const BoatSet& set) {
    // Always the bisection route, even when a closed form exists; agreement
    // between the two is a tested property, not an assumption.
    const double h = detail::boat_height_point(set.profile.patches.data(),
                                               set.profile.patches.size(), set.r, x1, x2,
                                               /*iters=*/64);
    if (!std::isfinite(h))
        throw InfeasibleColumn("patch_f_implicit: column misses the body");
    return h;
}

Vec2 grad_patch_f(double x1, double x2, const BoatSet& set) {
    const double h = patch_f_implicit(x1, x2, set);
    if (h < kGradHeightFloor)
        throw DegenerateInput("grad_patch_f: boundary height below 1e-8");

    const double u = x1 / std::sqrt(1.0 + set.r * set.r * h);
    const double v = x2 / (set.r * std::sqrt(h));

    // Active patch: smallest boundary residual among patches whose box holds
    // the point. On a seam either neighbour works; the gradients match there.
    const EllipsePatch* active = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : set.profile.patches) {
        const double box = std::max(std::max(p.u_lo - u, u - p.u_hi),
                                    std::max(p.v_lo - v, v - p.v_hi));
        if (box > 1e-7) continue;
        const double res = std::abs(p.ellipse_residual(u, v));
        if (res < best) {
            best = res;
            active = &p;
        }
    }
    if (!active) throw DegenerateInput("grad_patch_f: no active patch at the point");

    const Vec3 g = patch_F_gradient({x1, x2, h}, set.r, *active);
    if (std::abs(g.d3) < 1e-12)
        throw DegenerateInput("grad_patch_f: vanishing height derivative");
    return {g.d1 / std::abs(g.d3), g.d2 / std::abs(g.d3)};
}

double support_sigma(double s1, double s2, double t, double r, const EllipsePatch& patch) {
    return detail::support_sigma_point(s1, s2, t, r, patch);
}

}  // namespace hedgemap
