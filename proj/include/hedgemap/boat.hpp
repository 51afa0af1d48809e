#pragma once

#include <limits>

#include "hedgemap/errors.hpp"
#include "hedgemap/point3.hpp"
#include "hedgemap/profile.hpp"

namespace hedgemap {

struct Vec2 {
    double d1 = 0.0, d2 = 0.0;
};

struct Vec3 {
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

// The boat body: horizontal slices are copies of a 2D profile, stretched by
// sqrt(1 + r^2 x3) in u and r sqrt(x3) in v, for x3 in [0, 1]. The bottom
// slice degenerates to a segment on the x1 axis.
struct BoatSet {
    double r = 3.0;
    BoatProfile profile;
    bool disc_closed_form = false;  // use the explicit boundary function

    // <= 0 inside (up to tolerance), > 0 outside.
    double member_slack(const Point3& x) const;

    bool contains(const Point3& x, double tol = kMembershipTol) const {
        return member_slack(x) <= tol;
    }

    // Minimal admissible height above the (x1, x2) column; +inf if the column
    // misses the body. `iters` controls bisection depth on the non-disc path.
    double height(double x1, double x2, int iters = 60) const;
};

BoatSet basic_boat(double r = 3.0);
BoatSet twisted_boat(double r = 16.0);

// Explicit boundary function of the disc-profile boat.
double f_basic(double x1, double x2, double r);

// Membership in the disc-profile boat of shape r.
bool basic_membership(const Point3& x, double r, double tol = kMembershipTol);

// Analytic gradient of f_basic. Throws DegenerateInput when the boundary
// height is below 1e-8 (the formulas divide by quantities vanishing there).
Vec2 grad_f_basic(double x1, double x2, double r);

// Defining function of one stretched ellipse piece: the patch inequality at
// height x3, cleared of denominators. Negative inside.
double patch_F(const Point3& x, double r, const EllipsePatch& patch);

Vec3 patch_F_gradient(const Point3& x, double r, const EllipsePatch& patch);

// Minimal boundary height by bisection on the membership predicate,
// independent of any closed form. Throws InfeasibleColumn.
double patch_f_implicit(double x1, double x2, const BoatSet& set);

// Gradient of the implicit boundary function via the quotient of the active
// patch derivatives. Throws DegenerateInput when the height is below 1e-8.
Vec2 grad_patch_f(double x1, double x2, const BoatSet& set);

// Closed-form support function of the height-t sublevel slice of one patch
// extended to its full ellipse.
double support_sigma(double s1, double s2, double t, double r, const EllipsePatch& patch);

struct IceCreamCone {
    double R = 1.0;

    double slack(const Point3& x) const {
        return std::max(-x.x3, x.x1 * x.x1 + x.x2 * x.x2 - R * R * x.x3 * x.x3);
    }

    bool contains(const Point3& x, double tol = kMembershipTol) const {
        return slack(x) <= tol;
    }
};

}  // namespace hedgemap
