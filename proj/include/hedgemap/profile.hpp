#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hedgemap {

inline constexpr double kMembershipTol = 1e-9;

// One ellipse piece of a 2D cross-section body, restricted to a (u, v) box.
// The full profile is the union of its patches.
struct EllipsePatch {
    double a = 0.0;       // horizontal center offset
    double alpha = 1.0;   // u curvature, > 0
    double beta = 1.0;    // v curvature, > 0
    double u_lo = -1.0, u_hi = 1.0;
    double v_lo = -1.0, v_hi = 1.0;

    double ellipse_residual(double u, double v) const {
        const double du = u - a;
        return alpha * du * du + beta * v * v - 1.0;
    }

    // <= 0 inside the patch, > 0 outside; combines the ellipse and the box.
    double slack(double u, double v) const {
        double s = ellipse_residual(u, v);
        s = std::max(s, u_lo - u);
        s = std::max(s, u - u_hi);
        s = std::max(s, v_lo - v);
        s = std::max(s, v - v_hi);
        return s;
    }

    // u-extent of the patch when the v coordinate is free to collapse to the
    // value nearest 0 that the box allows (the footprint at the bottom slice).
    void footprint(double& lo, double& hi) const {
        const double v0 = std::clamp(0.0, v_lo, v_hi);
        const double room = 1.0 - beta * v0 * v0;
        if (room < 0.0) {
            lo = 1.0;
            hi = -1.0;  // empty
            return;
        }
        const double w = std::sqrt(room / alpha);
        lo = std::max(u_lo, a - w);
        hi = std::min(u_hi, a + w);
    }

    // The concavity of the sublevel support function is guaranteed only for
    // patches whose ellipse has 0 in its interior.
    bool center_interior() const { return std::abs(a) * std::sqrt(alpha) < 1.0; }
};

struct BoatProfile {
    std::vector<EllipsePatch> patches;

    double slack(double u, double v) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : patches) best = std::min(best, p.slack(u, v));
        return best;
    }

    bool contains(double u, double v, double tol = kMembershipTol) const {
        return slack(u, v) <= tol;
    }
};

// Unit disc: the cross-section of the plain boat.
BoatProfile disc_profile();

// Union of four quarter ellipses with mismatched curvatures left/right of the
// +-1/2 seams; convex as a set, but its slices twist as they scale.
BoatProfile quarter_profile();

}  // namespace hedgemap
