#pragma once

// Per-point geometry primitives shared by the scalar API and the scalar
// reference kernels. The SIMD kernels mirror these expression trees exactly
// so that the lane variants stay bit-comparable.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "hedgemap/profile.hpp"

namespace hedgemap::detail {

inline double f_basic_point(double x1, double x2, double r) {
    const double s = x1 * x1 + x2 * x2 - 1.0;
    const double d = std::sqrt(s * s + 4.0 * x2 * x2);
    // s + d cancels for s < 0; the equivalent 4 x2^2/(d - s) keeps the flat
    // region exactly zero.
    const double num = s >= 0.0 ? s + d : 4.0 * x2 * x2 / (d - s);
    return num / (2.0 * r * r);
}

inline double f_basic_grad_sq_point(double x1, double x2, double r) {
    const double r2 = r * r;
    const double s = x1 * x1 + x2 * x2 - 1.0;
    const double d = std::sqrt(s * s + 4.0 * x2 * x2);
    const double g1 = x1 / r2 * (1.0 + s / d);
    const double g2 = x2 / r2 * (1.0 + (s + 2.0) / d);
    return g1 * g1 + g2 * g2;
}

inline double profile_slack_point(const EllipsePatch* p, std::size_t np, double u, double v) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < np; ++i) {
        const double du = u - p[i].a;
        double s = p[i].alpha * du * du + p[i].beta * v * v - 1.0;
        s = std::max(s, p[i].u_lo - u);
        s = std::max(s, u - p[i].u_hi);
        s = std::max(s, p[i].v_lo - v);
        s = std::max(s, v - p[i].v_hi);
        best = std::min(best, s);
    }
    return best;
}

// Slack of the degenerate bottom slice: x2 must vanish and x1 must lie in the
// footprint of some patch.
inline double bottom_slice_slack_point(const EllipsePatch* p, std::size_t np,
                                       double x1, double x2) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < np; ++i) {
        double lo, hi;
        p[i].footprint(lo, hi);
        best = std::min(best, std::max(lo - x1, x1 - hi));
    }
    return std::max(best, std::abs(x2));
}

inline double boat_slack_point(const EllipsePatch* p, std::size_t np, double r,
                               double x1, double x2, double x3) {
    const double cap = std::max(-x3, x3 - 1.0);
    if (x3 > 0.0) {
        const double u = x1 / std::sqrt(1.0 + r * r * x3);
        const double v = x2 / (r * std::sqrt(x3));
        return std::max(cap, profile_slack_point(p, np, u, v));
    }
    return std::max(cap, bottom_slice_slack_point(p, np, x1, x2));
}

// Minimal admissible height above a column. Relies on slices being nested in
// x3, which holds for every profile whose boat absorbs a vertical shift.
inline double boat_height_point(const EllipsePatch* p, std::size_t np, double r,
                                double x1, double x2, int iters,
                                double tol = kMembershipTol) {
    if (bottom_slice_slack_point(p, np, x1, x2) <= tol) return 0.0;
    if (boat_slack_point(p, np, r, x1, x2, 1.0) > tol)
        return std::numeric_limits<double>::infinity();
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (boat_slack_point(p, np, r, x1, x2, mid) <= tol)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

inline double support_sigma_point(double s1, double s2, double t, double r,
                                  const EllipsePatch& patch) {
    const double r2t = r * r * t;
    const double w = 1.0 + r2t;
    const double q = std::sqrt(s1 * s1 * w / patch.alpha + s2 * s2 * r2t / patch.beta);
    return q + patch.a * s1 * std::sqrt(w);
}

inline double patch_grad_sq_point(const EllipsePatch& patch, double r,
                                  double x1, double x2, double x3) {
    const double r2x3 = r * r * x3;
    const double w = 1.0 + r2x3;
    const double q = std::sqrt(w);
    const double u = x1 / q;
    const double du = u - patch.a;
    const double d1 = r2x3 / patch.beta * patch.alpha * 2.0 * du / q;
    const double d2 = 2.0 * x2;
    const double d3 = r * r / patch.beta *
                      ((patch.alpha * du * du - 1.0) - patch.alpha * r2x3 * du * u / w);
    return (d1 * d1 + d2 * d2) / (d3 * d3);
}

}  // namespace hedgemap::detail
