#include "hedgemap/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace hedgemap {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Boundary radius of the profile along a ray from the origin (interior for
// the canonical profiles), by bisection on membership.
double boundary_radius(const BoatProfile& profile, double ang) {
    const double cu = std::cos(ang), sv = std::sin(ang);
    double hi = 1.0;
    for (const auto& p : profile.patches) {
        hi = std::max(hi, std::abs(p.a) + 1.0 / std::sqrt(p.alpha));
        hi = std::max(hi, 1.0 / std::sqrt(p.beta));
    }
    hi += 1.0;
    double lo = 0.0;
    for (int i = 0; i < 48; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (profile.contains(mid * cu, mid * sv))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

void put(std::ostream& os, const char* fmt, double a, double b, double c) {
    char line[128];
    std::snprintf(line, sizeof(line), fmt, a, b, c);
    os << line;
}

}  // namespace

void write_boat_mesh_csv(std::ostream& os, const BoatSet& set, int resolution) {
    const int rings = resolution;
    const int around = resolution;
    os << "kind,a,b,c\n";

    std::vector<double> radius(around);
    for (int k = 0; k < around; ++k)
        radius[k] = boundary_radius(set.profile, kTwoPi * k / around);

    for (int j = 0; j <= rings; ++j) {
        const double t = static_cast<double>(j) / rings;
        const double su = std::sqrt(1.0 + set.r * set.r * t);
        const double sv = set.r * std::sqrt(t);
        for (int k = 0; k < around; ++k) {
            const double ang = kTwoPi * k / around;
            const double u = radius[k] * std::cos(ang);
            const double v = radius[k] * std::sin(ang);
            put(os, "v,%.17g,%.17g,%.17g\n", u * su, v * sv, t);
        }
    }
    for (int j = 0; j < rings; ++j) {
        for (int k = 0; k < around; ++k) {
            const int k1 = (k + 1) % around;
            const int a = j * around + k;
            const int b = j * around + k1;
            const int c = (j + 1) * around + k;
            const int d = (j + 1) * around + k1;
            char line[96];
            std::snprintf(line, sizeof(line), "f,%d,%d,%d\nf,%d,%d,%d\n", a, b, c, b, d,
                          c);
            os << line;
        }
    }
}

void write_profile_outline_csv(std::ostream& os, const BoatProfile& profile,
                               int resolution) {
    os << "u,v,patch\n";
    for (std::size_t pi = 0; pi < profile.patches.size(); ++pi) {
        const EllipsePatch& p = profile.patches[pi];
        // Arc of the patch ellipse clipped to the patch box, sampled by angle;
        // half-open so seam vertices belong to exactly one patch.
        int emitted = 0;
        for (int k = 0; k < 4 * resolution && emitted < resolution; ++k) {
            const double ang = kTwoPi * k / (4.0 * resolution);
            const double u = p.a + std::cos(ang) / std::sqrt(p.alpha);
            const double v = std::sin(ang) / std::sqrt(p.beta);
            if (u < p.u_lo - 1e-12 || u > p.u_hi + 1e-12 || v < p.v_lo - 1e-12 ||
                v > p.v_hi + 1e-12)
                continue;
            char line[96];
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%zu\n", u, v, pi);
            os << line;
            ++emitted;
        }
    }
}

}  // namespace hedgemap
