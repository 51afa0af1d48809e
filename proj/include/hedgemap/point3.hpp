#pragma once

#include <cmath>

namespace hedgemap {

struct Point3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

inline Point3 operator+(const Point3& a, const Point3& b) {
    return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
}

inline Point3 operator-(const Point3& a, const Point3& b) {
    return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
}

inline Point3 operator*(double c, const Point3& a) {
    return {c * a.x1, c * a.x2, c * a.x3};
}

inline Point3 operator-(const Point3& a) {
    return {-a.x1, -a.x2, -a.x3};
}

inline double dot(const Point3& a, const Point3& b) {
    return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

inline double norm2(const Point3& a) { return dot(a, a); }

inline double norm(const Point3& a) { return std::sqrt(norm2(a)); }

inline double norm_inf(const Point3& a) {
    return std::max(std::abs(a.x1), std::max(std::abs(a.x2), std::abs(a.x3)));
}

inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }

inline bool is_finite(const Point3& a) {
    return std::isfinite(a.x1) && std::isfinite(a.x2) && std::isfinite(a.x3);
}

}  // namespace hedgemap
