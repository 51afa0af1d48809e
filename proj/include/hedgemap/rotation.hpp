#pragma once

#include <array>
#include <cmath>

#include "hedgemap/point3.hpp"

namespace hedgemap {

// The fixed isometry used by both canonical models: a pi/4 turn around e3
// composed with a tilt that sends the axis (0,0,1) onto (1,1,1)/sqrt(3).
class Rotation {
public:
    static const Rotation& canonical();

    Point3 apply(const Point3& x) const {
        return {m_[0][0] * x.x1 + m_[0][1] * x.x2 + m_[0][2] * x.x3,
                m_[1][0] * x.x1 + m_[1][1] * x.x2 + m_[1][2] * x.x3,
                m_[2][0] * x.x1 + m_[2][1] * x.x2 + m_[2][2] * x.x3};
    }

    // Inverse = transpose.
    Point3 apply_inv(const Point3& x) const {
        return {m_[0][0] * x.x1 + m_[1][0] * x.x2 + m_[2][0] * x.x3,
                m_[0][1] * x.x1 + m_[1][1] * x.x2 + m_[2][1] * x.x3,
                m_[0][2] * x.x1 + m_[1][2] * x.x2 + m_[2][2] * x.x3};
    }

    double orthogonality_error() const;
    double determinant() const;

    const std::array<std::array<double, 3>, 3>& matrix() const { return m_; }

private:
    explicit Rotation(const std::array<std::array<double, 3>, 3>& m) : m_(m) {}

    std::array<std::array<double, 3>, 3> m_;
};

inline Point3 rotate(const Point3& x) { return Rotation::canonical().apply(x); }
inline Point3 rotate_inv(const Point3& x) { return Rotation::canonical().apply_inv(x); }

}  // namespace hedgemap
