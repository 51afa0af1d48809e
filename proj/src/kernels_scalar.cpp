// Scalar reference kernels. These define the semantics; the SIMD variants
// must match them lane for lane.

#include "hedgemap/detail/geometry_core.hpp"
#include "hedgemap/kernels.hpp"

namespace hedgemap::kernels {

namespace {

void f_basic_s(const double* x1, const double* x2, double* out, std::size_t n, double r) {
    for (std::size_t i = 0; i < n; ++i) out[i] = detail::f_basic_point(x1[i], x2[i], r);
}

void f_basic_grad_sq_s(const double* x1, const double* x2, double* out, std::size_t n,
                       double r) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = detail::f_basic_grad_sq_point(x1[i], x2[i], r);
}

void profile_slack_s(const EllipsePatch* p, std::size_t np, const double* u,
                     const double* v, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = detail::profile_slack_point(p, np, u[i], v[i]);
}

void boat_slack_s(const EllipsePatch* p, std::size_t np, double r, const double* x1,
                  const double* x2, const double* x3, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = detail::boat_slack_point(p, np, r, x1[i], x2[i], x3[i]);
}

void boat_height_s(const EllipsePatch* p, std::size_t np, double r, const double* x1,
                   const double* x2, double* out, std::size_t n, int iters) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = detail::boat_height_point(p, np, r, x1[i], x2[i], iters);
}

void support_sigma_s(const EllipsePatch* p, double r, const double* s1, const double* s2,
                     const double* t, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = detail::support_sigma_point(s1[i], s2[i], t[i], r, *p);
}

void patch_grad_sq_s(const EllipsePatch* p, double r, const double* x1, const double* x2,
                     const double* x3, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = detail::patch_grad_sq_point(*p, r, x1[i], x2[i], x3[i]);
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",        f_basic_s,       f_basic_grad_sq_s, profile_slack_s,
        boat_slack_s,    boat_height_s,   support_sigma_s,   patch_grad_sq_s,
    };
    return ops;
}

}  // namespace hedgemap::kernels
