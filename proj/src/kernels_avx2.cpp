// AVX2 variants of the batch kernels, 4 doubles per lane group. Expression
// trees mirror the scalar reference so both implementations agree to the ulp;
// tails shorter than a vector fall back to the scalar primitives.

#include "hedgemap/kernels.hpp"

#ifdef __AVX2__

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "hedgemap/detail/geometry_core.hpp"

namespace hedgemap::kernels {

namespace {

const __m256d kOne = _mm256_set1_pd(1.0);
const __m256d kHalf = _mm256_set1_pd(0.5);

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void f_basic_v(const double* x1, const double* x2, double* out, std::size_t n, double r) {
    const __m256d denom = _mm256_set1_pd(2.0 * r * r);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x1 + i);
        const __m256d b = _mm256_loadu_pd(x2 + i);
        const __m256d s = _mm256_sub_pd(
            _mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)), kOne);
        const __m256d four_b2 = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), b), b);
        const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(s, s), four_b2));
        const __m256d plus = _mm256_add_pd(s, d);
        const __m256d safe = _mm256_div_pd(four_b2, _mm256_sub_pd(d, s));
        const __m256d nonneg = _mm256_cmp_pd(s, _mm256_setzero_pd(), _CMP_GE_OQ);
        const __m256d num = _mm256_blendv_pd(safe, plus, nonneg);
        _mm256_storeu_pd(out + i, _mm256_div_pd(num, denom));
    }
    for (; i < n; ++i) out[i] = detail::f_basic_point(x1[i], x2[i], r);
}

void f_basic_grad_sq_v(const double* x1, const double* x2, double* out, std::size_t n,
                       double r) {
    const __m256d r2 = _mm256_set1_pd(r * r);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x1 + i);
        const __m256d b = _mm256_loadu_pd(x2 + i);
        const __m256d s = _mm256_sub_pd(
            _mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)), kOne);
        const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_mul_pd(s, s),
            _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), b), b)));
        const __m256d g1 = _mm256_mul_pd(_mm256_div_pd(a, r2),
                                         _mm256_add_pd(kOne, _mm256_div_pd(s, d)));
        const __m256d g2 = _mm256_mul_pd(
            _mm256_div_pd(b, r2),
            _mm256_add_pd(kOne, _mm256_div_pd(_mm256_add_pd(s, two), d)));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(g1, g1),
                                                _mm256_mul_pd(g2, g2)));
    }
    for (; i < n; ++i) out[i] = detail::f_basic_grad_sq_point(x1[i], x2[i], r);
}

inline __m256d profile_slack_vec(const EllipsePatch* p, std::size_t np, __m256d u,
                                 __m256d v) {
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < np; ++k) {
        const __m256d du = _mm256_sub_pd(u, _mm256_set1_pd(p[k].a));
        __m256d s = _mm256_sub_pd(
            _mm256_add_pd(
                _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(p[k].alpha), du), du),
                _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(p[k].beta), v), v)),
            kOne);
        s = _mm256_max_pd(s, _mm256_sub_pd(_mm256_set1_pd(p[k].u_lo), u));
        s = _mm256_max_pd(s, _mm256_sub_pd(u, _mm256_set1_pd(p[k].u_hi)));
        s = _mm256_max_pd(s, _mm256_sub_pd(_mm256_set1_pd(p[k].v_lo), v));
        s = _mm256_max_pd(s, _mm256_sub_pd(v, _mm256_set1_pd(p[k].v_hi)));
        best = _mm256_min_pd(best, s);
    }
    return best;
}

void profile_slack_v(const EllipsePatch* p, std::size_t np, const double* u,
                     const double* v, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, profile_slack_vec(p, np, _mm256_loadu_pd(u + i),
                                                    _mm256_loadu_pd(v + i)));
    }
    for (; i < n; ++i) out[i] = detail::profile_slack_point(p, np, u[i], v[i]);
}

inline __m256d bottom_slice_slack_vec(const EllipsePatch* p, std::size_t np, __m256d x1,
                                      __m256d x2) {
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < np; ++k) {
        double lo, hi;
        p[k].footprint(lo, hi);
        const __m256d s = _mm256_max_pd(_mm256_sub_pd(_mm256_set1_pd(lo), x1),
                                        _mm256_sub_pd(x1, _mm256_set1_pd(hi)));
        best = _mm256_min_pd(best, s);
    }
    return _mm256_max_pd(best, abs_pd(x2));
}

// Slack of the positive-height branch only (x3 > 0 lanes).
inline __m256d slack_above_vec(const EllipsePatch* p, std::size_t np, double r,
                               __m256d x1, __m256d x2, __m256d x3) {
    const __m256d cap = _mm256_max_pd(_mm256_sub_pd(_mm256_setzero_pd(), x3),
                                      _mm256_sub_pd(x3, kOne));
    const __m256d r2 = _mm256_set1_pd(r * r);
    const __m256d u = _mm256_div_pd(
        x1, _mm256_sqrt_pd(_mm256_add_pd(kOne, _mm256_mul_pd(r2, x3))));
    const __m256d v = _mm256_div_pd(
        x2, _mm256_mul_pd(_mm256_set1_pd(r), _mm256_sqrt_pd(x3)));
    return _mm256_max_pd(cap, profile_slack_vec(p, np, u, v));
}

inline __m256d boat_slack_vec(const EllipsePatch* p, std::size_t np, double r,
                              __m256d x1, __m256d x2, __m256d x3) {
    const __m256d cap = _mm256_max_pd(_mm256_sub_pd(_mm256_setzero_pd(), x3),
                                      _mm256_sub_pd(x3, kOne));
    const __m256d above = slack_above_vec(p, np, r, x1, x2, x3);
    const __m256d bottom = _mm256_max_pd(cap, bottom_slice_slack_vec(p, np, x1, x2));
    const __m256d positive = _mm256_cmp_pd(x3, _mm256_setzero_pd(), _CMP_GT_OQ);
    return _mm256_blendv_pd(bottom, above, positive);
}

void boat_slack_v(const EllipsePatch* p, std::size_t np, double r, const double* x1,
                  const double* x2, const double* x3, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i,
                         boat_slack_vec(p, np, r, _mm256_loadu_pd(x1 + i),
                                        _mm256_loadu_pd(x2 + i), _mm256_loadu_pd(x3 + i)));
    }
    for (; i < n; ++i)
        out[i] = detail::boat_slack_point(p, np, r, x1[i], x2[i], x3[i]);
}

void boat_height_v(const EllipsePatch* p, std::size_t np, double r, const double* x1,
                   const double* x2, double* out, std::size_t n, int iters) {
    const __m256d tol = _mm256_set1_pd(kMembershipTol);
    const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x1 + i);
        const __m256d b = _mm256_loadu_pd(x2 + i);
        const __m256d bottom_ok =
            _mm256_cmp_pd(bottom_slice_slack_vec(p, np, a, b), tol, _CMP_LE_OQ);
        const __m256d top_ok =
            _mm256_cmp_pd(slack_above_vec(p, np, r, a, b, kOne), tol, _CMP_LE_OQ);
        __m256d lo = _mm256_setzero_pd();
        __m256d hi = kOne;
        for (int k = 0; k < iters; ++k) {
            const __m256d mid = _mm256_mul_pd(kHalf, _mm256_add_pd(lo, hi));
            const __m256d inside =
                _mm256_cmp_pd(slack_above_vec(p, np, r, a, b, mid), tol, _CMP_LE_OQ);
            hi = _mm256_blendv_pd(hi, mid, inside);
            lo = _mm256_blendv_pd(mid, lo, inside);
        }
        __m256d h = _mm256_blendv_pd(inf, hi, top_ok);
        h = _mm256_blendv_pd(h, _mm256_setzero_pd(), bottom_ok);
        _mm256_storeu_pd(out + i, h);
    }
    for (; i < n; ++i)
        out[i] = detail::boat_height_point(p, np, r, x1[i], x2[i], iters);
}

void support_sigma_v(const EllipsePatch* p, double r, const double* s1, const double* s2,
                     const double* t, double* out, std::size_t n) {
    const __m256d r2 = _mm256_set1_pd(r * r);
    const __m256d alpha = _mm256_set1_pd(p->alpha);
    const __m256d beta = _mm256_set1_pd(p->beta);
    const __m256d a = _mm256_set1_pd(p->a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d sa = _mm256_loadu_pd(s1 + i);
        const __m256d sb = _mm256_loadu_pd(s2 + i);
        const __m256d tt = _mm256_loadu_pd(t + i);
        const __m256d r2t = _mm256_mul_pd(r2, tt);
        const __m256d w = _mm256_add_pd(kOne, r2t);
        const __m256d q = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(sa, sa), w), alpha),
            _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(sb, sb), r2t), beta)));
        const __m256d lin = _mm256_mul_pd(_mm256_mul_pd(a, sa), _mm256_sqrt_pd(w));
        _mm256_storeu_pd(out + i, _mm256_add_pd(q, lin));
    }
    for (; i < n; ++i)
        out[i] = detail::support_sigma_point(s1[i], s2[i], t[i], r, *p);
}

void patch_grad_sq_v(const EllipsePatch* p, double r, const double* x1, const double* x2,
                     const double* x3, double* out, std::size_t n) {
    const __m256d r2 = _mm256_set1_pd(r * r);
    const __m256d alpha = _mm256_set1_pd(p->alpha);
    const __m256d beta = _mm256_set1_pd(p->beta);
    const __m256d a = _mm256_set1_pd(p->a);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xa = _mm256_loadu_pd(x1 + i);
        const __m256d xb = _mm256_loadu_pd(x2 + i);
        const __m256d xc = _mm256_loadu_pd(x3 + i);
        const __m256d r2x3 = _mm256_mul_pd(r2, xc);
        const __m256d w = _mm256_add_pd(kOne, r2x3);
        const __m256d q = _mm256_sqrt_pd(w);
        const __m256d u = _mm256_div_pd(xa, q);
        const __m256d du = _mm256_sub_pd(u, a);
        const __m256d d1 = _mm256_div_pd(
            _mm256_mul_pd(
                _mm256_mul_pd(_mm256_mul_pd(_mm256_div_pd(r2x3, beta), alpha), two), du),
            q);
        const __m256d d2 = _mm256_mul_pd(two, xb);
        const __m256d inner = _mm256_sub_pd(
            _mm256_sub_pd(_mm256_mul_pd(_mm256_mul_pd(alpha, du), du), kOne),
            _mm256_div_pd(
                _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(alpha, r2x3), du), u), w));
        const __m256d d3 = _mm256_mul_pd(_mm256_div_pd(r2, beta), inner);
        _mm256_storeu_pd(
            out + i,
            _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(d1, d1), _mm256_mul_pd(d2, d2)),
                          _mm256_mul_pd(d3, d3)));
    }
    for (; i < n; ++i)
        out[i] = detail::patch_grad_sq_point(*p, r, x1[i], x2[i], x3[i]);
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops = {
        "avx2",        f_basic_v,       f_basic_grad_sq_v, profile_slack_v,
        boat_slack_v,  boat_height_v,   support_sigma_v,   patch_grad_sq_v,
    };
    return ops;
}

}  // namespace hedgemap::kernels

#else  // !__AVX2__

namespace hedgemap::kernels {

const Ops& avx2_ops() { return scalar_ops(); }

}  // namespace hedgemap::kernels

#endif
