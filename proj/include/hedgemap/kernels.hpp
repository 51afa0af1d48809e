#pragma once

// Batch geometry kernels. Every operation has a scalar reference
// implementation and, on machines that support it, an AVX2 variant selected
// once at startup. The variants are equivalence-tested against each other;
// HEDGEMAP_KERNELS=scalar|avx2 overrides the automatic choice.

#include <cstddef>

#include "hedgemap/profile.hpp"

namespace hedgemap::kernels {

struct Ops {
    const char* name;

    void (*f_basic)(const double* x1, const double* x2, double* out, std::size_t n,
                    double r);
    void (*f_basic_grad_sq)(const double* x1, const double* x2, double* out,
                            std::size_t n, double r);
    void (*profile_slack)(const EllipsePatch* p, std::size_t np, const double* u,
                          const double* v, double* out, std::size_t n);
    void (*boat_slack)(const EllipsePatch* p, std::size_t np, double r,
                       const double* x1, const double* x2, const double* x3,
                       double* out, std::size_t n);
    void (*boat_height)(const EllipsePatch* p, std::size_t np, double r,
                        const double* x1, const double* x2, double* out,
                        std::size_t n, int iters);
    void (*support_sigma)(const EllipsePatch* p, double r, const double* s1,
                          const double* s2, const double* t, double* out,
                          std::size_t n);
    void (*patch_grad_sq)(const EllipsePatch* p, double r, const double* x1,
                          const double* x2, const double* x3, double* out,
                          std::size_t n);
};

const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops();  // valid only when avx2_available()

// Active implementation; resolved once from CPU features and the environment.
const Ops& active_ops();

// Test hook. Returns false if the named implementation cannot run here.
bool set_active_ops(const char* name);

}  // namespace hedgemap::kernels
