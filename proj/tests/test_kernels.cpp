#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "hedgemap/boat.hpp"
#include "hedgemap/kernels.hpp"
#include "hedgemap/rng.hpp"

using namespace hedgemap;

namespace {

// The SIMD lanes mirror the scalar expression trees; a few ulp of headroom
// covers the max/min NaN-ordering corners.
bool close(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= 4.0 * 2.220446049250313e-16 * std::max(1.0, std::abs(a));
}

struct Batch {
    std::vector<double> x1, x2, x3;
};

Batch random_batch(std::size_t n, Rng& rng, double span) {
    Batch b;
    b.x1.reserve(n);
    b.x2.reserve(n);
    b.x3.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.x1.push_back(rng.uniform(-span, span));
        b.x2.push_back(rng.uniform(-span, span));
        b.x3.push_back(rng.uniform(-0.1, 1.1));
    }
    return b;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
    if (!kernels::avx2_available()) {
        MESSAGE("avx2 not available on this machine; dispatch stays scalar");
        return;
    }
    const kernels::Ops& s = kernels::scalar_ops();
    const kernels::Ops& v = kernels::avx2_ops();
    Rng rng(101);
    const std::size_t n = 1003;  // deliberately not a multiple of the lane width
    const Batch b = random_batch(n, rng, 4.0);
    std::vector<double> out_s(n), out_v(n);

    SUBCASE("f_basic") {
        s.f_basic(b.x1.data(), b.x2.data(), out_s.data(), n, 3.0);
        v.f_basic(b.x1.data(), b.x2.data(), out_v.data(), n, 3.0);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i]));
    }

    SUBCASE("f_basic_grad_sq") {
        s.f_basic_grad_sq(b.x1.data(), b.x2.data(), out_s.data(), n, 3.0);
        v.f_basic_grad_sq(b.x1.data(), b.x2.data(), out_v.data(), n, 3.0);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i]));
    }

    SUBCASE("profile_slack and boat_slack") {
        for (const BoatProfile& profile : {disc_profile(), quarter_profile()}) {
            const auto* p = profile.patches.data();
            const std::size_t np = profile.patches.size();
            s.profile_slack(p, np, b.x1.data(), b.x2.data(), out_s.data(), n);
            v.profile_slack(p, np, b.x1.data(), b.x2.data(), out_v.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i]));

            s.boat_slack(p, np, 16.0, b.x1.data(), b.x2.data(), b.x3.data(),
                         out_s.data(), n);
            v.boat_slack(p, np, 16.0, b.x1.data(), b.x2.data(), b.x3.data(),
                         out_v.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i]));
        }
    }

    SUBCASE("boat_height") {
        for (const BoatProfile& profile : {disc_profile(), quarter_profile()}) {
            const auto* p = profile.patches.data();
            const std::size_t np = profile.patches.size();
            const double r = np == 1 ? 3.0 : 16.0;
            s.boat_height(p, np, r, b.x1.data(), b.x2.data(), out_s.data(), n, 52);
            v.boat_height(p, np, r, b.x1.data(), b.x2.data(), out_v.data(), n, 52);
            for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i]));
        }
    }

    SUBCASE("support_sigma and patch_grad_sq") {
        for (const auto& patch : quarter_profile().patches) {
            std::vector<double> t(n);
            for (auto& ti : t) ti = rng.uniform(0.0, 1.0);
            s.support_sigma(&patch, 16.0, b.x1.data(), b.x2.data(), t.data(),
                            out_s.data(), n);
            v.support_sigma(&patch, 16.0, b.x1.data(), b.x2.data(), t.data(),
                            out_v.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i]));

            std::vector<double> x3(n);
            for (auto& ti : x3) ti = rng.uniform(1e-6, 1.0);
            s.patch_grad_sq(&patch, 16.0, b.x1.data(), b.x2.data(), x3.data(),
                            out_s.data(), n);
            v.patch_grad_sq(&patch, 16.0, b.x1.data(), b.x2.data(), x3.data(),
                            out_v.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(close(out_s[i], out_v[i]));
        }
    }
}

TEST_CASE("dispatch override") {
    CHECK(kernels::set_active_ops("scalar"));
    CHECK(std::string(kernels::active_ops().name) == "scalar");
    if (kernels::avx2_available()) {
        CHECK(kernels::set_active_ops("avx2"));
        CHECK(std::string(kernels::active_ops().name) == "avx2");
    } else {
        CHECK_FALSE(kernels::set_active_ops("avx2"));
    }
    CHECK_FALSE(kernels::set_active_ops("mmx"));
    kernels::set_active_ops("scalar");
    kernels::set_active_ops(kernels::avx2_available() ? "avx2" : "scalar");
}

TEST_CASE("batch kernels match the single-point API") {
    const kernels::Ops& ops = kernels::active_ops();
    const BoatProfile profile = quarter_profile();
    Rng rng(103);
    const std::size_t n = 257;
    const Batch b = random_batch(n, rng, 3.0);
    std::vector<double> out(n);
    ops.boat_height(profile.patches.data(), profile.patches.size(), 16.0, b.x1.data(),
                    b.x2.data(), out.data(), n, 64);
    const BoatSet boat = twisted_boat(16.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = boat.height(b.x1[i], b.x2[i], 64);
        if (std::isinf(h))
            CHECK(std::isinf(out[i]));
        else
            CHECK(out[i] == doctest::Approx(h).epsilon(1e-12));
    }
}
