#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "obdiff/kernels.hpp"
#include "test_util.hpp"

using namespace obdiff;

namespace {

// Compare the AVX2 lane against the scalar reference on random inputs of
// awkward lengths (tails included).  Reductions may reassociate, so they get
// a relative tolerance; elementwise ops must agree exactly.
void check_pair(const kernels::Ops& a, const kernels::Ops& b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4},
                          std::size_t{7}, std::size_t{32}, std::size_t{101},
                          std::size_t{1024}}) {
        const auto x = testutil::random_vector(rng, n);
        const auto y = testutil::random_vector(rng, n);
        const auto z = testutil::random_vector(rng, n);
        std::vector<double> wa(n), wb(n);

        a.lincomb2(wa.data(), 1.7, x.data(), -0.3, y.data(), n);
        b.lincomb2(wb.data(), 1.7, x.data(), -0.3, y.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(wa[i] == doctest::Approx(wb[i]).epsilon(1e-15));

        a.lincomb3(wa.data(), 0.5, x.data(), 2.0, y.data(), -1.25, z.data(), n);
        b.lincomb3(wb.data(), 0.5, x.data(), 2.0, y.data(), -1.25, z.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(wa[i] == doctest::Approx(wb[i]).epsilon(1e-15));

        wa = x;
        wb = x;
        a.axpy(wa.data(), -0.75, y.data(), n);
        b.axpy(wb.data(), -0.75, y.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(wa[i] == doctest::Approx(wb[i]).epsilon(1e-15));

        wa = x;
        wb = x;
        a.fmadd(wa.data(), y.data(), z.data(), n);
        b.fmadd(wb.data(), y.data(), z.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(wa[i] == doctest::Approx(wb[i]).epsilon(1e-15));

        a.sub(wa.data(), x.data(), y.data(), n);
        b.sub(wb.data(), x.data(), y.data(), n);
        CHECK(wa == wb);

        a.min2(wa.data(), x.data(), y.data(), n);
        b.min2(wb.data(), x.data(), y.data(), n);
        CHECK(wa == wb);

        std::vector<std::uint8_t> ma(n), mb(n);
        a.less_mask(ma.data(), x.data(), y.data(), n);
        b.less_mask(mb.data(), x.data(), y.data(), n);
        CHECK(ma == mb);

        CHECK(a.dot(x.data(), y.data(), n) ==
              doctest::Approx(b.dot(x.data(), y.data(), n)).epsilon(1e-13));
        CHECK(a.linf(x.data(), n) == b.linf(x.data(), n));
        CHECK(a.linf_diff(x.data(), y.data(), n) == b.linf_diff(x.data(), y.data(), n));
        CHECK(a.l1_diff(x.data(), y.data(), n) ==
              doctest::Approx(b.l1_diff(x.data(), y.data(), n)).epsilon(1e-13));
        CHECK(a.sumsq_diff(x.data(), y.data(), n) ==
              doctest::Approx(b.sumsq_diff(x.data(), y.data(), n)).epsilon(1e-13));
        CHECK(a.min_diff(x.data(), y.data(), n) == b.min_diff(x.data(), y.data(), n));
    }
}

}  // namespace

TEST_CASE("scalar kernels match straightforward formulas") {
    const auto& k = kernels::scalar_ops();
    const std::vector<double> x = {1.0, -2.0, 3.0};
    const std::vector<double> y = {0.5, 0.5, -0.5};
    std::vector<double> w(3);
    k.lincomb2(w.data(), 2.0, x.data(), 1.0, y.data(), 3);
    CHECK(w == std::vector<double>{2.5, -3.5, 5.5});
    CHECK(k.dot(x.data(), y.data(), 3) == doctest::Approx(-2.0));
    CHECK(k.linf(x.data(), 3) == 3.0);
    CHECK(k.min_diff(x.data(), y.data(), 3) == doctest::Approx(-2.5));
    CHECK(k.min_diff(x.data(), y.data(), 0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (simd == nullptr) {
        MESSAGE("AVX2 not available on this host; scalar-only");
        return;
    }
    check_pair(kernels::scalar_ops(), *simd, 0x5eed);
}

TEST_CASE("active dispatch returns a usable implementation") {
    const auto& k = kernels::active();
    CHECK((kernels::active_name() == "scalar" || kernels::active_name() == "avx2"));
    std::vector<double> w(5, 0.0);
    const std::vector<double> ones(5, 1.0);
    k.axpy(w.data(), 2.0, ones.data(), 5);
    CHECK(w == std::vector<double>(5, 2.0));
}
