#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gabor/errors.hpp"
#include "gabor/stability.hpp"
#include "gabor/rng.hpp"

using namespace gabor;

namespace {

bool same_certificate_numbers(const Certificate& x, const Certificate& y) {
    if (x.condition_lhs != y.condition_lhs) return false;
    if (x.condition_rhs != y.condition_rhs) return false;
    if (x.satisfied != y.satisfied) return false;
    if (x.riesz != y.riesz) return false;
    if (x.factors.has_value() != y.factors.has_value()) return false;
    if (x.factors) {
        if (x.factors->lower != y.factors->lower) return false;
        if (x.factors->upper != y.factors->upper) return false;
    }
    if (x.absolute.has_value() != y.absolute.has_value()) return false;
    if (x.absolute) {
        if (x.absolute->lower != y.absolute->lower) return false;
        if (x.absolute->upper != y.absolute->upper) return false;
    }
    return true;
}

} // namespace

TEST_CASE("jitter profile bookkeeping") {
    JitterProfile j;
    j.set_row(0, 0.1);
    j.set_row(3, 0.2);
    CHECK(j.total() == doctest::Approx(0.3));
    j.set_row(3, 0.0); // erases
    CHECK(j.total() == doctest::Approx(0.1));
    CHECK(j.rows().size() == 1);
    CHECK_THROWS_AS(j.set_row(1, 1.0), domain_error);
    CHECK_THROWS_AS(j.set_row(1, -0.1), domain_error);
    const auto spread = JitterProfile::from_total(2.0);
    CHECK(spread.total() == doctest::Approx(2.0).epsilon(1e-15));
    for (const auto& [n, L] : spread.rows()) CHECK(L < 1.0);
}

TEST_CASE("frame-perturbation step") {
    const FrameBounds base{1.0, 1.0, BoundsKind::exact};
    const auto zero = christensen_combine(base, 0.0);
    CHECK(zero.satisfied);
    CHECK(zero.factors->lower == 1.0);
    CHECK(zero.factors->upper == 1.0);
    CHECK(zero.absolute->lower == 1.0);
    CHECK(zero.absolute->upper == 1.0);

    const auto quarter = christensen_combine(base, 0.25);
    CHECK(quarter.factors->lower == doctest::Approx(0.25));
    CHECK(quarter.factors->upper == doctest::Approx(2.25));

    const auto fail = christensen_combine({1.0, 2.0, BoundsKind::exact}, 2.0);
    CHECK_FALSE(fail.satisfied);
    CHECK_FALSE(fail.factors.has_value());
    CHECK_FALSE(fail.absolute.has_value());
    CHECK_THROWS_AS(christensen_combine(base, -1.0), domain_error);
}

TEST_CASE("rect certificates") {
    const LatticeParams unit{1.0, 1.0};
    const auto c = certify_rect(unit, JitterProfile::single_row(1.0 / 16.0));
    CHECK(c.satisfied);
    CHECK(c.riesz);
    CHECK(c.condition_lhs == doctest::Approx(0.25));
    CHECK(c.condition_rhs == 1.0);
    CHECK(c.factors->lower == doctest::Approx(0.25));
    CHECK(c.factors->upper == doctest::Approx(2.25));
    CHECK(c.absolute->lower == doctest::Approx(0.25));
    CHECK(c.absolute->upper == doctest::Approx(2.25));

    const auto zero = certify_rect(unit, JitterProfile{});
    CHECK(zero.factors->lower == 1.0);
    CHECK(zero.factors->upper == 1.0);
    CHECK(zero.riesz);

    const auto big = certify_rect(unit, JitterProfile::single_row(0.3));
    CHECK_FALSE(big.satisfied); // 4 * 0.3 = 1.2 >= 1
    CHECK_FALSE(big.riesz);

    CHECK_THROWS_AS(certify_rect({1.5, 0.5}, JitterProfile{}), domain_error);
    CHECK_THROWS_AS(certify_rect({0.5, 2.5}, JitterProfile{}), domain_error);
}

TEST_CASE("bspline certificates") {
    const LatticeParams unit{1.0, 1.0};
    const auto c = certify_bspline(2, unit, JitterProfile::single_row(0.01));
    CHECK(c.satisfied);
    CHECK(c.condition_lhs == doctest::Approx(0.04));
    CHECK(c.condition_rhs == doctest::Approx(0.25));
    CHECK(c.factors->lower == doctest::Approx(0.36)); // (1 - 2*0.1/0.5)^2
    CHECK(c.riesz);

    // boundary case of the strict inequality: 4L = rect^(2)(1/2)^2 exactly
    const auto edge = certify_bspline(2, unit, JitterProfile::single_row(1.0 / 16.0));
    CHECK(edge.condition_lhs == edge.condition_rhs);
    CHECK_FALSE(edge.satisfied);

    CHECK_THROWS_AS(certify_bspline(2, {2.5, 0.3}, JitterProfile{}), domain_error);
}

TEST_CASE("perturbation-bound constants") {
    CHECK(perturbation_norm_bound(2.0, 0.2) == doctest::Approx(0.8));  // gap case z = 0
    CHECK(perturbation_norm_bound(1.0, 0.5) == doctest::Approx(2.0));  // z = 1
    CHECK(perturbation_norm_bound(1.0, 0.0) == 0.0);
    CHECK(perturbation_norm_bound(1.0, 1.7) == doctest::Approx(2.0 * 3.0 * 1.7)); // z = 2
    CHECK_THROWS_AS(perturbation_norm_bound(0.0, 0.1), domain_error);
    CHECK_THROWS_AS(perturbation_norm_bound(1.0, -0.1), domain_error);
}

TEST_CASE("frequency jitter adjustment") {
    const FrameBounds b{1.0, 1.0, BoundsKind::exact};
    const auto id = freq_jitter_adjust(b, 0.0);
    CHECK(id.lower == 1.0);
    CHECK(id.upper == 1.0);

    const auto e = freq_jitter_adjust(b, 0.125);
    const double c = std::cos(M_PI / 8.0), s = std::sin(M_PI / 8.0);
    CHECK(e.lower == doctest::Approx(c - s).epsilon(1e-15));
    CHECK(e.upper == doctest::Approx(2.0 - c + s).epsilon(1e-15));
    CHECK(e.lower == doctest::Approx(0.5412).epsilon(1e-4));
    CHECK(e.upper == doctest::Approx(1.4588).epsilon(1e-4));

    const auto scaled = freq_jitter_adjust({2.0, 3.0, BoundsKind::exact}, 0.125);
    CHECK(scaled.lower == doctest::Approx(2.0 * e.lower));
    CHECK(scaled.upper == doctest::Approx(3.0 * e.upper));

    CHECK_THROWS_AS(freq_jitter_adjust(b, 0.25), domain_error);
    CHECK_THROWS_AS(freq_jitter_adjust(b, -0.01), domain_error);
}

TEST_CASE("combined time + frequency certificates") {
    const LatticeParams unit{1.0, 1.0};
    JitterProfile j = JitterProfile::single_row(1.0 / 32.0);
    j.freq_sup = 0.125;
    const auto c = certify_combined(1, unit, j);
    CHECK(c.satisfied);
    const double gamma = std::cos(M_PI / 8.0) - std::sin(M_PI / 8.0);
    CHECK(c.condition_lhs == doctest::Approx(0.125));
    CHECK(c.condition_rhs == doctest::Approx(gamma));
    const double r = 2.0 * std::sqrt((1.0 / 32.0) / gamma);
    CHECK(c.factors->lower == doctest::Approx((1.0 - r) * (1.0 - r)).epsilon(1e-14));
    CHECK(c.factors->lower == doctest::Approx(0.2699).epsilon(1e-3));
    CHECK_FALSE(c.riesz); // frequency jitter forfeits the riesz claim

    JitterProfile heavy = JitterProfile::single_row(0.2);
    heavy.freq_sup = 0.12;
    const auto fail = certify_combined(1, unit, heavy);
    CHECK_FALSE(fail.satisfied); // 0.8 > 0.5621
    CHECK(fail.condition_rhs == doctest::Approx(0.5621).epsilon(1e-3));
}

TEST_CASE("sinc duality mirrors the combined certificate") {
    Rng rng(71);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.2, 1.0);
        const double b = rng.uniform(0.2, 1.0 / a);
        const int p = 1 + static_cast<int>(rng.below(4));
        if (p >= 2 && a >= p) continue;
        JitterProfile j;
        const int rows = 1 + static_cast<int>(rng.below(3));
        for (int r = 0; r < rows; ++r) j.set_row(r - 1, rng.uniform(0.0, 0.2));
        j.freq_sup = rng.uniform(0.0, 0.24);
        const auto lhs = certify_combined(p, {a, b}, j);
        const auto rhs = certify_sinc(p, {a, b}, j);
        CHECK(same_certificate_numbers(lhs, rhs));
    }
}

TEST_CASE("sobolev certificates: cosine window worked example") {
    const auto w = cosine_window(4.0, 1.0);
    const auto c = certify_sobolev(w, {1.0, 1.0}, JitterProfile::single_row(0.1));
    // C^2 = b a^2 ||psi'||^2 [p/a + L] L^2 = (pi^2/8) * 4 * 0.01
    const double csq = (M_PI * M_PI / 8.0) * 4.0 * 0.01;
    CHECK(c.condition_lhs == doctest::Approx(csq).epsilon(1e-14));
    CHECK(c.condition_lhs == doctest::Approx(0.04935).epsilon(1e-4));
    const double m = std::cos(M_PI / 8.0);
    CHECK(c.condition_rhs == doctest::Approx(m * m).epsilon(1e-14));
    CHECK(c.satisfied);
    const double r = std::sqrt(csq) / m;
    CHECK(c.factors->lower == doctest::Approx((1.0 - r) * (1.0 - r)).epsilon(1e-13));
    CHECK(c.factors->lower == doctest::Approx(0.5769).epsilon(1e-3));
    CHECK(c.riesz);

    const auto zero = certify_sobolev(w, {1.0, 1.0}, JitterProfile{});
    CHECK(zero.factors->lower == 1.0);
    CHECK(zero.factors->upper == 1.0);

    // push the budget past m^2
    JitterProfile heavy;
    for (int r2 = 0; r2 < 9; ++r2) heavy.set_row(r2 - 4, 0.9);
    const auto fail = certify_sobolev(w, {1.0, 1.0}, heavy);
    CHECK_FALSE(fail.satisfied);

    auto bad = w;
    bad.m = 0.0;
    CHECK_THROWS_AS(certify_sobolev(bad, {1.0, 1.0}, JitterProfile{}), domain_error);
}

TEST_CASE("tensor certificates") {
    const TensorDim d{{1.0, 1.0}, 1.0 / 16.0};
    const auto two = certify_tensor({d, d});
    CHECK(two.satisfied);
    CHECK(two.factors->lower == doctest::Approx(1.0 / 16.0));
    CHECK(two.factors->upper == doctest::Approx(81.0 / 16.0));
    CHECK(two.riesz);

    const auto bad = certify_tensor({d, TensorDim{{1.0, 1.0}, 0.5}});
    CHECK_FALSE(bad.satisfied);

    CHECK_THROWS_AS(certify_tensor({}), usage_error);
}

TEST_CASE("reduction identities on random draws") {
    Rng rng(83);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.2, 1.0);
        const double b = rng.uniform(0.2, 1.0 / a);
        const double L = rng.uniform(0.0, 0.5);
        JitterProfile j = JitterProfile::single_row(L);

        const auto rect = certify_rect({a, b}, j);
        const auto b1 = certify_bspline(1, {a, b}, j);
        CHECK(same_certificate_numbers(rect, b1));

        const auto comb = certify_combined(1, {a, b}, j); // ell = 0
        CHECK(same_certificate_numbers(rect, comb));

        const auto tens = certify_tensor({TensorDim{{a, b}, L}});
        CHECK(same_certificate_numbers(rect, tens));

        JitterProfile withf = j;
        withf.freq_sup = rng.uniform(0.0, 0.24);
        const int p = 1 + static_cast<int>(rng.below(3));
        const auto cc = certify_combined(p, {a, b}, withf);
        const auto sc = certify_sinc(p, {a, b}, withf);
        CHECK(same_certificate_numbers(cc, sc));
    }
}

TEST_CASE("monotonicity and continuity of the factors") {
    const LatticeParams unit{1.0, 1.0};
    for (int p : {1, 2, 3}) {
        double prev_lo = 2.0, prev_hi = 0.0;
        bool first = true;
        for (double L = 0.0; L < 0.016; L += 0.001) {
            const auto c = certify_bspline(p, unit, JitterProfile::single_row(L));
            REQUIRE(c.satisfied);
            if (!first) {
                CHECK(c.factors->lower <= prev_lo + 1e-15);
                CHECK(c.factors->upper >= prev_hi - 1e-15);
            }
            prev_lo = c.factors->lower;
            prev_hi = c.factors->upper;
            first = false;
        }
    }
    // factors tend to 1 as the jitter vanishes
    for (double L : {1e-4, 1e-6, 1e-8}) {
        const auto c = certify_rect(unit, JitterProfile::single_row(L));
        CHECK(std::abs(c.factors->lower - 1.0) <= 5.0 * std::sqrt(L));
        CHECK(std::abs(c.factors->upper - 1.0) <= 5.0 * std::sqrt(L));
    }
    // and in ell for the combined certificate
    JitterProfile j = JitterProfile::single_row(0.01);
    double prev = 2.0;
    for (double ell = 0.0; ell < 0.2; ell += 0.01) {
        j.freq_sup = ell;
        const auto c = certify_combined(1, unit, j);
        REQUIRE(c.satisfied);
        CHECK(c.factors->lower <= prev + 1e-15);
        prev = c.factors->lower;
    }
}

TEST_CASE("riesz implies satisfied at unit density") {
    Rng rng(97);
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(0.2, 1.0);
        const double b = rng.flip() ? 1.0 / a : rng.uniform(0.2, 1.0 / a);
        const int p = 1 + static_cast<int>(rng.below(4));
        if (p >= 2 && a >= p) continue;
        JitterProfile j = JitterProfile::single_row(rng.uniform(0.0, 0.3));
        j.freq_sup = rng.flip() ? 0.0 : rng.uniform(0.0, 0.2);
        const auto c = certify_combined(p, {a, b}, j);
        if (c.riesz) {
            CHECK(c.satisfied);
            CHECK(std::abs(a * b - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("riesz flag requires unit density") {
    const auto off = certify_rect({0.5, 1.0}, JitterProfile::single_row(0.01));
    CHECK(off.satisfied);
    CHECK_FALSE(off.riesz);
    const auto on = certify_rect({0.5, 2.0}, JitterProfile::single_row(0.01));
    CHECK(on.satisfied);
    CHECK(on.riesz);
}
