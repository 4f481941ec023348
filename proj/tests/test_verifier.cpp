#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "gabor/errors.hpp"
#include "gabor/rng.hpp"
#include "gabor/verifier.hpp"
#include "oracles.hpp"

using namespace gabor;

namespace {

std::shared_ptr<const BSplineWindow> win(int p) {
    return std::make_shared<const BSplineWindow>(p);
}

cplx gram_entry_quadrature(const AtomSpec& x, const AtomSpec& y) {
    const double lo = std::max(x.shift - x.window->half_support(),
                               y.shift - y.window->half_support());
    const double hi = std::min(x.shift + x.window->half_support(),
                               y.shift + y.window->half_support());
    if (hi <= lo) return {0.0, 0.0};
    std::vector<double> cuts{lo, hi};
    for (int i = 0; i <= x.window->piece_count(); ++i)
        cuts.push_back(x.shift + x.window->piece_left(0) + i);
    for (int i = 0; i <= y.window->piece_count(); ++i)
        cuts.push_back(y.shift + y.window->piece_left(0) + i);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                              [&](double t) { return t < lo || t > hi; }),
               cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double u, double v) { return std::abs(u - v) < 1e-12; }),
               cuts.end());
    const double omega = -2.0 * M_PI * (x.freq - y.freq); // conj convention
    return oracles::quad_oscillatory(
        [&](double t) { return x.window->eval(t - x.shift) * y.window->eval(t - y.shift); },
        omega, cuts, 1e-13);
}

} // namespace

TEST_CASE("gram entries: closed cases") {
    const auto w1 = win(1);
    const AtomSpec a{0.0, 0.0, w1};
    CHECK(std::abs(gram_entry(a, a) - cplx(1.0, 0.0)) <= 1e-14); // ||rect||^2

    const AtomSpec b{1.0, 0.0, w1}; // frequency difference 1, same shift
    CHECK(std::abs(gram_entry(a, b)) <= 1e-12);
    CHECK(std::abs(gram_entry(b, a)) <= 1e-12);

    const auto w2 = win(2);
    const AtomSpec t0{0.0, 0.0, w2}, t1{0.0, 1.0, w2};
    CHECK(std::abs(gram_entry(t0, t1) - cplx(1.0 / 6.0, 0.0)) <= 1e-14);
}

TEST_CASE("gram entries agree with adaptive quadrature") {
    Rng rng(41);
    for (int p = 1; p <= 4; ++p) {
        const auto w = win(p);
        for (int i = 0; i < 100; ++i) {
            const AtomSpec x{rng.uniform(-3.0, 3.0), rng.uniform(-2.0, 2.0), w};
            const AtomSpec y{rng.uniform(-3.0, 3.0), rng.uniform(-2.0, 2.0), w};
            const cplx got = gram_entry(x, y);
            const cplx want = gram_entry_quadrature(x, y);
            CHECK(std::abs(got - want) <= 1e-9);
        }
    }
}

TEST_CASE("gram is Hermitian with real positive bounded diagonal") {
    Rng rng(43);
    const auto w = win(3);
    std::vector<AtomSpec> atoms;
    for (int i = 0; i < 12; ++i)
        atoms.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), w});
    const auto g = build_gram(atoms);
    for (std::size_t i = 0; i < g.dim; ++i) {
        CHECK(g.at(i, i).imag() == 0.0);
        CHECK(g.at(i, i).real() > 0.0);
        CHECK(g.at(i, i).real() <= 3.0 + 1e-12);
        for (std::size_t j = 0; j < g.dim; ++j) {
            // entries are computed once per unordered pair; recompute the
            // mirrored entry independently
            const cplx recomputed = gram_entry(atoms[j], atoms[i]);
            CHECK(std::abs(recomputed - std::conj(g.at(i, j))) <= 1e-12);
        }
    }
}

TEST_CASE("gram assembly is independent of the thread count") {
    Rng rng(47);
    const auto w = win(2);
    std::vector<AtomSpec> atoms;
    for (int i = 0; i < 24; ++i)
        atoms.push_back({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), w});
    const auto g1 = build_gram(atoms, 1);
    const auto g4 = build_gram(atoms, 4);
    for (std::size_t i = 0; i < g1.entries.size(); ++i)
        CHECK(g1.entries[i] == g4.entries[i]);
}

TEST_CASE("spectrum extrema: analytic 2x2 and orthonormal family") {
    GramMatrix g;
    g.dim = 2;
    g.entries = {cplx(1, 0), cplx(1.0 / 6.0, 0), cplx(1.0 / 6.0, 0), cplx(1, 0)};
    const auto [lo, hi] = gram_spectrum_extrema(g);
    CHECK(lo == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(7.0 / 6.0).epsilon(1e-12));

    // orthonormal rect system: identity Gram
    const auto w1 = win(1);
    std::vector<AtomSpec> atoms;
    for (int n = -2; n <= 2; ++n)
        for (int k = -2; k <= 2; ++k)
            atoms.push_back({static_cast<double>(n), static_cast<double>(k), w1});
    const auto gr = build_gram(atoms);
    const auto [l2, h2] = gram_spectrum_extrema(gr);
    CHECK(l2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h2 == doctest::Approx(1.0).epsilon(1e-12));

    // a repeated atom forces a zero eigenvalue
    atoms.push_back(atoms.front());
    const auto [l3, h3] = gram_spectrum_extrema(build_gram(atoms));
    CHECK(std::abs(l3) <= 1e-12);
    CHECK(h3 == doctest::Approx(2.0).epsilon(1e-12)); // duplicated unit atom pairs up
}

TEST_CASE("krylov path matches the dense path") {
    // random Hermitian PSD with deliberately clustered extremes
    Rng rng(53);
    GramMatrix g;
    g.dim = 96;
    g.entries.assign(g.dim * g.dim, cplx(0, 0));
    std::vector<cplx> b(g.dim * g.dim);
    for (auto& z : b) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (std::size_t i = 0; i < g.dim; ++i)
        for (std::size_t j = 0; j < g.dim; ++j) {
            cplx acc(0, 0);
            for (std::size_t k = 0; k < g.dim; ++k)
                acc += std::conj(b[k * g.dim + i]) * b[k * g.dim + j];
            g.at(i, j) = acc / static_cast<double>(g.dim) +
                         ((i == j) ? cplx(0.05, 0) : cplx(0, 0));
        }
    const auto dense = gram_spectrum_extrema(g);
    const auto krylov = gram_spectrum_extrema(g, 1e-10, /*dense_limit=*/16);
    CHECK(krylov.first == doctest::Approx(dense.first).epsilon(1e-9));
    CHECK(krylov.second == doctest::Approx(dense.second).epsilon(1e-9));

    // the jittered rect family has the clustered spectrum the dense-limit
    // switch exists for; both routes must agree there too
    const auto fam = realize_family(1, {1.0, 1.0}, JitterProfile::single_row(0.05), 3, 6, 5);
    const auto gr = build_gram(fam.atoms);
    const auto d2 = gram_spectrum_extrema(gr);
    const auto k2 = gram_spectrum_extrema(gr, 1e-10, 16);
    CHECK(k2.first == doctest::Approx(d2.first).epsilon(1e-7));
    CHECK(k2.second == doctest::Approx(d2.second).epsilon(1e-7));
}

TEST_CASE("exact perturbation norm: closed cases") {
    // no perturbation
    std::vector<cplx> alpha{1.0, 2.0, -1.0};
    std::vector<double> mus{0.0, 1.0, 2.0};
    CHECK(exact_perturbation_norm(1.0, alpha, mus) == 0.0);

    // one shifted rectangle: symmetric difference measure 2*0.2
    std::vector<cplx> a1{1.0};
    std::vector<double> m1{0.2};
    CHECK(exact_perturbation_norm(1.0, a1, m1) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("perturbation-norm inequality: seeded trials incl. the gap case") {
    Rng rng(59);
    int gap_cases = 0;
    int statement_violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = rng.uniform(0.2, 3.0);
        const double ell = rng.uniform(0.0, 2.5);
        const std::size_t n = 1 + rng.below(24);
        std::vector<cplx> alpha(n);
        std::vector<double> mus(n);
        double norm2 = 0.0;
        double realized_ell = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            alpha[k] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            norm2 += std::norm(alpha[k]);
            const double d = rng.uniform(-ell, ell);
            mus[k] = static_cast<double>(k) + d;
            realized_ell = std::max(realized_ell, std::abs(d));
        }
        if (a > 1.0 && realized_ell > 0.0 && realized_ell <= (a - 1.0) / (2.0 * a))
            ++gap_cases;
        const double got = exact_perturbation_norm(a, alpha, mus);
        const double conservative =
            2.0 * a * (2.0 * (std::floor(realized_ell) + 1.0) + 1.0) * realized_ell * norm2;
        CHECK(got <= conservative * (1.0 + 1e-12) + 1e-15);
        // statement-constant violations are reported, not asserted; the
        // conservative constant above is the hard bound
        if (got > perturbation_norm_bound(a, realized_ell) * norm2 * (1.0 + 1e-12) + 1e-15)
            ++statement_violations;
    }
    CHECK(gap_cases > 20);
    MESSAGE("statement-constant violations observed: ", statement_violations);
    CHECK(statement_violations == 0);
}

TEST_CASE("perturbation operator norm stays under 4aL") {
    for (int p : {1, 2, 3}) {
        JitterProfile j;
        j.set_row(0, 0.1);
        const double got =
            perturbation_operator_norm_bspline(p, {1.0, 1.0}, j, 20, 1234 + p, 6);
        CHECK(got <= 4.0 * 0.1 + 1e-10);
        CHECK(got > 0.0);
    }
    // zero jitter gives exactly zero
    CHECK(perturbation_operator_norm_bspline(2, {1.0, 1.0}, JitterProfile{}, 5, 7) == 0.0);
}

TEST_CASE("realize_family attains the requested total") {
    JitterProfile j;
    j.set_row(-1, 0.02);
    j.set_row(0, 0.03);
    j.set_row(2, 0.0125);
    const auto fam = realize_family(1, {1.0, 1.0}, j, 4, 8, 99);
    CHECK(fam.realized_total == doctest::Approx(j.total()).epsilon(1e-14));
    CHECK(fam.atoms.size() == 9 * 17);
    for (std::size_t i = 0; i < fam.idx.size(); ++i) {
        const auto [n, k] = fam.idx[i];
        CHECK(std::abs(fam.mu_at(n, k) - k) <= j.row(n) + 1e-15);
    }
}

TEST_CASE("verify accepts an honest riesz certificate and falsifies an inflated one") {
    const LatticeParams unit{1.0, 1.0};
    JitterProfile j = JitterProfile::single_row(1.0 / 16.0);
    const auto cert = certify_rect(unit, j);
    REQUIRE(cert.riesz);
    const auto fam = realize_family(1, unit, j, 4, 6, 2024);
    VerifyOptions opt;
    opt.seed = 5;
    const auto rep = verify_certificate(cert, fam.atoms, opt);
    CHECK(rep.pass);

    Certificate inflated = cert;
    inflated.absolute->lower = 1.05; // claims more than the unperturbed bound
    const auto neg = verify_certificate(inflated, fam.atoms, opt);
    CHECK_FALSE(neg.pass);
    CHECK(!neg.note.empty());
}

TEST_CASE("verify runs the analysis-energy route for frame-only certificates") {
    const LatticeParams lat{0.5, 1.0}; // ab = 1/2: frame, not riesz
    JitterProfile j = JitterProfile::single_row(0.02);
    const auto cert = certify_rect(lat, j);
    REQUIRE(cert.satisfied);
    REQUIRE_FALSE(cert.riesz);
    const auto fam = realize_family(1, lat, j, 6, 24, 77);
    VerifyOptions opt;
    opt.seed = 6;
    const auto rep = verify_certificate(cert, fam.atoms, opt);
    CHECK(rep.pass);
    bool saw_energy = false;
    for (const auto& c : rep.checks) saw_energy = saw_energy || c.name == "analysis-energy-lower";
    CHECK(saw_energy);
}

TEST_CASE("verify confirms a combined time+frequency certificate") {
    const LatticeParams unit{1.0, 1.0};
    JitterProfile j = JitterProfile::single_row(1.0 / 64.0);
    j.freq_sup = 0.05;
    const auto cert = certify_combined(1, unit, j);
    REQUIRE(cert.satisfied);
    const auto fam = realize_family(1, unit, j, 5, 8, 404); // lambda jittered too
    bool lambda_moved = false;
    for (std::size_t n = 0; n < fam.lambda.size(); ++n)
        lambda_moved = lambda_moved ||
                       fam.lambda[n] != static_cast<double>(static_cast<long>(n) - 5);
    CHECK(lambda_moved);
    VerifyOptions opt;
    opt.seed = 12;
    const auto rep = verify_certificate(cert, fam.atoms, opt);
    CHECK(rep.pass);
}

TEST_CASE("verify rejects unsatisfied certificates") {
    const auto cert = certify_rect({1.0, 1.0}, JitterProfile::single_row(0.3));
    REQUIRE_FALSE(cert.satisfied);
    const auto fam = realize_family(1, {1.0, 1.0}, JitterProfile::single_row(0.3), 2, 2, 1);
    CHECK_THROWS_AS(verify_certificate(cert, fam.atoms, 1e-6), usage_error);
}

TEST_CASE("frame reconstruction: orthonormal basis recovers in one step") {
    const auto w1 = win(1);
    std::vector<AtomSpec> atoms;
    for (int n = -3; n <= 3; ++n)
        for (int k = -4; k <= 4; ++k)
            atoms.push_back({static_cast<double>(n), static_cast<double>(k), w1});
    const double dt = 1.0 / 64;
    const std::size_t len = 10 * 64;
    const auto fam = discretize_family(atoms, -5.0 + 0.5 * dt, dt, len);

    // a signal inside the span: combination of a few atoms
    std::vector<cplx> coef(atoms.size(), cplx(0, 0));
    coef[3] = cplx(0.7,0.2);
    coef[40] = cplx(-0.4, 0.1);
    coef[70] = cplx(0.0, -0.9);
    std::vector<cplx> f(len, cplx(0, 0));
    synthesize(fam, coef, f.data());

    const auto c = analysis_coefficients(fam, f);
    const auto res = frame_reconstruct(fam, c, {1.0, 1.0, BoundsKind::exact}, f, 3);
    REQUIRE(!res.rel_errors.empty());
    CHECK(res.rel_errors.front() <= 1e-12);
}

TEST_CASE("frame reconstruction: certified rate and monotone errors") {
    const LatticeParams unit{1.0, 1.0};
    JitterProfile j = JitterProfile::single_row(1.0 / 16.0);
    const auto cert = certify_rect(unit, j);
    const auto fam = realize_family(1, unit, j, 4, 10, 31415);
    const double dt = 1.0 / 64;
    const std::size_t len = 24 * 64;
    const auto disc = discretize_family(fam.atoms, -12.0 + 0.5 * dt, dt, len);

    Rng rng(8);
    std::vector<cplx> coef(fam.atoms.size());
    for (auto& z : coef) z = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    std::vector<cplx> f(len, cplx(0, 0));
    synthesize(disc, coef, f.data());

    const auto c = analysis_coefficients(disc, f);
    const auto res = frame_reconstruct(disc, c, *cert.absolute, f, 70);
    const double worst = (cert.absolute->upper - cert.absolute->lower) /
                         (cert.absolute->upper + cert.absolute->lower);
    REQUIRE(res.rel_errors.size() >= 30);
    for (std::size_t i = 1; i < res.rel_errors.size(); ++i) {
        if (res.rel_errors[i - 1] < 1e-13) break;
        CHECK(res.rel_errors[i] <= res.rel_errors[i - 1] * (worst + 0.02) + 1e-16);
        CHECK(res.rel_errors[i] <= res.rel_errors[i - 1] + 1e-16); // monotone
    }
    CHECK(res.rel_errors.back() < 1e-6);
}

TEST_CASE("frame reconstruction flags inconsistent bounds") {
    const auto w1 = win(1);
    std::vector<AtomSpec> atoms;
    for (int k = -4; k <= 4; ++k) atoms.push_back({0.0, static_cast<double>(k), w1});
    const double dt = 1.0 / 32;
    const std::size_t len = 10 * 32;
    const auto fam = discretize_family(atoms, -5.0 + 0.5 * dt, dt, len);
    std::vector<cplx> coef(atoms.size(), cplx(1.0, 0.0));
    std::vector<cplx> f(len, cplx(0, 0));
    synthesize(fam, coef, f.data());
    const auto c = analysis_coefficients(fam, f);
    // claimed bounds far too small: relaxation 2/(A+B) over-shoots and diverges
    CHECK_THROWS_AS(frame_reconstruct(fam, c, {0.01, 0.02, BoundsKind::exact}, f, 50),
                    numeric_error);
}

TEST_CASE("sinc-side Gram matches the time-side closed form (duality)") {
    Rng rng(61);
    for (int p : {1, 2}) {
        const auto w = win(p);
        std::vector<AtomSpec> rect_atoms;
        std::vector<SincAtom> sinc_atoms;
        std::vector<double> phases;
        // jittered frequencies, integer shifts: the Fourier-side modulation
        // differences stay on the integer lattice, so every slow tail
        // component is covered by the quadrature's closed-form corrections
        for (int n = -2; n <= 2; ++n) {
            const double lambda = n + rng.uniform(-0.1, 0.1);
            for (long k = -1; k <= 1; ++k) {
                rect_atoms.push_back({lambda, static_cast<double>(k), w});
                sinc_atoms.push_back({p, -static_cast<double>(k), lambda});
                phases.push_back(2.0 * M_PI * static_cast<double>(k) * lambda);
            }
        }
        const auto gr = build_gram(rect_atoms);
        const auto gs = sinc_gram_quadrature(sinc_atoms, 64.0, 24);
        for (std::size_t i = 0; i < gr.dim; ++i)
            for (std::size_t j = 0; j < gr.dim; ++j) {
                const cplx adj = std::exp(cplx(0.0, -(phases[i] - phases[j])));
                CHECK(std::abs(gs.at(i, j) - adj * gr.at(i, j)) <= 1e-4);
            }
    }
}
