#include "maryland/eigensystem.hpp"

#include "maryland/errors.hpp"
#include "maryland/trig.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace maryland;

namespace {
FrequencyCF golden() { return cf_expand("golden", 26); }
}

TEST_CASE("quantized eigenvalues at theta = 0") {
    FrequencyCF g = golden();
    Phase th = make_phase(Rational(0), g);
    auto recs = quantized_eigenvalues(1.0, g, th, -2, 2, {});
    REQUIRE(recs.size() == 5);

    SUBCASE("m = 0 sits at e = 0") {
        CHECK(recs[2].m == 0);
        CHECK(std::fabs(recs[2].e) <= 1e-10);
        CHECK(recs[2].k_target == Rational(1, 2));
    }
    SUBCASE("reflection symmetry in m") {
        CHECK(recs[1].e == doctest::Approx(-recs[3].e).epsilon(1e-10)); // m = -1 vs 1
        CHECK(recs[0].e == doctest::Approx(-recs[4].e).epsilon(1e-10)); // m = -2 vs 2
    }
    SUBCASE("m = 1 against the 200-bit inversion oracle") {
        CHECK(recs[3].e == doctest::Approx(-3.1764731179340764).epsilon(1e-9));
        double t = to_double(recs[3].k_target);
        CHECK(recs[3].e == doctest::Approx(oracle::ids_inverse(1.0, t)).epsilon(1e-9));
        CHECK(recs[3].gamma ==
              doctest::Approx(oracle::lyapunov(1.0, recs[3].e).d()).epsilon(1e-12));
        CHECK(recs[3].predicted_pp);
    }
}

TEST_CASE("reflection covariance: theta vs 1 - theta") {
    FrequencyCF g = golden();
    Phase th = make_phase(Rational(3, 10), g);
    Phase rth = make_phase(Rational(7, 10), g);
    auto a = quantized_eigenvalues(1.0, g, th, -2, 2, {});
    auto b = quantized_eigenvalues(1.0, g, rth, -2, 2, {});
    for (std::size_t i = 0; i < a.size(); ++i) {
        // m  ->  -m mirrors e  ->  -e
        CHECK(a[i].e == doctest::Approx(-b[a.size() - 1 - i].e).epsilon(1e-9));
    }
}

TEST_CASE("cohomological solve") {
    FrequencyCF g = golden();
    SUBCASE("zero data gives the zero series") {
        ZetaCoefficients z;
        z.gamma = 0.5;
        z.k = 0.5;
        z.zeta0 = 0;
        for (long long n = 1; n <= 50; ++n) { z.zeta_n[n] = 0; z.zeta_n[-n] = 0; }
        PsiSeries psi = solve_cohomological(z, g, 50, 1e-9, false, 0.1);
        for (const auto& [k, v] : psi.coeffs) {
            (void)k;
            CHECK(std::abs(v) == 0.0);
        }
    }
    SUBCASE("chord bounds on the divisors at convergent indices") {
        const Rational a = g.value();
        for (int n = 2; n <= 14; ++n) {
            double t = to_double(dist_to_int(Rational(g.q[n]) * a));
            double chord = 2.0 * std::fabs(sin_pi(t));
            CHECK(chord >= 4.0 * t * (1 - 1e-12));
            CHECK(chord <= 2.0 * M_PI * t * (1 + 1e-12));
        }
    }
    SUBCASE("Diophantine case runs to K = 200 without breakdown") {
        double gamma = lyapunov(1.0, 0.0);
        ZetaCoefficients z = zeta_coeffs(1.0, 0.0, 200);
        PsiSeries psi = solve_cohomological(z, g, 200, 1e-9, false, gamma / 4.0);
        CHECK(psi.min_divisor > 0);
        CHECK(psi.coeffs.size() == 400);
        for (long long k = 1; k <= 200; ++k) {
            auto p = psi.coeffs.at(k), q = psi.coeffs.at(-k);
            CHECK(std::abs(p - std::conj(q)) <= 1e-14 * std::max(1.0, std::abs(p)));
        }
    }
    SUBCASE("nonpositive decay target signals the broken hypothesis") {
        ZetaCoefficients z = zeta_coeffs(1.0, 0.0, 10);
        CHECK_THROWS_AS(solve_cohomological(z, g, 10, 1e-9, false, 0.0), small_divisor_error);
    }
}

TEST_CASE("small-divisor breakdown on a Liouville frequency") {
    FrequencyCF lv = cf_expand("cfgen:exp:2:6", 6);
    std::mt19937_64 rng(99);
    Phase th = make_phase(frac(Rational(static_cast<long>(rng() >> 12), 1L << 52)), lv);
    auto recs = quantized_eigenvalues(1.0, lv, th, 0, 0, {});
    CHECK(recs[0].delta_hat == doctest::Approx(2.0).epsilon(0.1));
    CHECK_FALSE(recs[0].predicted_pp);

    // the per-coefficient route at an explicit positive target: the divisor
    // at k = q_1 = 8 is ~ 1/q_2 while zeta_8 stays of regular size
    ZetaCoefficients z = zeta_coeffs(1.0, recs[0].e, recs[0].k_target, 64);
    try {
        solve_cohomological(z, lv, 64, 1e-9, false, recs[0].gamma / 4.0);
        FAIL("expected small_divisor_error");
    } catch (const small_divisor_error& err) {
        CHECK(err.mode == 8);
        CHECK(err.psi_abs > err.bound);
    }

    // the default target from gamma <= delta is already impossible
    double rho = default_target_decay(lyapunov(1.0, 0.0), recs[0].delta_hat);
    CHECK(rho <= 0);
    ZetaCoefficients z0 = zeta_coeffs(1.0, 0.0, 64);
    CHECK_THROWS_AS(solve_cohomological(z0, lv, 64, 1e-9, false, rho), small_divisor_error);
}

TEST_CASE("eigenfunction synthesis at the band center") {
    FrequencyCF g = golden();
    Phase th = make_phase(Rational(0), g);
    auto recs = quantized_eigenvalues(1.0, g, th, 0, 0, {});
    auto& rec = recs[0];
    double rho = default_target_decay(rec.gamma, rec.delta_hat);
    int K = static_cast<int>(std::ceil(12.0 / rho));
    ZetaCoefficients z = zeta_coeffs(1.0, rec.e, rec.k_target, K);
    PsiSeries psi = solve_cohomological(z, g, K, 1e-9, false, rho);
    const long long N = 512;
    Eigenfunction fn = build_eigenfunction(1.0, g, th, rec, psi, N);

    CHECK(fn.diag.unit_modulus_dev <= 1e-10);
    CHECK(fn.residual <= 1e-6);
    CHECK(fn.decay_rate == doctest::Approx(-lyapunov(1.0, 0.0)).epsilon(0.10));
    CHECK(fn.u.size() == static_cast<std::size_t>(2 * N + 1));
    CHECK(fn.diag.growth_factor < 10.0);

    CHECK_THROWS_AS(build_eigenfunction(1.0, g, th, rec, psi, 4 * K - 1), validation_error);

    SUBCASE("growth monitor trips with an absurd bound") {
        BuildOptions tight;
        tight.growth_bound = 1e-12;
        CHECK_THROWS_AS(build_eigenfunction(1.0, g, th, rec, psi, N, tight),
                        ill_conditioned_error);
    }
    SUBCASE("Fourier inversion agrees with a sampled DFT where both resolve") {
        const long long M = 8 * N;
        for (long long n : {-40LL, -7LL, 0LL, 3LL, 25LL}) {
            std::complex<double> acc(0, 0);
            for (long long gi = 0; gi < M; ++gi) {
                double x = static_cast<double>(gi) / static_cast<double>(M);
                double phase = static_cast<double>(rec.m) * x + psi.at_real(x);
                acc += std::exp(std::complex<double>(0, 2.0 * M_PI *
                                                            (static_cast<double>(n) * x - phase)));
            }
            acc /= static_cast<double>(M);
            // reproduce c_n from the built u: (lambda + ie) u_n - i u_{n+1} - i u_{n-1}
            std::complex<double> cn =
                (std::complex<double>(1.0, rec.e) * fn.u[static_cast<std::size_t>(n + N)] -
                 std::complex<double>(0, 1) * fn.u[static_cast<std::size_t>(n + 1 + N)] -
                 std::complex<double>(0, 1) * fn.u[static_cast<std::size_t>(n - 1 + N)]);
            CHECK(std::abs(cn - acc) <= 1e-12);
        }
    }
}

TEST_CASE("eigenfunction synthesis at weak coupling") {
    // lambda < 2 leaves the tridiagonal system outside the dominance regime;
    // the growth monitor has to carry it
    FrequencyCF g = golden();
    Phase th = make_phase(Rational(0), g);
    auto recs = quantized_eigenvalues(0.5, g, th, 0, 0, {});
    auto& rec = recs[0];
    double rho = default_target_decay(rec.gamma, rec.delta_hat);
    int K = static_cast<int>(std::ceil(12.0 / rho));
    ZetaCoefficients z = zeta_coeffs(0.5, rec.e, rec.k_target, K);
    PsiSeries psi = solve_cohomological(z, g, K, 1e-9, false, rho);
    Eigenfunction fn =
        build_eigenfunction(0.5, g, th, rec, psi, std::max<long long>(4LL * K, 256));
    CHECK(fn.residual <= 1e-6);
    CHECK(fn.decay_rate == doctest::Approx(-rec.gamma).epsilon(0.10));
}

TEST_CASE("t_k summability condition") {
    FrequencyCF g = golden();
    Phase th = make_phase(Rational(0), g);
    SUBCASE("zero data sums to zero") {
        ZetaCoefficients z;
        z.gamma = lyapunov(1.0, 0.0);
        z.k = 0.5;
        for (long long n = 1; n <= 40; ++n) { z.zeta_n[n] = 0; z.zeta_n[-n] = 0; }
        auto rep = check_tk_condition(1.0, 0.0, g, th, z.gamma / 4.0, 40, 10, &z);
        for (double s : rep.partial_sums) CHECK(s == 0.0);
        CHECK(rep.numerically_cauchy);
    }
    SUBCASE("golden at the band center converges") {
        double gamma = lyapunov(1.0, 0.0);
        auto rep = check_tk_condition(1.0, 0.0, g, th, gamma / 4.0, 300, 16);
        CHECK(rep.numerically_cauchy);
        CHECK(rep.tail_increment < 1e-8);
        REQUIRE(!rep.partial_sums.empty());
        CHECK(std::isfinite(rep.partial_sums.back()));
        // per-level ||t alpha|| bounds decay
        for (std::size_t i = 3; i < rep.levels.size(); ++i)
            CHECK(rep.levels[i].max_dist_alpha <= rep.levels[i - 1].max_dist_alpha + 1e-12);
    }
    SUBCASE("t_decay precondition") {
        CHECK_THROWS_AS(check_tk_condition(1.0, 0.0, g, th, 10.0, 10, 5), validation_error);
    }
}

TEST_CASE("support membership") {
    FrequencyCF g = golden();
    Phase th0 = make_phase(Rational(0), g);
    SUBCASE("quantized energies stay within |m| ||q_n alpha||") {
        auto recs = quantized_eigenvalues(1.0, g, th0, 1, 2, {});
        for (const auto& rec : recs) {
            SupportTrace tr = support_membership(g, th0, rec.k_target, 20);
            CHECK(tr.in_support);
            for (std::size_t n = 1; n <= tr.values.size(); ++n) {
                double bound = std::fabs(static_cast<double>(rec.m)) *
                               to_double(g.dist_qn_alpha(static_cast<int>(n)));
                CHECK(tr.values[n - 1] <= bound * (1 + 1e-9) + 1e-15);
            }
        }
    }
    SUBCASE("e = 0 at theta = 0 gives the zero trace") {
        SupportTrace tr = support_membership(g, th0, Rational(1, 2), 15);
        for (double v : tr.values) CHECK(v == 0.0);
        CHECK(tr.in_support);
    }
    SUBCASE("random off-lattice energies are rejected") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        int false_positives = 0;
        for (int i = 0; i < 20; ++i) {
            SupportTrace tr = support_membership(1.0, g, th0, u(rng), 20);
            false_positives += tr.in_support ? 1 : 0;
        }
        CHECK(false_positives == 0);
    }
}
