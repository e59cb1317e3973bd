#include "maryland/spectral_report.hpp"

#include "maryland/closed_forms.hpp"
#include "maryland/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace maryland;

TEST_CASE("classifier trichotomy") {
    SUBCASE("Diophantine: pure point everywhere") {
        FrequencyCF g = cf_expand("golden", 21);
        Phase th = make_phase(Rational(1, 4), g);
        SpectralVerdict v = classify(1.0, g, th, {});
        CHECK(v.case_id == SpectralCase::PPEverywhere);
        CHECK(v.delta_hat.value <= v.gamma_at_zero);
        CHECK_FALSE(v.boundary_energies.has_value());
        CHECK(v.ac_empty);
    }
    SUBCASE("Liouville with generic phase: mixed with matched boundary") {
        FrequencyCF lv = cf_expand("cfgen:exp:2:6", 6);
        std::mt19937_64 rng(42);
        Phase th = make_phase(frac(Rational(static_cast<long>(rng() >> 12), 1L << 52)), lv);
        ClassifyOptions opt;
        opt.depth = 6;
        SpectralVerdict v = classify(1.0, lv, th, opt);
        CHECK(v.case_id == SpectralCase::Mixed);
        REQUIRE(v.boundary_energies.has_value());
        double estar = v.boundary_energies->second;
        CHECK(estar > 0);
        CHECK(v.boundary_energies->first == -estar);
        CHECK(std::fabs(lyapunov(1.0, estar) - v.delta_hat.value) <= 1e-9);
        CHECK(estar == doctest::Approx(7.45).epsilon(0.05)); // root of gamma = 2
    }
    SUBCASE("Liouville with a localized phase: back to pure point") {
        FrequencyCF lv = cf_expand("cfgen:exp:2:6", 6);
        Phase th = localized_phase(lv, 6, 0);
        ClassifyOptions opt;
        opt.depth = 6;
        SpectralVerdict v = classify(1.0, lv, th, opt);
        CHECK(v.case_id == SpectralCase::PPEverywhere);
    }
    SUBCASE("sentinel: trace beyond the ceiling at two consecutive levels") {
        FrequencyCF lv = cf_expand("cfgen:exp:8:4", 4);
        std::mt19937_64 rng(5);
        Phase th = make_phase(frac(Rational(static_cast<long>(rng() >> 12), 1L << 52)), lv);
        ClassifyOptions opt;
        opt.depth = 4;
        opt.trace_ceiling = 5.0;
        SpectralVerdict v = classify(1.0, lv, th, opt);
        CHECK(v.case_id == SpectralCase::SCEverywhere);
        CHECK(std::isinf(v.delta_hat.value));
        CHECK(v.pp_region == "empty");
    }
}

TEST_CASE("classifier verdict is stable under theta -> theta + alpha") {
    FrequencyCF g = cf_expand("golden", 21);
    Phase th1 = make_phase(rational_from_decimal("0.13"), g);
    Phase th2 = make_phase(frac(rational_from_decimal("0.13") + g.value()), g);
    SpectralVerdict a = classify(1.0, g, th1, {});
    SpectralVerdict b = classify(1.0, g, th2, {});
    CHECK(a.case_id == b.case_id);
    CHECK(std::fabs(a.delta_hat.value - b.delta_hat.value) <= 1e-3);
}

TEST_CASE("finite-volume IDS") {
    FrequencyCF g = cf_expand("golden", 26);
    Phase th = make_phase(rational_from_decimal("0.13"), g);
    SUBCASE("counts vanish below the spectrum and saturate above") {
        // the truncation's spectrum sits inside +-(2 + lambda max|tan|)
        const Rational a = g.value();
        double max_tan = 0;
        for (long long n = -300; n <= 300; ++n)
            max_tan = std::max(max_tan,
                               std::fabs(std::tan(M_PI * to_double(frac(th.theta +
                                                                        static_cast<long>(n) * a)))));
        double e_lo = -(2.0 + max_tan) - 1.0;
        CHECK(finite_volume_ids(1.0, g, th, e_lo, 300) == 0.0);
        CHECK(finite_volume_ids(1.0, g, th, -e_lo, 300) == 1.0);
    }
    SUBCASE("matches the closed form at the band center") {
        double fv = finite_volume_ids(1.0, g, th, 0.0, 2000);
        CHECK(fv == doctest::Approx(0.5).epsilon(0.02));
        CHECK(std::fabs(fv - ids(1.0, 0.0)) <= 0.01);
    }
    SUBCASE("nondecreasing in e") {
        double prev = -1;
        for (double e = -3.0; e <= 3.0; e += 0.5) {
            double fv = finite_volume_ids(1.0, g, th, e, 500);
            CHECK(fv >= prev);
            prev = fv;
        }
    }
    SUBCASE("N precondition") {
        CHECK_THROWS_AS(finite_volume_ids(1.0, g, th, 0.0, 50), validation_error);
    }
}

TEST_CASE("theta constancy of the finite-volume IDS") {
    FrequencyCF g = cf_expand("golden", 26);
    Phase t1 = make_phase(rational_from_decimal("0.1"), g);
    Phase t2 = make_phase(rational_from_decimal("0.37"), g);
    std::vector<double> grid;
    for (int i = 0; i < 13; ++i) grid.push_back(-3.0 + 6.0 * i / 12.0);

    SUBCASE("identical phases give zero deviation") {
        CHECK(theta_constancy_check(1.0, g, t1, t1, grid, 500) == 0.0);
    }
    SUBCASE("distinct phases agree within the counting error") {
        CHECK(theta_constancy_check(1.0, g, t1, t2, grid, 2000) <= 0.02);
    }
    SUBCASE("deviation shrinks with the volume") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 3; ++trial) {
            auto draw = [&] {
                return make_phase(frac(Rational(static_cast<long>(rng() >> 12), 1L << 52)), g);
            };
            Phase a = draw(), b = draw();
            double small = theta_constancy_check(1.0, g, a, b, grid, 1000);
            double large = theta_constancy_check(1.0, g, a, b, grid, 4000);
            CHECK(large <= small + 1e-12);
        }
    }
}
