#include "maryland/closed_forms.hpp"
#include "maryland/errors.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace maryland;

TEST_CASE("lyapunov closed form at exactly solvable points") {
    // 4 cosh g = 2 sqrt5  =>  cosh g = sqrt5/2  =>  g = ln((1+sqrt5)/2)
    CHECK(lyapunov(1.0, 0.0) == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-15));
    // cosh g = sqrt2  =>  g = ln(1+sqrt2)
    CHECK(lyapunov(2.0, 0.0) == doctest::Approx(std::log(1 + std::sqrt(2.0))).epsilon(1e-15));
    // frozen from the 200-bit oracle
    CHECK(lyapunov(1.0, 1.0) == doctest::Approx(0.53063753095251787).epsilon(1e-14));
    CHECK(lyapunov(1.0, 1.0) == doctest::Approx(oracle::lyapunov(1.0, 1.0).d()).epsilon(1e-14));
}

TEST_CASE("lyapunov symmetry, positivity, monotonicity") {
    for (double lambda : {0.25, 1.0, 2.0, 7.0}) {
        double prev = lyapunov(lambda, 0.0);
        CHECK(prev > 0);
        for (double e = 0.25; e <= 12.0; e += 0.25) {
            double g = lyapunov(lambda, e);
            CHECK(g == doctest::Approx(lyapunov(lambda, -e)).epsilon(1e-12));
            CHECK(g > prev);
            prev = g;
        }
    }
}

TEST_CASE("ids values and limits") {
    CHECK(ids(1.0, 0.0) == 0.5);
    CHECK(ids(1.0, 1e6) > 0.999999);
    CHECK(ids(1.0, 1.0) == doctest::Approx(0.64396470103607706).epsilon(1e-14));
    CHECK(ids(1.0, 0.7) == doctest::Approx(oracle::ids(1.0, 0.7).d()).epsilon(1e-14));
    CHECK(ids(2.0, -1.3) == doctest::Approx(oracle::ids(2.0, -1.3).d()).epsilon(1e-14));
}

TEST_CASE("ids symmetry and monotonicity") {
    for (double lambda : {1.0, 2.0, 3.0}) {
        double prev = 0.0;
        for (double e = -10.0; e <= 10.0; e += 0.5) {
            double k = ids(lambda, e);
            CHECK(k + ids(lambda, -e) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(k > prev);
            CHECK(k < 1.0);
            prev = k;
        }
    }
}

TEST_CASE("ids_inverse") {
    CHECK(std::fabs(ids_inverse(1.0, 0.5)) <= 1e-11);
    CHECK(std::fabs(ids_inverse(3.0, 0.5)) <= 1e-11);
    CHECK_THROWS_AS(ids_inverse(1.0, 1.5), target_out_of_range_error);
    CHECK_THROWS_AS(ids_inverse(1.0, 0.0), target_out_of_range_error);

    // round trip on an energy grid, within 10x the k tolerance in e units
    const double tol = 1e-12;
    for (double e = -10.0; e <= 10.0; e += 1.0) {
        double back = ids_inverse(1.0, ids(1.0, e), tol);
        CHECK(back == doctest::Approx(e).epsilon(1e-11));
    }
    // frozen case: ids(1,1) back to 1
    CHECK(ids_inverse(1.0, 0.64396470103607706) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zeta coefficients at lambda=1, e=0") {
    ZetaCoefficients z = zeta_coeffs(1.0, 0.0, 10);
    CHECK(z.zeta0 == 0.0);
    CHECK(z.at(1) == doctest::Approx(-0.19672632861669317).epsilon(1e-13)); // -e^{-gamma}/pi
    CHECK(z.at(2) == 0.0);                                                 // sin(pi) = 0
    CHECK(z.at(-1) == z.at(1));
}

TEST_CASE("zeta_n formula instantiation at n=2") {
    for (auto [lambda, e] : {std::pair{1.0, 0.7}, {2.0, -1.3}, {0.5, 3.0}}) {
        ZetaCoefficients z = zeta_coeffs(lambda, e, 4);
        double g = lyapunov(lambda, e), k = ids(lambda, e);
        CHECK(z.at(2) ==
              doctest::Approx(std::exp(-2 * g) * std::sin(2 * M_PI * k) / (2 * M_PI))
                  .epsilon(1e-13));
    }
}

TEST_CASE("zeta envelope and evenness") {
    for (auto [lambda, e] : {std::pair{1.0, 0.0}, {1.0, 0.7}, {2.0, -1.3}}) {
        ZetaCoefficients z = zeta_coeffs(lambda, e, 200);
        for (long long n = 1; n <= 200; ++n) {
            CHECK(std::fabs(z.at(n)) <=
                  std::exp(-z.gamma * static_cast<double>(n)) / (M_PI * static_cast<double>(n)) *
                      (1 + 1e-12));
            CHECK(z.at(-n) == z.at(n));
        }
    }
}

TEST_CASE("zeta_function branch against q(x) directly") {
    for (auto [lambda, e] : {std::pair{1.0, 0.0}, {1.0, 0.7}, {2.0, -1.3}, {0.3, 5.0}}) {
        for (int i = 0; i < 100; ++i) {
            double x = (i + 0.5) / 100.0;
            double zx = zeta_function(lambda, e, x);
            CHECK(zx > -0.5);
            CHECK(zx < 0.5);
            double w = 2.0 * std::cos(2 * M_PI * x) - e;
            std::complex<double> q = -(std::complex<double>(w, -lambda)) /
                                     std::complex<double>(w, lambda);
            CHECK(std::abs(q) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(std::exp(std::complex<double>(0, -2 * M_PI * zx)) - q) <= 1e-13);
        }
    }
}

TEST_CASE("zeta quadrature cross-check") {
    // rectangle rule on the analytic periodic zeta(x): coefficients to 1e-8
    const double lambda = 1.0, e = 0.7;
    const int M = 4096;
    std::vector<double> zx(M);
    for (int g = 0; g < M; ++g) zx[g] = zeta_function(lambda, e, static_cast<double>(g) / M);
    ZetaCoefficients z = zeta_coeffs(lambda, e, 50);

    double mean = 0;
    for (double v : zx) mean += v;
    mean /= M;
    CHECK(mean == doctest::Approx(z.zeta0).epsilon(1e-10)); // integral = k - 1/2

    for (long long n = -50; n <= 50; ++n) {
        if (n == 0) continue;
        double re = 0, im = 0;
        for (int g = 0; g < M; ++g) {
            double ang = 2 * M_PI * static_cast<double>(n) * g / M;
            re += zx[g] * std::cos(ang);
            im += zx[g] * std::sin(ang);
        }
        CHECK(std::hypot(re / M - z.at(n), im / M) <= 1e-8);
    }
}
