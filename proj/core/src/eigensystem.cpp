#include "maryland/eigensystem.hpp"

#include "maryland/errors.hpp"
#include "maryland/trig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maryland {

namespace {

// Deepest level at which the delta trace is computable: needs q_n exact and
// ln q_{n+1} known.
int usable_index_depth(const FrequencyCF& alpha) {
    const int K = alpha.exact_levels();
    return alpha.has_virtual_tail ? K : K - 1;
}

double frac_unit(const Rational& x) { return to_double(frac(x)); }

} // namespace

std::vector<EigenRecord> quantized_eigenvalues(double lambda, const FrequencyCF& alpha,
                                               const Phase& theta, long long m_lo,
                                               long long m_hi, const EigenOptions& opt) {
    if (!(lambda > 0)) throw validation_error("quantized_eigenvalues: lambda must be positive");
    if (m_lo > m_hi) throw validation_error("quantized_eigenvalues: empty m range");

    int depth = opt.index_depth > 0 ? opt.index_depth : usable_index_depth(alpha);
    depth = std::min(depth, alpha.declared_depth);
    IndexEstimate dh = delta_index(alpha, theta, depth, opt.index_window);

    const Rational a = alpha.value();
    std::vector<EigenRecord> out;
    for (long long m = m_lo; m <= m_hi; ++m) {
        Rational t = frac(theta.theta - Rational(1, 2) + static_cast<long>(m) * a);
        if (t == 0)
            throw validation_error("quantized_eigenvalues: degenerate target at m = " +
                                   std::to_string(m) + " (theta on the excluded lattice)");
        EigenRecord rec;
        rec.m = m;
        rec.k_target = t;
        rec.e = ids_inverse(lambda, to_double(t), opt.tol);
        rec.gamma = lyapunov(lambda, rec.e);
        rec.delta_hat = dh.value;
        rec.predicted_pp = rec.gamma > rec.delta_hat;
        out.push_back(std::move(rec));
    }
    return out;
}

double default_target_decay(double gamma, double delta_hat) {
    return 0.5 * std::min(0.5 * gamma, gamma - delta_hat);
}

double PsiSeries::at_real(double x) const {
    double s = 0;
    for (const auto& [k, v] : coeffs) {
        if (k <= 0) continue;
        double ang = -2.0 * M_PI * static_cast<double>(k) * x;
        s += 2.0 * (v.real() * std::cos(ang) - v.imag() * std::sin(ang));
    }
    return s;
}

PsiSeries solve_cohomological(const ZetaCoefficients& zeta, const FrequencyCF& alpha, int K,
                              double divisor_floor, bool drop_zero_mode, double target_decay) {
    if (K < 1) throw validation_error("solve_cohomological: K must be >= 1");
    if (!(target_decay > 0))
        throw small_divisor_error(0, 0.0, 0.0,
                                  "no positive decay target: gamma <= delta breaks the "
                                  "localization hypothesis");

    PsiSeries psi;
    psi.truncation = K;
    psi.drop_zero_mode = drop_zero_mode;
    psi.target_decay = target_decay;
    psi.min_divisor = 2.0;

    const Rational a = alpha.value();
    for (long long k = 1; k <= K; ++k) {
        Rational ka = frac(static_cast<long>(k) * a);
        if (ka == 0)
            throw precision_exhausted_error(
                "solve_cohomological: k alpha is an exact integer for the expanded "
                "frequency; expand alpha deeper than the series truncation");
        double t = to_double(ka);
        // e^{-2 pi i k alpha} - 1
        std::complex<double> div(std::cos(2.0 * M_PI * t) - 1.0, -std::sin(2.0 * M_PI * t));
        double dabs = 2.0 * std::fabs(sin_pi(t));
        psi.min_divisor = std::min(psi.min_divisor, dabs);

        std::complex<double> pk = zeta.at(k) / div;
        double bound = std::exp(-target_decay * static_cast<double>(k));
        if (std::abs(pk) > bound)
            throw small_divisor_error(k, std::abs(pk), bound,
                                      "small divisor at k = " + std::to_string(k) +
                                          " (|divisor| = " + std::to_string(dabs) +
                                          "): psi exceeds the decay target");
        if (dabs < divisor_floor) psi.divisors_below_floor = true;
        psi.coeffs[k] = pk;
        psi.coeffs[-k] = std::conj(pk);
    }
    return psi;
}

Eigenfunction build_eigenfunction(double lambda, const FrequencyCF& alpha, const Phase& theta,
                                  const EigenRecord& record, const PsiSeries& psi,
                                  long long half_width, const BuildOptions& opt) {
    const long long N = half_width;
    if (N < 4 * static_cast<long long>(psi.truncation))
        throw validation_error("build_eigenfunction: half width below 4x series truncation");

    const long long size = 2 * N + 1;
    const int K = psi.truncation;

    // c_hat(x) = e^{-2 pi i m x} e^{G+} e^{G-} with G+- the one-sided halves
    // of -2 pi i psi(x) in powers of w = e^{-2 pi i x}.  The exponentials are
    // polynomials' exponentials, so their Taylor coefficients follow the
    // triangular recurrence j A_j = sum_k k G_k A_{j-k}; unlike a sampled
    // DFT this keeps full relative accuracy down to the underflow floor,
    // which the decay-rate fit needs.
    const long long J = 2 * N + 4 * K; // series cut; coefficients decay superexponentially
    std::vector<std::complex<double>> gp(static_cast<std::size_t>(K + 1)),
        gm(static_cast<std::size_t>(K + 1));
    for (int k = 1; k <= K; ++k) {
        auto it = psi.coeffs.find(k);
        auto itm = psi.coeffs.find(-k);
        std::complex<double> pk = it != psi.coeffs.end() ? it->second : 0.0;
        std::complex<double> pmk = itm != psi.coeffs.end() ? itm->second : 0.0;
        gp[static_cast<std::size_t>(k)] = std::complex<double>(0, -2.0 * M_PI) * pk;
        gm[static_cast<std::size_t>(k)] = std::complex<double>(0, -2.0 * M_PI) * pmk;
    }
    auto exp_series = [&](const std::vector<std::complex<double>>& g) {
        std::vector<std::complex<double>> a(static_cast<std::size_t>(J + 1), {0, 0});
        a[0] = 1.0;
        for (long long j = 1; j <= J; ++j) {
            std::complex<double> s(0, 0);
            for (int k = 1; k <= std::min<long long>(K, j); ++k)
                s += static_cast<double>(k) * g[static_cast<std::size_t>(k)] *
                     a[static_cast<std::size_t>(j - k)];
            a[static_cast<std::size_t>(j)] = s / static_cast<double>(j);
        }
        return a;
    };
    std::vector<std::complex<double>> ap = exp_series(gp), am = exp_series(gm);

    // F_n = sum_l A_{n+l} B_l (n >= 0), F_{-n} = sum_l A_l B_{n+l}; then
    // c_n = F_{n - m}.
    auto f_coeff = [&](long long n) {
        std::complex<double> s(0, 0);
        if (n >= 0) {
            for (long long l = 0; n + l <= J; ++l)
                s += ap[static_cast<std::size_t>(n + l)] * am[static_cast<std::size_t>(l)];
        } else {
            for (long long l = 0; -n + l <= J; ++l)
                s += ap[static_cast<std::size_t>(l)] * am[static_cast<std::size_t>(-n + l)];
        }
        return s;
    };
    std::vector<std::complex<double>> c(static_cast<std::size_t>(size));
    for (long long n = -N; n <= N; ++n)
        c[static_cast<std::size_t>(n + N)] = f_coeff(n - record.m);

    // unit-modulus diagnostic: |c_hat| = 1, via Parseval over the window and
    // pointwise reconstruction on a coarse grid
    double unit_dev = 0;
    {
        double parseval = 0;
        for (const auto& v : c) parseval += std::norm(v);
        unit_dev = std::fabs(parseval - 1.0);
        for (int g = 0; g < 64; ++g) {
            double x = (static_cast<double>(g) + 0.31) / 64.0;
            std::complex<double> v(0, 0);
            for (long long n = -N; n <= N; ++n)
                v += c[static_cast<std::size_t>(n + N)] *
                     std::exp(std::complex<double>(0, -2.0 * M_PI * static_cast<double>(n) * x));
            unit_dev = std::max(unit_dev, std::fabs(std::abs(v) - 1.0));
        }
    }

    // tridiagonal solve: (lambda + i e) u_n - i u_{n+1} - i u_{n-1} = lambda c_n
    const std::complex<double> diag(lambda, record.e);
    const std::complex<double> off(0, -1);
    std::vector<std::complex<double>> dp(static_cast<std::size_t>(size));
    std::vector<std::complex<double>> rp(static_cast<std::size_t>(size));
    double growth = 0;
    dp[0] = diag;
    rp[0] = lambda * c[0];
    for (long long i = 1; i < size; ++i) {
        std::complex<double> w = off / dp[static_cast<std::size_t>(i - 1)];
        growth = std::max(growth, std::abs(w));
        if (growth > opt.growth_bound)
            throw ill_conditioned_error("build_eigenfunction: elimination growth factor " +
                                        std::to_string(growth));
        dp[static_cast<std::size_t>(i)] = diag - w * off;
        rp[static_cast<std::size_t>(i)] =
            lambda * c[static_cast<std::size_t>(i)] - w * rp[static_cast<std::size_t>(i - 1)];
    }
    Eigenfunction fn;
    fn.half_width = N;
    fn.u.assign(static_cast<std::size_t>(size), {0, 0});
    fn.u[static_cast<std::size_t>(size - 1)] = rp[static_cast<std::size_t>(size - 1)] /
                                               dp[static_cast<std::size_t>(size - 1)];
    for (long long i = size - 2; i >= 0; --i)
        fn.u[static_cast<std::size_t>(i)] =
            (rp[static_cast<std::size_t>(i)] - off * fn.u[static_cast<std::size_t>(i + 1)]) /
            dp[static_cast<std::size_t>(i)];

    // Residual of the actual difference operator on the inner half window.
    // A site whose phase sits inside the pole guard carries a potential
    // beyond double range; there the construction degenerates to the
    // Dirichlet condition u_n = 0 (adding the two Cayley relations at an
    // exact pole gives 2 u_n = 0), so such sites contribute |u_n| instead
    // of an equation residual.
    const Rational a = alpha.value();
    double rnum = 0, rden = 0, pole_u = 0;
    for (long long n = -N / 2; n <= N / 2; ++n) {
        double site = frac_unit(theta.theta + static_cast<long>(n) * a);
        double cs = cos_pi(site);
        std::complex<double> un = fn.u[static_cast<std::size_t>(n + N)];
        rden += std::norm(un);
        if (std::fabs(cs) <= opt.pole_guard) {
            pole_u = std::max(pole_u, std::abs(un));
            rnum += std::norm(un);
            continue;
        }
        double pot = lambda * sin_pi(site) / cs;
        std::complex<double> hu = fn.u[static_cast<std::size_t>(n + 1 + N)] +
                                  fn.u[static_cast<std::size_t>(n - 1 + N)] +
                                  (pot - record.e) * un;
        rnum += std::norm(hu);
    }
    fn.residual = rden > 0 ? std::sqrt(rnum / rden) : std::numeric_limits<double>::infinity();
    fn.diag.pole_site_u = pole_u;

    // decay-rate fit on N/4 <= |n| <= N/2
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long long cnt = 0;
    for (long long n = -N; n <= N; ++n) {
        long long an = std::llabs(n);
        if (an < N / 4 || an > N / 2) continue;
        double mag = std::abs(fn.u[static_cast<std::size_t>(n + N)]);
        if (!(mag > 0) || !std::isfinite(mag)) continue;
        double x = static_cast<double>(an), y = std::log(mag);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    fn.decay_rate = cnt >= 2 ? (static_cast<double>(cnt) * sxy - sx * sy) /
                                   (static_cast<double>(cnt) * sxx - sx * sx)
                             : 0.0;

    double peak = 0, edge = 0;
    for (long long n = -N; n <= N; ++n)
        peak = std::max(peak, std::abs(fn.u[static_cast<std::size_t>(n + N)]));
    for (long long n : {-N, -N + 1, N - 1, N})
        edge = std::max(edge, std::abs(fn.u[static_cast<std::size_t>(n + N)]));
    fn.diag.unit_modulus_dev = unit_dev;
    fn.diag.growth_factor = growth;
    fn.diag.tail_ratio = peak > 0 ? edge / peak : 0.0;
    return fn;
}

TkConditionReport check_tk_condition(double lambda, double e, const FrequencyCF& alpha,
                                     const Phase& theta, double t_decay, int K, int levels,
                                     const ZetaCoefficients* zeta_override) {
    double gamma = lyapunov(lambda, e);
    if (!(t_decay > 0 && t_decay <= 0.5 * gamma))
        throw validation_error("check_tk_condition: t_decay must lie in (0, gamma/2]");
    if (K < 1) throw validation_error("check_tk_condition: K must be >= 1");

    Rational k_exact;
    {
        double kd = ids(lambda, e);
        k_exact = Rational(kd); // exact binary value of the double
    }
    TkSequence tk = build_tk(alpha, k_exact, levels);
    ZetaCoefficients zeta = zeta_override ? *zeta_override : zeta_coeffs(lambda, e, K);
    const Rational a = alpha.value();
    const Rational w = k_exact - Rational(1, 2) - theta.theta;

    TkConditionReport rep;
    for (const auto& lv : tk.levels) {
        TkLevelReport lr;
        lr.n = lv.n;
        lr.max_dist_alpha = lv.max_dist_alpha;
        double dqw = to_double(dist_to_int(Rational(lv.q) * w));
        lr.max_lattice_dist = std::min(0.5, to_double(lv.block_length) * dqw);
        rep.levels.push_back(lr);
    }

    double sum = 0;
    std::vector<double> increments(static_cast<std::size_t>(K), 0.0);
    for (long long j = 1; j <= K; ++j) {
        double denom = 2.0 * std::fabs(sin_pi(to_double(frac(static_cast<long>(j) * a))));
        if (denom == 0)
            throw precision_exhausted_error("check_tk_condition: j alpha integer at the "
                                            "expanded resolution; expand alpha deeper");
        double sup_num = 0;
        for (const auto& lv : tk.levels) {
            double arg = std::min(0.5, static_cast<double>(j) * lv.max_dist_alpha);
            sup_num = std::max(sup_num, 2.0 * std::fabs(sin_pi(arg)));
        }
        double term = sup_num / denom * std::fabs(zeta.at(j)) *
                      std::exp(t_decay * static_cast<double>(j));
        double inc = 2.0 * term; // +j and -j contribute equally in magnitude
        increments[static_cast<std::size_t>(j - 1)] = inc;
        sum += inc;
        rep.partial_sums.push_back(sum);
    }
    double tail = 0;
    for (long long j = std::max<long long>(1, K - 9); j <= K; ++j)
        tail = std::max(tail, increments[static_cast<std::size_t>(j - 1)]);
    rep.tail_increment = tail;
    rep.numerically_cauchy = tail < 1e-8;
    return rep;
}

namespace {

SupportTrace support_trace_impl(const FrequencyCF& alpha, const Rational& x, int levels) {
    SupportTrace tr;
    const int top = std::min(levels, alpha.exact_levels());
    for (int n = 1; n <= top; ++n)
        tr.values.push_back(to_double(dist_to_int(Rational(alpha.q[static_cast<std::size_t>(n)]) * x)));
    const int m = static_cast<int>(tr.values.size());
    if (m >= 2) {
        int w = std::min(3, m);
        bool ok = true;
        for (int i = m - w; i < m; ++i) {
            if (tr.values[static_cast<std::size_t>(i)] > 1e-3) ok = false;
            if (i > m - w &&
                tr.values[static_cast<std::size_t>(i)] >
                    tr.values[static_cast<std::size_t>(i - 1)] * (1.0 + 1e-12))
                ok = false;
        }
        tr.in_support = ok;
    }
    return tr;
}

} // namespace

SupportTrace support_membership(double lambda, const FrequencyCF& alpha, const Phase& theta,
                                double e, int levels) {
    Rational k(ids(lambda, e));
    return support_trace_impl(alpha, k - theta.theta - Rational(1, 2), levels);
}

SupportTrace support_membership(const FrequencyCF& alpha, const Phase& theta,
                                const Rational& k_exact, int levels) {
    return support_trace_impl(alpha, k_exact - theta.theta - Rational(1, 2), levels);
}

} // namespace maryland
