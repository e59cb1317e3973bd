#include "maryland/cocycles.hpp"

#include "maryland/closed_forms.hpp"
#include "maryland/errors.hpp"
#include "maryland/parallel.hpp"
#include "maryland/trig.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace maryland {

double CocycleMatrix::entry_norm() const {
    double best = 0;
    for (const auto& e : m) best = std::max(best, std::abs(e));
    return best;
}

double CocycleMatrix::frobenius() const {
    double s = 0;
    for (const auto& e : m) s += std::norm(e);
    return std::sqrt(s);
}

double CocycleMatrix::op_norm() const {
    double f2 = 0;
    for (const auto& e : m) f2 += std::norm(e);
    double d = std::abs(det());
    double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

void CocycleMatrix::renormalize() {
    double s = entry_norm();
    if (s <= 0 || !std::isfinite(s))
        throw singularity_error(-1, s, "cocycle product degenerated (zero or non-finite entries)");
    for (auto& e : m) e /= s;
    log_scale += std::log(s);
}

CocycleMatrix operator*(const CocycleMatrix& L, const CocycleMatrix& R) {
    CocycleMatrix out;
    out.m[0] = L.m[0] * R.m[0] + L.m[1] * R.m[2];
    out.m[1] = L.m[0] * R.m[1] + L.m[1] * R.m[3];
    out.m[2] = L.m[2] * R.m[0] + L.m[3] * R.m[2];
    out.m[3] = L.m[2] * R.m[1] + L.m[3] * R.m[3];
    out.log_scale = L.log_scale + R.log_scale;
    out.renormalize();
    return out;
}

std::array<cplx, 2> CocycleMatrix::operator*(const std::array<cplx, 2>& v) const {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

CocycleMatrix CocycleMatrix::inverse() const {
    cplx dt = det();
    if (std::abs(dt) == 0) throw singularity_error(-1, 0.0, "cocycle matrix not invertible");
    CocycleMatrix out;
    out.m = {m[3] / dt, -m[1] / dt, -m[2] / dt, m[0] / dt};
    out.log_scale = -log_scale;
    out.renormalize();
    return out;
}

cplx CocycleMatrix::apply_det() const { return det() * std::exp(2.0 * log_scale); }

CocycleMatrix step_A(double lambda, double e, double theta_point, double epsilon,
                     const CocycleOptions& opt) {
    CocycleMatrix B;
    if (epsilon == 0.0) {
        double c = cos_pi(theta_point);
        if (std::fabs(c) <= opt.singularity_guard)
            throw singularity_error(0, std::fabs(c), "cos pi theta inside singularity guard");
        double t = sin_pi(theta_point) / c;
        if (!std::isfinite(t))
            throw singularity_error(0, std::fabs(c), "tan pi theta not finite");
        B.m = {cplx(e - lambda * t), cplx(-1), cplx(1), cplx(0)};
    } else {
        cplx z(theta_point, epsilon);
        cplx c = cos_pi(z);
        if (std::abs(c) <= opt.singularity_guard)
            throw singularity_error(0, std::abs(c), "cos pi z inside singularity guard");
        cplx t = sin_pi(z) / c;
        B.m = {e - lambda * t, cplx(-1), cplx(1), cplx(0)};
    }
    return B;
}

CocycleMatrix step_D(double lambda, double e, double theta_point, double epsilon) {
    CocycleMatrix B;
    if (epsilon == 0.0) {
        double c = cos_pi(theta_point), s = sin_pi(theta_point);
        B.m = {cplx(e * c - lambda * s), cplx(-c), cplx(c), cplx(0)};
    } else {
        cplx z(theta_point, epsilon);
        cplx c = cos_pi(z), s = sin_pi(z);
        B.m = {e * c - lambda * s, -c, c, cplx(0)};
    }
    return B;
}

namespace {

CocycleMatrix forward_product(CocycleKind kind, double lambda, double e, double alpha,
                              double theta0, double epsilon, long long n,
                              const CocycleOptions& opt) {
    CocycleMatrix acc = CocycleMatrix::identity();
    for (long long j = 0; j < n; ++j) {
        double x = theta0 + static_cast<double>(j) * alpha;
        try {
            CocycleMatrix B = (kind == CocycleKind::A) ? step_A(lambda, e, x, epsilon, opt)
                                                       : step_D(lambda, e, x, epsilon);
            acc = B * acc;
        } catch (singularity_error& err) {
            throw singularity_error(j, err.cos_abs,
                                    "singularity guard tripped at orbit index " + std::to_string(j));
        }
    }
    return acc;
}

} // namespace

CocycleMatrix product(CocycleKind kind, double lambda, double e, double alpha,
                      double theta0, double epsilon, long long n, const CocycleOptions& opt) {
    if (n >= 0) return forward_product(kind, lambda, e, alpha, theta0, epsilon, n, opt);
    long long mlen = -n;
    CocycleMatrix P = forward_product(kind, lambda, e, alpha,
                                      theta0 - static_cast<double>(mlen) * alpha, epsilon, mlen, opt);
    return P.inverse();
}

LEEstimate le_numeric(CocycleKind kind, double lambda, double e, double alpha,
                      double epsilon, long long n, int phase_samples, std::uint64_t seed,
                      const CocycleOptions& opt, int threads) {
    if (n < 1000) throw validation_error("le_numeric: n must be >= 1000");
    if (phase_samples < 1) throw validation_error("le_numeric: need at least one phase");

    LEEstimate est;
    est.steps = n;
    est.phase_samples = phase_samples;
    est.per_phase.assign(static_cast<std::size_t>(phase_samples), 0.0);

    parallel_for(0, phase_samples, threads, [&](int i) {
        // per-sample generator so resampling stays deterministic under threading
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int attempt = 0;; ++attempt) {
            if (attempt > opt.resample_limit)
                throw singularity_error(-1, 0.0, "le_numeric: resample limit exhausted");
            double theta = unif(rng);
            try {
                CocycleMatrix P = product(kind, lambda, e, alpha, theta, epsilon, n, opt);
                est.per_phase[static_cast<std::size_t>(i)] = P.log_norm() / static_cast<double>(n);
                break;
            } catch (const singularity_error&) {
                continue; // redraw the phase
            }
        }
    });

    double mean = 0;
    for (double v : est.per_phase) mean += v;
    mean /= phase_samples;
    double var = 0;
    for (double v : est.per_phase) var += (v - mean) * (v - mean);
    est.value = mean;
    est.stderr_ = phase_samples > 1
                      ? std::sqrt(var / (static_cast<double>(phase_samples) *
                                         (phase_samples - 1.0)))
                      : 0.0;
    return est;
}

namespace {

// Nodes/weights of n-point Gauss-Legendre on [-1,1], Newton on P_n.
void gauss_legendre(int n, std::vector<double>& xs, std::vector<double>& ws) {
    xs.resize(static_cast<std::size_t>(n));
    ws.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        xs[static_cast<std::size_t>(i)] = x;
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        ws[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

template <class F>
double gl_integrate(const F& f, double a, double b, const std::vector<double>& xs,
                    const std::vector<double>& ws) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * f(mid + half * xs[i]);
    return s * half;
}

} // namespace

double i_epsilon(double epsilon, int quad_points) {
    if (quad_points < 64) throw validation_error("i_epsilon: quad_points must be >= 64");
    const double s = std::fabs(std::sinh(M_PI * epsilon));
    const double s2 = s * s;
    // |cos pi(x+i eps)|^2 = cos^2 pi x + sinh^2 pi eps
    auto g = [&](double x) { double c = cos_pi(x); return 0.5 * std::log(c * c + s2); };

    std::vector<double> xs, ws;
    int nodes = std::clamp(quad_points / 8, 16, 64);
    gauss_legendre(nodes, xs, ws);

    // dyadic panels from 0 toward the near-singular point x = 1/2
    int levels = 1;
    while (levels < 52 && std::ldexp(1.0, -(levels + 1)) > std::max(s / 8.0, 1e-15)) ++levels;
    double total = 0;
    double left = 0.0;
    for (int j = 1; j <= levels; ++j) {
        double right = 0.5 - std::ldexp(1.0, -(j + 1));
        total += gl_integrate(g, left, right, xs, ws);
        left = right;
    }
    // analytic tail over u in [0, h], u = 1/2 - x, with sin pi u ~ pi u
    double h = 0.5 - left;
    double tail;
    if (s == 0.0) {
        tail = h * std::log(M_PI * h) - h;
    } else {
        tail = 0.5 * h * std::log(M_PI * M_PI * h * h + s2) - h + (s / M_PI) * std::atan(M_PI * h / s);
    }
    // curvature correction, smooth on the tail
    auto corr = [&](double u) {
        double su = sin_pi(u);
        double base = M_PI * M_PI * u * u + s2;
        if (base == 0.0) return 0.0;
        return 0.5 * std::log((su * su + s2) / base);
    };
    tail += gl_integrate(corr, 0.0, h, xs, ws);
    return 2.0 * (total + tail);
}

std::vector<AccelSegment> acceleration(CocycleKind kind, double lambda, double e, double alpha,
                                       const std::vector<double>& eps_grid, long long n,
                                       int phase_samples, std::uint64_t seed,
                                       const CocycleOptions& opt, int threads) {
    if (eps_grid.size() < 3) throw validation_error("acceleration: need at least 3 grid points");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (eps_grid[i] < 0) throw validation_error("acceleration: grid must be nonnegative");
        if (i > 0 && eps_grid[i] <= eps_grid[i - 1])
            throw validation_error("acceleration: grid must be strictly increasing");
    }
    std::vector<double> les(eps_grid.size());
    for (std::size_t i = 0; i < eps_grid.size(); ++i)
        les[i] = le_numeric(kind, lambda, e, alpha, eps_grid[i], n, phase_samples,
                            seed + static_cast<std::uint64_t>(i), opt, threads)
                     .value;
    std::vector<AccelSegment> out;
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i) {
        AccelSegment seg;
        seg.eps_lo = eps_grid[i];
        seg.eps_hi = eps_grid[i + 1];
        seg.le_lo = les[i];
        seg.le_hi = les[i + 1];
        seg.slope = (les[i + 1] - les[i]) / (seg.eps_hi - seg.eps_lo) / (2.0 * M_PI);
        seg.nearest_half_int = std::round(seg.slope * 2.0) / 2.0;
        seg.residual = std::fabs(seg.slope - seg.nearest_half_int);
        out.push_back(seg);
    }
    return out;
}

double op_norm(const std::array<double, 4>& M) {
    double f2 = M[0] * M[0] + M[1] * M[1] + M[2] * M[2] + M[3] * M[3];
    double dt = M[0] * M[3] - M[1] * M[2];
    double disc = std::max(0.0, f2 * f2 - 4.0 * dt * dt);
    return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

namespace {

std::array<double, 4> mul2(const std::array<double, 4>& L, const std::array<double, 4>& R) {
    return {L[0] * R[0] + L[1] * R[2], L[0] * R[1] + L[1] * R[3],
            L[2] * R[0] + L[3] * R[2], L[2] * R[1] + L[3] * R[3]};
}

double norm2v(const std::array<cplx, 2>& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

std::array<cplx, 2> apply2(const std::array<double, 4>& M, const std::array<cplx, 2>& v) {
    return {M[0] * v[0] + M[1] * v[1], M[2] * v[0] + M[3] * v[1]};
}

} // namespace

double gordon_three_point(const std::array<double, 4>& B, const std::array<cplx, 2>& x) {
    double dt = B[0] * B[3] - B[1] * B[2];
    if (std::fabs(dt - 1.0) > 1e-9)
        throw validation_error("gordon_three_point: matrix must be unimodular");
    if (std::fabs(norm2v(x) - 1.0) > 1e-9)
        throw validation_error("gordon_three_point: x must be a unit vector");
    std::array<double, 4> Binv = {B[3], -B[1], -B[2], B[0]}; // det = 1
    auto bx = apply2(B, x);
    auto b2x = apply2(B, bx);
    auto bix = apply2(Binv, x);
    return std::max({norm2v(b2x), norm2v(bx), norm2v(bix)});
}

PerturbationReport perturbation_bound_check(const std::vector<std::array<double, 4>>& A_seq,
                                            const std::vector<std::array<double, 4>>& B_seq,
                                            double C, double d) {
    if (A_seq.size() != B_seq.size())
        throw validation_error("perturbation_bound_check: sequence lengths differ");
    const std::size_t n = A_seq.size();
    PerturbationReport rep;

    rep.hypothesis_ok = true;
    for (std::size_t j = 0; j < n && rep.hypothesis_ok; ++j) {
        std::array<double, 4> acc = {1, 0, 0, 1};
        for (std::size_t l = 1; j + l <= n; ++l) {
            acc = mul2(A_seq[j + l - 1], acc);
            if (op_norm(acc) > C * std::exp(d * static_cast<double>(l)) * (1.0 + 1e-12)) {
                rep.hypothesis_ok = false;
                break;
            }
        }
    }

    std::array<double, 4> pa = {1, 0, 0, 1}, pab = {1, 0, 0, 1};
    double prod_rhs = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        pa = mul2(A_seq[j], pa);
        std::array<double, 4> s = A_seq[j];
        for (int t = 0; t < 4; ++t) s[t] += B_seq[j][t];
        pab = mul2(s, pab);
        prod_rhs *= 1.0 + C * std::exp(-d) * op_norm(B_seq[j]);
    }
    std::array<double, 4> diff;
    for (int t = 0; t < 4; ++t) diff[t] = pab[t] - pa[t];
    rep.lhs = op_norm(diff);
    rep.rhs = C * std::exp(d * static_cast<double>(n)) * (prod_rhs - 1.0);
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
    return rep;
}

CosProductReport cos_product_bound(const FrequencyCF& alpha, const Phase& theta,
                                   int level_index, double delta_hat, double epsilon) {
    const int K = alpha.exact_levels();
    if (level_index < 1 || level_index > K)
        throw validation_error("cos_product_bound: level outside exact range");
    const BigInt& qn = alpha.q[static_cast<std::size_t>(level_index)];
    if (qn > 1000000) throw validation_error("cos_product_bound: q_n exceeds desk scale 10^6");

    CosProductReport rep;
    rep.level = level_index;
    rep.q = qn;
    const long long q = qn.get_si();
    const double th = to_double(theta.theta);
    const double a = alpha.value_d();

    double min_abs = 2.0;
    long long l0 = 0;
    std::vector<double> logs(static_cast<std::size_t>(q));
    for (long long j = 0; j < q; ++j) {
        double c = std::fabs(cos_pi(th + static_cast<double>(j) * a));
        if (c < min_abs) { min_abs = c; l0 = j; }
        logs[static_cast<std::size_t>(j)] = std::log(c);
    }
    rep.min_site = l0;
    double sum_all = 0, sum_excl = 0;
    for (long long j = 0; j < q; ++j) {
        sum_all += logs[static_cast<std::size_t>(j)];
        if (j != l0) sum_excl += logs[static_cast<std::size_t>(j)];
    }
    rep.sum_excl_min = sum_excl + static_cast<double>(q - 1) * M_LN2;
    rep.c_empirical = std::fabs(rep.sum_excl_min) / std::log(static_cast<double>(q));
    rep.prod_log = sum_all;

    // product lower bound at the level: e^{(delta - ln2 - eps) q} / q_{next}
    double log_q_next = alpha.log_q(level_index + 1);
    rep.bound_log = (delta_hat - M_LN2 - epsilon) * static_cast<double>(q) - log_q_next;
    rep.product_bound_holds = rep.prod_log >= rep.bound_log;
    return rep;
}

namespace {

double log_product_diff(const CocycleMatrix& P0, const CocycleMatrix& P1) {
    double s = std::max(P0.log_scale, P1.log_scale);
    double f0 = std::exp(P0.log_scale - s), f1 = std::exp(P1.log_scale - s);
    double dn = 0;
    for (int i = 0; i < 4; ++i)
        dn = std::max(dn, std::abs(P0.m[static_cast<std::size_t>(i)] * f0 -
                                   P1.m[static_cast<std::size_t>(i)] * f1));
    return s + std::log(dn);
}

} // namespace

PeriodicApproxReport periodic_approximation_check(double lambda, double e,
                                                  const FrequencyCF& alpha, const Phase& theta,
                                                  int level_index, double delta_hat,
                                                  double epsilon_margin,
                                                  const CocycleOptions& opt) {
    const int K = alpha.exact_levels();
    if (level_index < 1 || level_index > K)
        throw validation_error("periodic_approximation_check: level outside exact range");
    const BigInt& qt = alpha.q[static_cast<std::size_t>(level_index)];
    if (qt > 100000)
        throw validation_error("periodic_approximation_check: q exceeds desk scale 10^5");

    PeriodicApproxReport rep;
    rep.q = qt;
    const long long q = qt.get_si();
    const Rational a = alpha.value();
    const double ad = to_double(a);
    const double t0 = to_double(theta.theta);
    const double t1 = to_double(frac(theta.theta - Rational(qt) * a)); // exact reduction
    const double tc = t0 - 0.5 / static_cast<double>(q);

    CocycleMatrix P0 = product(CocycleKind::A, lambda, e, ad, t0, 0.0, q, opt);
    CocycleMatrix P1 = product(CocycleKind::A, lambda, e, ad, t1, 0.0, q, opt);
    CocycleMatrix Pc = product(CocycleKind::A, lambda, e, ad, tc, 0.0, q, opt);

    rep.log_norm = P0.log_norm();
    rep.log_diff = log_product_diff(P0, P1);
    rep.log_diff_control = log_product_diff(P0, Pc);
    double gamma = lyapunov(lambda, e);
    rep.decay_log = -(delta_hat - gamma - epsilon_margin) * static_cast<double>(q);
    // the orbit phases carry ~ q eps relative noise, amplified by the product
    rep.floor_log = std::log(static_cast<double>(q) * 0x1p-52) +
                    std::max(P0.log_norm(), P1.log_norm());
    rep.near_periodic = rep.log_diff <= std::max(rep.decay_log, rep.floor_log) + std::log(1e3);
    return rep;
}

PartialInverseReport partial_inverse_norm_check(double lambda, double e,
                                                const FrequencyCF& alpha, const Phase& theta,
                                                int level_index, double epsilon_margin,
                                                const CocycleOptions& opt) {
    const int K = alpha.exact_levels();
    if (level_index < 1 || level_index > K)
        throw validation_error("partial_inverse_norm_check: level outside exact range");
    const BigInt& qn = alpha.q[static_cast<std::size_t>(level_index)];
    if (qn > 100000)
        throw validation_error("partial_inverse_norm_check: q_n exceeds desk scale 10^5");

    PartialInverseReport rep;
    rep.q = qn;
    const long long q = qn.get_si();
    const double th = to_double(theta.theta);
    const double a = alpha.value_d();

    double min_abs = 2.0;
    long long j0 = 0;
    for (long long j = 0; j < q; ++j) {
        double c = std::fabs(cos_pi(th + static_cast<double>(j) * a));
        if (c < min_abs) { min_abs = c; j0 = j; }
    }
    rep.j0 = j0;
    CocycleMatrix P = product(CocycleKind::A, lambda, e, a, th - static_cast<double>(q) * a,
                              0.0, j0, opt);
    rep.log_norm = P.log_norm();
    rep.bound_log = static_cast<double>(q) * (lyapunov(lambda, e) + epsilon_margin);
    rep.c_fit = std::exp(rep.log_norm - rep.bound_log);
    return rep;
}

} // namespace maryland
