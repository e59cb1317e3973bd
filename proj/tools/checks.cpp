#include "checks.hpp"

#include "maryland/arithmetics.hpp"
#include "maryland/closed_forms.hpp"
#include "maryland/cocycles.hpp"
#include "maryland/errors.hpp"
#include "maryland/trig.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace maryland::tools {

namespace {

using namespace maryland;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult check_i_epsilon() {
    double i0 = i_epsilon(0.0, 512);
    double ih = i_epsilon(0.5, 512);
    double e1 = std::fabs(i0 + M_LN2);
    double e2 = std::fabs(ih - (M_PI / 2.0 - M_LN2));
    double e3 = std::fabs(i_epsilon(0.3, 512) - i_epsilon(-0.3, 512));
    bool ok = e1 <= 1e-6 && e2 <= 1e-6 && e3 <= 1e-10;
    return {"i-epsilon", ok,
            "|I_0 + ln2| = " + fmt(e1) + ", |I_0.5 - (pi/2 - ln2)| = " + fmt(e2) +
                ", |I_0.3 - I_-0.3| = " + fmt(e3)};
}

double le_fixed_phase(CocycleKind kind, double lambda, double e, double alpha, double theta,
                      long long n, const CocycleOptions& opt) {
    CocycleMatrix P = product(kind, lambda, e, alpha, theta, 0.0, n, opt);
    return P.log_norm() / static_cast<double>(n);
}

CheckResult check_le_closed_form(const ChecksConfig& cfg, const FrequencyCF& golden) {
    CocycleOptions opt;
    opt.singularity_guard = cfg.guard;
    const double gamma = lyapunov(1.0, 0.0);
    double le;
    if (!cfg.theta.empty()) {
        le = le_fixed_phase(CocycleKind::A, 1.0, 0.0, golden.value_d(),
                            rational_from_decimal(cfg.theta).get_d(), cfg.n, opt);
    } else {
        le = le_numeric(CocycleKind::A, 1.0, 0.0, golden.value_d(), 0.0, cfg.n, 4, cfg.seed,
                        opt, cfg.threads)
                 .value;
    }
    double err = std::fabs(le - gamma);
    return {"le-closed-form", err <= 0.02,
            "|le - gamma| = " + fmt(err) + " at n = " + std::to_string(cfg.n)};
}

CheckResult check_split(const ChecksConfig& cfg, const FrequencyCF& golden) {
    CocycleOptions opt;
    opt.singularity_guard = cfg.guard;
    double la, ld;
    if (!cfg.theta.empty()) {
        double th = rational_from_decimal(cfg.theta).get_d();
        la = le_fixed_phase(CocycleKind::A, 1.0, 0.0, golden.value_d(), th, cfg.n, opt);
        ld = le_fixed_phase(CocycleKind::D, 1.0, 0.0, golden.value_d(), th, cfg.n, opt);
    } else {
        la = le_numeric(CocycleKind::A, 1.0, 0.0, golden.value_d(), 0.0, cfg.n, 4, cfg.seed, opt,
                        cfg.threads)
                 .value;
        ld = le_numeric(CocycleKind::D, 1.0, 0.0, golden.value_d(), 0.0, cfg.n, 4, cfg.seed, opt,
                        cfg.threads)
                 .value;
    }
    double err = std::fabs(la - ld - M_LN2);
    return {"regular-singular-split", err <= 0.03, "|le(A) - le(D) - ln2| = " + fmt(err)};
}

CheckResult check_gordon(const ChecksConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    double worst = 10.0;
    for (int s = 0; s < 100000; ++s) {
        std::array<double, 4> m;
        double det = 0;
        do {
            for (auto& v : m) v = nd(rng);
            det = m[0] * m[3] - m[1] * m[2];
        } while (std::fabs(det) < 1e-3);
        double sc = 1.0 / std::sqrt(std::fabs(det));
        for (auto& v : m) v *= sc;
        if (det < 0) { m[1] = -m[1]; m[3] = -m[3]; }
        std::array<cplx, 2> x = {cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng))};
        double nx = std::sqrt(std::norm(x[0]) + std::norm(x[1]));
        x[0] /= nx;
        x[1] /= nx;
        worst = std::min(worst, gordon_three_point(m, x));
    }
    return {"gordon", worst >= 0.25, "min over 1e5 samples = " + fmt(worst)};
}

CheckResult check_cos_product(const FrequencyCF& golden) {
    Phase th = make_phase(rational_from_decimal("0.1"), golden);
    bool ok = true;
    std::string detail;
    for (int level : {6, 12}) { // golden q_6 = 13, q_12 = 233
        CosProductReport rep = cos_product_bound(golden, th, level, 0.0, 0.2);
        ok = ok && rep.c_empirical <= 5.0;
        detail += "q=" + rep.q.get_str() + ": C = " + fmt(rep.c_empirical) + "  ";
    }
    return {"cos-product", ok, detail};
}

CheckResult check_zeta_quadrature() {
    const double lambda = 1.0, e = 0.7;
    const int M = 4096;
    ZetaCoefficients z = zeta_coeffs(lambda, e, 50);
    double worst = 0;
    std::vector<double> zx(M);
    for (int g = 0; g < M; ++g)
        zx[static_cast<std::size_t>(g)] =
            zeta_function(lambda, e, static_cast<double>(g) / M);
    for (int n = -50; n <= 50; ++n) {
        if (n == 0) continue;
        double re = 0, im = 0;
        for (int g = 0; g < M; ++g) {
            double ang = 2.0 * M_PI * n * static_cast<double>(g) / M;
            re += zx[static_cast<std::size_t>(g)] * std::cos(ang);
            im += zx[static_cast<std::size_t>(g)] * std::sin(ang);
        }
        re /= M;
        im /= M;
        worst = std::max(worst, std::hypot(re - z.at(n), im));
    }
    return {"zeta-quadrature", worst <= 1e-8, "max |quadrature - closed form| = " + fmt(worst)};
}

CheckResult check_periodic_approximation(const ChecksConfig& cfg) {
    FrequencyCF lv = cf_expand("cfgen:exp:1:4", 4);
    std::mt19937_64 rng(cfg.seed);
    Phase th = make_phase(frac(Rational(static_cast<long>(rng() >> 12), 1L << 52)), lv);
    IndexEstimate dh = delta_index(lv, th, 4);
    auto rep = periodic_approximation_check(1.0, 0.0, lv, th, 2, dh.value, 0.2);
    bool ok = rep.near_periodic && rep.log_diff <= rep.log_diff_control - 10.0;
    return {"periodic-approximation", ok,
            "shifted diff exp " + fmt(rep.log_diff) + " vs control " +
                fmt(rep.log_diff_control) + " (norm " + fmt(rep.log_norm) + ")"};
}

CheckResult check_cocycle_identity(const ChecksConfig& cfg, const FrequencyCF& golden) {
    CocycleOptions opt;
    opt.singularity_guard = cfg.guard;
    const double a = golden.value_d(), th = 0.13;
    const long long n = 10;
    CocycleMatrix F = product(CocycleKind::A, 1.0, 0.0, a, th, 0.0, n, opt);
    CocycleMatrix B = product(CocycleKind::A, 1.0, 0.0, a, th + n * a, 0.0, -n, opt);
    CocycleMatrix C = B * F;
    double dev = 0;
    double sc = std::exp(C.log_scale);
    const cplx id[4] = {1, 0, 0, 1};
    for (int i = 0; i < 4; ++i) dev = std::max(dev, std::abs(C.m[static_cast<std::size_t>(i)] * sc - id[i]));
    double det_dev = std::abs(F.apply_det() - 1.0);
    bool ok = dev <= 1e-8 && det_dev <= 1e-8;
    return {"cocycle-identity", ok,
            "|B_{-n} B_n - I| = " + fmt(dev) + ", |det - 1| = " + fmt(det_dev)};
}

} // namespace

std::vector<CheckResult> run_checks(const ChecksConfig& cfg) {
    FrequencyCF golden = cf_expand("golden", 16);
    std::vector<CheckResult> out;
    auto want = [&](const std::string& name) { return cfg.only.empty() || cfg.only == name; };

    if (want("i-epsilon")) out.push_back(check_i_epsilon());
    if (want("le-closed-form")) out.push_back(check_le_closed_form(cfg, golden));
    if (want("regular-singular-split")) out.push_back(check_split(cfg, golden));
    if (want("gordon")) out.push_back(check_gordon(cfg));
    if (want("cos-product")) out.push_back(check_cos_product(golden));
    if (want("zeta-quadrature")) out.push_back(check_zeta_quadrature());
    if (want("periodic-approximation")) out.push_back(check_periodic_approximation(cfg));
    if (want("cocycle-identity")) out.push_back(check_cocycle_identity(cfg, golden));
    if (out.empty()) throw validation_error("checks: unknown check name '" + cfg.only + "'");
    return out;
}

} // namespace maryland::tools
