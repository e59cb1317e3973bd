// Command-line front end: spectral curves, arithmetic indices, the
// classifier, quantized eigenvalues/eigenfunctions, cocycle Lyapunov
// estimates and finite-volume IDS counts, plus the cross-module check
// suite.  All floating output uses 17 significant digits so doubles
// round-trip; identical invocations produce byte-identical files.

#include "checks.hpp"

#include "maryland/arithmetics.hpp"
#include "maryland/closed_forms.hpp"
#include "maryland/cocycles.hpp"
#include "maryland/eigensystem.hpp"
#include "maryland/errors.hpp"
#include "maryland/spectral_report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace maryland;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Sink {
    std::string path; // empty: stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw validation_error("cannot open output file " + path);
            f << text;
        }
    }
};

Phase parse_theta(const std::string& text, const FrequencyCF& alpha, int depth,
                  std::uint64_t seed) {
    if (text.rfind("loc", 0) == 0) {
        std::uint64_t s = seed;
        if (text.size() > 4 && text[3] == ':') s = std::stoull(text.substr(4));
        return localized_phase(alpha, depth, s);
    }
    if (text.find('/') != std::string::npos) {
        Rational r(text, 10);
        r.canonicalize();
        return make_phase(r, alpha);
    }
    return make_phase(rational_from_decimal(text), alpha);
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw validation_error("steps must be >= 1");
    std::vector<double> out;
    if (steps == 1) { out.push_back(lo); return out; }
    for (int i = 0; i < steps; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
    return out;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

json trace_json(const IndexEstimate& est) {
    json t = json::array();
    for (double v : est.trace) {
        if (std::isnan(v)) t.push_back(nullptr);
        else if (std::isinf(v)) t.push_back(v > 0 ? "inf" : "-inf");
        else t.push_back(v);
    }
    return {{"value", std::isinf(est.value) ? json(est.value > 0 ? "inf" : "-inf") : json(est.value)},
            {"depth", est.depth},
            {"window", est.window},
            {"trace", t}};
}

// ---- subcommand runners ---------------------------------------------------

int run_curves(double lambda, double e_min, double e_max, int steps,
               const std::string& format, const Sink& sink) {
    std::ostringstream os;
    auto grid = linspace(e_min, e_max, steps);
    if (format == "csv") {
        os << "e,gamma,k\n";
        for (double e : grid)
            os << fmt17(e) << ',' << fmt17(lyapunov(lambda, e)) << ',' << fmt17(ids(lambda, e))
               << '\n';
    } else {
        json rows = json::array();
        for (double e : grid)
            rows.push_back({{"e", e}, {"gamma", lyapunov(lambda, e)}, {"k", ids(lambda, e)}});
        json doc = {{"schema", "maryland.curves/1"}, {"lambda", lambda}, {"rows", rows}};
        os << doc.dump(2) << '\n';
    }
    sink.write(os.str());
    return 0;
}

int run_indices(const std::string& alpha_spec, const std::string& theta_spec, int depth,
                int window, std::uint64_t seed, const std::string& format, const Sink& sink) {
    FrequencyCF alpha = cf_expand(alpha_spec, depth + 1);
    Phase theta = parse_theta(theta_spec, alpha, depth, seed);
    IndexEstimate d = delta_index(alpha, theta, depth, window);
    IndexEstimate b = beta_index(alpha, depth, window);
    std::ostringstream os;
    if (format == "csv") {
        os << "n,q_n,beta_trace,delta_trace\n";
        for (int n = 1; n <= depth; ++n) {
            os << n << ',';
            if (n <= alpha.exact_levels()) os << alpha.q[static_cast<std::size_t>(n)].get_str();
            else os << "virtual";
            os << ',' << fmt17(b.trace[static_cast<std::size_t>(n - 1)]) << ','
               << fmt17(d.trace[static_cast<std::size_t>(n - 1)]) << '\n';
        }
    } else {
        json doc = {{"schema", "maryland.indices/1"},
                    {"alpha", alpha_spec},
                    {"theta", to_double(theta.theta)},
                    {"delta", trace_json(d)},
                    {"beta", trace_json(b)}};
        os << doc.dump(2) << '\n';
    }
    sink.write(os.str());
    return 0;
}

int run_classify(double lambda, const std::string& alpha_spec, const std::string& theta_spec,
                 int depth, int window, double ceiling, std::uint64_t seed, const Sink& sink) {
    FrequencyCF alpha = cf_expand(alpha_spec, depth + 1);
    Phase theta = parse_theta(theta_spec, alpha, depth, seed);
    ClassifyOptions opt;
    opt.depth = depth;
    opt.window = window;
    opt.trace_ceiling = ceiling;
    SpectralVerdict v = classify(lambda, alpha, theta, opt);
    json doc = {{"schema", "maryland.verdict/1"},
                {"case", static_cast<int>(v.case_id)},
                {"delta_hat", std::isinf(v.delta_hat.value) ? json("inf") : json(v.delta_hat.value)},
                {"gamma0", v.gamma_at_zero},
                {"boundary", v.boundary_energies
                                 ? json{v.boundary_energies->first, v.boundary_energies->second}
                                 : json(nullptr)},
                {"sc_interval",
                 v.sc_interval && std::isfinite(v.sc_interval->second)
                     ? json{v.sc_interval->first, v.sc_interval->second}
                     : (v.sc_interval ? json{"-inf", "inf"} : json(nullptr))},
                {"pp_region", v.pp_region},
                {"ac_empty", v.ac_empty},
                {"trace", trace_json(v.delta_hat)["trace"]},
                {"params", {{"lambda", lambda}, {"alpha", alpha_spec}, {"depth", depth},
                            {"window", window}, {"ceiling", ceiling},
                            {"theta", to_double(theta.theta)}}}};
    sink.write(doc.dump(2) + "\n");
    return 0;
}

int run_eigen(double lambda, const std::string& alpha_spec, const std::string& theta_spec,
              const std::string& m_range, double tol, bool build, long long half_width,
              int series_k, int depth, std::uint64_t seed, const std::string& format,
              const Sink& sink) {
    auto colon = m_range.find(':');
    if (colon == std::string::npos)
        throw validation_error("--m-range expects lo:hi, got " + m_range);
    long long m_lo = std::stoll(m_range.substr(0, colon));
    long long m_hi = std::stoll(m_range.substr(colon + 1));

    FrequencyCF alpha = cf_expand(alpha_spec, depth + 1);
    Phase theta = parse_theta(theta_spec, alpha, depth, seed);
    EigenOptions eopt;
    eopt.tol = tol;
    auto records = quantized_eigenvalues(lambda, alpha, theta, m_lo, m_hi, eopt);

    std::vector<Eigenfunction> built;
    if (build) {
        for (auto& rec : records) {
            double rho = default_target_decay(rec.gamma, rec.delta_hat);
            // rho <= 0 means gamma <= delta: keep a nominal truncation and let
            // the solver raise the breakdown
            int K = series_k > 0 ? series_k
                                 : (rho > 0 ? static_cast<int>(std::ceil(12.0 / rho)) : 16);
            ZetaCoefficients z = zeta_coeffs(lambda, rec.e, rec.k_target, K);
            PsiSeries psi = solve_cohomological(z, alpha, K, 1e-9, false, rho);
            long long N = half_width > 0 ? half_width : std::max<long long>(4LL * K, 256);
            Eigenfunction fn = build_eigenfunction(lambda, alpha, theta, rec, psi, N);
            rec.residual = fn.residual;
            rec.decay_rate = fn.decay_rate;
            built.push_back(std::move(fn));
        }
    }

    std::ostringstream os;
    if (format == "csv") {
        if (build) {
            os << "m,n,re_u,im_u,ln_abs_u\n";
            for (std::size_t r = 0; r < records.size(); ++r) {
                const auto& fn = built[r];
                for (long long n = -fn.half_width; n <= fn.half_width; ++n) {
                    const auto& u = fn.u[static_cast<std::size_t>(n + fn.half_width)];
                    os << records[r].m << ',' << n << ',' << fmt17(u.real()) << ','
                       << fmt17(u.imag()) << ',' << fmt17(std::log(std::abs(u))) << '\n';
                }
            }
        } else {
            os << "m,e,k_target,gamma,delta_hat,predicted_pp\n";
            for (const auto& rec : records)
                os << rec.m << ',' << fmt17(rec.e) << ',' << fmt17(to_double(rec.k_target)) << ','
                   << fmt17(rec.gamma) << ',' << fmt17(rec.delta_hat) << ','
                   << (rec.predicted_pp ? 1 : 0) << '\n';
        }
    } else {
        json rows = json::array();
        for (const auto& rec : records) {
            json r = {{"m", rec.m},          {"e", rec.e},
                      {"k_target", to_double(rec.k_target)},
                      {"gamma", rec.gamma},  {"delta_hat", rec.delta_hat},
                      {"predicted_pp", rec.predicted_pp}};
            if (build) {
                r["residual"] = rec.residual;
                r["decay_rate"] = rec.decay_rate;
            }
            rows.push_back(r);
        }
        json doc = {{"schema", "maryland.eigen/1"},
                    {"lambda", lambda},
                    {"alpha", alpha_spec},
                    {"theta", to_double(theta.theta)},
                    {"records", rows}};
        os << doc.dump(2) << '\n';
    }
    sink.write(os.str());
    return 0;
}

int run_cocycle(const std::string& kind_s, double lambda, double e,
                const std::string& alpha_spec, int depth, double epsilon,
                const std::string& eps_grid_s, long long n, int phases, std::uint64_t seed,
                double guard, bool running, const std::string& theta_spec, int threads,
                const Sink& sink) {
    FrequencyCF alpha = cf_expand(alpha_spec, depth + 1);
    CocycleKind kind = kind_s == "D" ? CocycleKind::D : CocycleKind::A;
    CocycleOptions opt;
    opt.singularity_guard = guard;
    std::ostringstream os;
    if (running) {
        Phase theta = parse_theta(theta_spec, alpha, depth, seed);
        os << "n,running_le\n";
        const double a = alpha.value_d(), th = to_double(theta.theta);
        CocycleMatrix acc = CocycleMatrix::identity();
        long long emit = std::max<long long>(1, n / 200);
        for (long long j = 0; j < n; ++j) {
            double x = th + static_cast<double>(j) * a;
            CocycleMatrix B = kind == CocycleKind::A ? step_A(lambda, e, x, epsilon, opt)
                                                     : step_D(lambda, e, x, epsilon);
            acc = B * acc;
            if ((j + 1) % emit == 0 || j + 1 == n)
                os << (j + 1) << ',' << fmt17(acc.log_norm() / static_cast<double>(j + 1)) << '\n';
        }
    } else {
        std::vector<double> grid =
            eps_grid_s.empty() ? std::vector<double>{epsilon} : parse_grid(eps_grid_s);
        os << "epsilon,le,stderr\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            LEEstimate est = le_numeric(kind, lambda, e, alpha.value_d(), grid[i], n, phases,
                                        seed + i, opt, threads);
            os << fmt17(grid[i]) << ',' << fmt17(est.value) << ',' << fmt17(est.stderr_) << '\n';
        }
    }
    sink.write(os.str());
    return 0;
}

int run_ids(double lambda, const std::string& alpha_spec, const std::string& theta_spec,
            const std::string& theta2_spec, long long N, double e_single, bool has_e,
            double e_min, double e_max, int steps, int depth, std::uint64_t seed, double guard,
            int threads, const Sink& sink) {
    FrequencyCF alpha = cf_expand(alpha_spec, depth + 1);
    Phase theta = parse_theta(theta_spec, alpha, depth, seed);
    IdsOptions opt;
    opt.singularity_guard = guard;
    opt.threads = threads;
    std::vector<double> grid = has_e ? std::vector<double>{e_single} : linspace(e_min, e_max, steps);
    std::ostringstream os;
    if (!theta2_spec.empty()) {
        Phase theta2 = parse_theta(theta2_spec, alpha, depth, seed + 1);
        os << "e,ids_finite_theta1,ids_finite_theta2,abs_diff\n";
        for (double e : grid) {
            double a = finite_volume_ids(lambda, alpha, theta, e, N, opt);
            double b = finite_volume_ids(lambda, alpha, theta2, e, N, opt);
            os << fmt17(e) << ',' << fmt17(a) << ',' << fmt17(b) << ',' << fmt17(std::fabs(a - b))
               << '\n';
        }
    } else {
        os << "e,ids_finite,ids_closed,abs_err\n";
        for (double e : grid) {
            double a = finite_volume_ids(lambda, alpha, theta, e, N, opt);
            double k = ids(lambda, e);
            os << fmt17(e) << ',' << fmt17(a) << ',' << fmt17(k) << ',' << fmt17(std::fabs(a - k))
               << '\n';
        }
    }
    sink.write(os.str());
    return 0;
}

int run_checks_cmd(const tools::ChecksConfig& cfg) {
    auto rows = tools::run_checks(cfg);
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.detail << "\n";
    }
    std::cout << (all ? "all checks passed\n" : "some checks FAILED\n");
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"maryland: spectral decomposition toolkit for the model "
                 "u_{n+1} + u_{n-1} + lambda tan(pi(theta + n alpha)) u_n"};
    app.require_subcommand(1);

    // shared knobs
    double lambda = 1.0, tol = 1e-12, guard = 1e-12, ceiling = 1e3;
    double e_min = -3.0, e_max = 3.0, e_single = 0.0, epsilon = 0.0;
    int steps = 13, depth = 20, window = 5, series_k = 0, phases = 8, threads = 1;
    long long n_steps = 100000, half_width = 0, lattice_n = 2000;
    std::uint64_t seed = 1;
    std::string alpha_spec = "golden", theta_spec = "0.13", theta2_spec, m_range = "-2:2";
    std::string format = "csv", output, kind = "A", eps_grid, only;
    bool build = false, running = false;

    auto* curves = app.add_subcommand("curves", "closed-form gamma and IDS over an energy grid");
    curves->add_option("--lambda", lambda, "coupling > 0")->capture_default_str();
    curves->add_option("--e-min", e_min)->capture_default_str();
    curves->add_option("--e-max", e_max)->capture_default_str();
    curves->add_option("--steps", steps)->capture_default_str();
    curves->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    curves->add_option("--output", output, "file path (default: stdout)");

    auto* indices = app.add_subcommand("indices", "delta/beta index traces");
    indices->add_option("--alpha", alpha_spec)->capture_default_str();
    indices->add_option("--theta", theta_spec)->capture_default_str();
    indices->add_option("--depth", depth)->capture_default_str();
    indices->add_option("--window", window)->capture_default_str();
    indices->add_option("--seed", seed)->capture_default_str();
    indices->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    indices->add_option("--output", output);

    auto* classify_cmd = app.add_subcommand("classify", "spectral trichotomy verdict (JSON)");
    classify_cmd->add_option("--lambda", lambda)->capture_default_str();
    classify_cmd->add_option("--alpha", alpha_spec)->capture_default_str();
    classify_cmd->add_option("--theta", theta_spec)->capture_default_str();
    classify_cmd->add_option("--depth", depth)->capture_default_str();
    classify_cmd->add_option("--window", window)->capture_default_str();
    classify_cmd->add_option("--ceiling", ceiling, "+inf sentinel trace ceiling")
        ->capture_default_str();
    classify_cmd->add_option("--seed", seed)->capture_default_str();
    classify_cmd->add_option("--format", format)->check(CLI::IsMember({"json"}));
    classify_cmd->add_option("--output", output);

    auto* eigen = app.add_subcommand("eigen", "quantization-condition eigenvalues");
    eigen->add_option("--lambda", lambda)->capture_default_str();
    eigen->add_option("--alpha", alpha_spec)->capture_default_str();
    eigen->add_option("--theta", theta_spec)->capture_default_str();
    eigen->add_option("--m-range", m_range, "label interval lo:hi")->capture_default_str();
    eigen->add_option("--tol", tol)->capture_default_str();
    eigen->add_flag("--build", build, "synthesize eigenfunctions (CSV: n, Re u, Im u, ln|u|)");
    eigen->add_option("--half-width", half_width, "lattice half width (0: auto)")
        ->capture_default_str();
    eigen->add_option("--series-k", series_k, "psi truncation (0: auto)")->capture_default_str();
    eigen->add_option("--depth", depth)->capture_default_str();
    eigen->add_option("--seed", seed)->capture_default_str();
    eigen->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    eigen->add_option("--output", output);

    auto* cocycle = app.add_subcommand("cocycle", "transfer-matrix Lyapunov estimates");
    cocycle->add_option("--kind", kind)->check(CLI::IsMember({"A", "D"}))->capture_default_str();
    cocycle->add_option("--lambda", lambda)->capture_default_str();
    cocycle->add_option("--e", e_single)->capture_default_str();
    cocycle->add_option("--alpha", alpha_spec)->capture_default_str();
    cocycle->add_option("--depth", depth)->capture_default_str();
    cocycle->add_option("--epsilon", epsilon)->capture_default_str();
    cocycle->add_option("--epsilon-grid", eps_grid, "comma-separated epsilon values");
    cocycle->add_option("--n", n_steps)->capture_default_str();
    cocycle->add_option("--phases", phases)->capture_default_str();
    cocycle->add_option("--seed", seed)->capture_default_str();
    cocycle->add_option("--guard", guard)->capture_default_str();
    cocycle->add_flag("--running", running, "emit the running LE along one orbit");
    cocycle->add_option("--theta", theta_spec, "phase for --running")->capture_default_str();
    cocycle->add_option("--threads", threads)->capture_default_str();
    cocycle->add_option("--output", output);

    auto* ids_cmd = app.add_subcommand("ids", "finite-volume IDS by Sturm counts");
    ids_cmd->add_option("--lambda", lambda)->capture_default_str();
    ids_cmd->add_option("--alpha", alpha_spec)->capture_default_str();
    ids_cmd->add_option("--theta", theta_spec)->capture_default_str();
    ids_cmd->add_option("--theta2", theta2_spec, "second phase: emit the constancy table");
    ids_cmd->add_option("--size", lattice_n, "lattice half width N")->capture_default_str();
    auto* e_opt = ids_cmd->add_option("--e", e_single, "single energy");
    ids_cmd->add_option("--e-min", e_min)->capture_default_str();
    ids_cmd->add_option("--e-max", e_max)->capture_default_str();
    ids_cmd->add_option("--steps", steps)->capture_default_str();
    ids_cmd->add_option("--depth", depth)->capture_default_str();
    ids_cmd->add_option("--seed", seed)->capture_default_str();
    ids_cmd->add_option("--guard", guard)->capture_default_str();
    ids_cmd->add_option("--threads", threads)->capture_default_str();
    ids_cmd->add_option("--output", output);

    auto* checks = app.add_subcommand("checks", "cross-module property suites");
    tools::ChecksConfig ccfg;
    checks->add_option("--only", ccfg.only, "run a single named check");
    checks->add_option("--seed", ccfg.seed)->capture_default_str();
    checks->add_option("--guard", ccfg.guard)->capture_default_str();
    checks->add_option("--theta", ccfg.theta, "fixed phase for the LE checks");
    checks->add_option("--n", ccfg.n)->capture_default_str();
    checks->add_option("--threads", ccfg.threads)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage errors land on the validation exit code
    }

    try {
        Sink sink{output};
        if (curves->parsed()) return run_curves(lambda, e_min, e_max, steps, format, sink);
        if (indices->parsed())
            return run_indices(alpha_spec, theta_spec, depth, window, seed, format, sink);
        if (classify_cmd->parsed())
            return run_classify(lambda, alpha_spec, theta_spec, depth, window, ceiling, seed, sink);
        if (eigen->parsed())
            return run_eigen(lambda, alpha_spec, theta_spec, m_range, tol, build, half_width,
                             series_k, depth, seed, format, sink);
        if (cocycle->parsed())
            return run_cocycle(kind, lambda, e_single, alpha_spec, depth, epsilon, eps_grid,
                               n_steps, phases, seed, guard, running, theta_spec, threads, sink);
        if (ids_cmd->parsed())
            return run_ids(lambda, alpha_spec, theta_spec, theta2_spec, lattice_n, e_single,
                           e_opt->count() > 0, e_min, e_max, steps, depth, seed, guard, threads,
                           sink);
        if (checks->parsed()) return run_checks_cmd(ccfg);
    } catch (const singularity_error& err) {
        std::cerr << "singularity: " << err.what() << "\n";
        return 4;
    } catch (const numeric_error& err) {
        std::cerr << "numeric breakdown: " << err.what() << "\n";
        return 3;
    } catch (const validation_error& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
