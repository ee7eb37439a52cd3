#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "fkpp/config.hpp"
#include "fkpp/csv.hpp"
#include "fkpp/dynamics.hpp"
#include "fkpp/thresholds.hpp"
#include "fkpp/waves.hpp"

namespace fs = std::filesystem;
using namespace fkpp;

namespace {

struct Ctx {
    RunConfig cfg;
    fs::path outdir;
    std::ofstream summary;
};

Ctx open_context(const std::string& config_path,
                 const std::vector<std::string>& overrides) {
    Ctx ctx;
    ctx.cfg = config_path.empty() ? RunConfig{} : parse_config(config_path);
    for (const auto& ov : overrides) {
        auto dot = ov.find('.');
        auto eq = ov.find('=');
        if (dot == std::string::npos || eq == std::string::npos || dot > eq)
            throw ConfigError("override must look like section.key=value: " + ov);
        apply_override(ctx.cfg, ov.substr(0, dot), ov.substr(dot + 1, eq - dot - 1),
                       ov.substr(eq + 1));
    }
    if (const char* env = std::getenv("FKPP_OUTPUT_DIR")) ctx.cfg.directory = env;
    ctx.outdir = ctx.cfg.directory;
    fs::create_directories(ctx.outdir);
    write_effective_config(ctx.cfg, (ctx.outdir / "effective_config.ini").string());
    ctx.summary.open(ctx.outdir / "summary.txt");
    ctx.summary.precision(17);
    return ctx;
}

Field initial_datum(const Ctx& ctx, const Grid& g) {
    if (ctx.cfg.u0_kind == "constant") return Field(g, ctx.cfg.u0_amplitude);
    if (ctx.cfg.u0_kind == "eigenfunction") {
        NonlocalOperator op(g, ctx.cfg.operator_spec(), ctx.cfg.potential(g));
        EigenResult er =
            principal_eigen(op, ctx.cfg.eigen_R > 0 ? ctx.cfg.eigen_R : g.L);
        Field u = er.eigenfunction;
        for (int i = 0; i < g.N; ++i) u[i] *= ctx.cfg.u0_amplitude;
        return u;
    }
    Field u(g, 0.0);
    for (int i = 0; i < g.N; ++i) {
        double t = g.x(i) / ctx.cfg.u0_width;
        u[i] = ctx.cfg.u0_amplitude * std::max(0.0, 1.0 - t * t);
    }
    return u;
}

int cmd_symbol_check(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    OperatorSpec spec = cfg.operator_spec();
    spec.normalization = Normalization::Exact;
    spec.c = 0.0;
    spec.analytic_tail_tol = 1e-7;
    NonlocalOperator op = make_frac_operator(g, spec);
    std::vector<std::pair<double, double>> rows;
    ctx.summary << "symbol check: discrete Delta^s cos(xi x) at x=0 vs -|xi|^{2s}\n";
    double worst = 0.0;
    for (double xi : {0.5, 1.0, 2.0}) {
        Field u = make_field(g, [&](double x) { return std::cos(xi * x); },
                             AnalyticExt{[xi](double y) { return std::cos(xi * y); },
                                         {}, 1.0, 0.0, 2.0 * M_PI / xi});
        double v = op.apply_at(u, (g.N - 1) / 2);
        double target = -std::pow(xi, 2.0 * cfg.s);
        double rel = std::abs(v - target) / std::abs(target);
        worst = std::max(worst, rel);
        rows.emplace_back(xi, rel);
        ctx.summary << "  xi=" << xi << " value=" << v << " target=" << target
                    << " rel_err=" << rel << "\n";
    }
    write_pairs_csv((ctx.outdir / "symbol.csv").string(), "xi,rel_err", rows,
                    cfg.precision);
    ctx.summary << "worst rel_err = " << worst << "\n";
    return 0;
}

int cmd_eigen(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    NonlocalOperator op(g, cfg.operator_spec(), cfg.potential(g));
    double R = cfg.eigen_R > 0.0 ? cfg.eigen_R : g.L;
    EigenOptions opts;
    opts.residual_tol = cfg.eigen_tol;
    opts.max_iterations = cfg.max_iter;
    EigenResult er = principal_eigen(op, R, opts);
    write_pairs_csv((ctx.outdir / "eigen.csv").string(), "R,lambda1",
                    {{er.R, er.lambda1}}, cfg.precision);
    write_field_csv((ctx.outdir / "phi.csv").string(), er.eigenfunction, "phi",
                    cfg.precision);
    ctx.summary << "lambda1 = " << er.lambda1 << "\nresidual = " << er.residual
                << "\niterations = " << er.iterations << "\nR = " << er.R << "\n";
    return 0;
}

int cmd_eigen_line(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    NonlocalOperator op(g, cfg.operator_spec(), cfg.potential(g));
    EigenOptions opts;
    opts.residual_tol = cfg.eigen_tol;
    opts.max_iterations = cfg.max_iter;
    LineEigenResult lr = principal_eigen_line(op, cfg.R_schedule, cfg.line_tol, opts);
    write_pairs_csv((ctx.outdir / "eigen_line.csv").string(), "R,lambda1",
                    lr.sequence, cfg.precision);
    ctx.summary << "lambda1_line = " << lr.lambda1_line
                << "\nconverged = " << (lr.converged ? "yes" : "no")
                << "\ntail_gap = " << lr.tail_gap << "\n";
    return 0;
}

int cmd_evolve(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    OperatorSpec spec = cfg.operator_spec();
    NonlocalOperator op_lin(g, spec, Field(g, 0.0));
    Nonlinearity nl = cfg.nonlinearity(g);

    NonlocalOperator op_a(g, spec, nl.linearization());
    EigenOptions opts;
    opts.residual_tol = cfg.eigen_tol;
    opts.max_iterations = cfg.max_iter;
    LineEigenResult lr = principal_eigen_line(op_a, cfg.R_schedule, cfg.line_tol, opts);

    Field u0 = initial_datum(ctx, g);
    Trajectory tr = evolve(op_lin, nl, u0, cfg.sim);

    std::ofstream manifest(ctx.outdir / "snapshots.txt");
    manifest.precision(17);
    manifest << "t,filename\n";
    for (size_t k = 0; k < tr.snapshots.size(); ++k) {
        std::string name = "snapshot_" + std::to_string(k) + ".csv";
        write_field_csv((ctx.outdir / name).string(), tr.snapshots[k], "u",
                        cfg.precision);
        manifest << tr.times[k] << "," << name << "\n";
    }
    const char* outcome = tr.outcome == Outcome::Extinct ? "Extinct"
                          : tr.outcome == Outcome::Steady ? "Steady"
                                                          : "HorizonReached";
    ctx.summary << "lambda1 = " << lr.lambda1_line << "; predicted outcome = "
                << (lr.lambda1_line < 0.0 ? "Persist" : "Extinct")
                << " (Theorem C)\n";
    ctx.summary << "outcome = " << outcome << "\nfinal_time = " << tr.final_time
                << "\nfinal_sup = " << tr.final_state.max_abs() << "\n";
    for (const auto& w : tr.warnings) ctx.summary << "warning: " << w << "\n";
    return 0;
}

int cmd_wave(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    Nonlinearity nl = cfg.nonlinearity(g);
    WaveOptions wopts;
    wopts.eigen_R = cfg.eigen_R > 0.0 ? cfg.eigen_R : 0.5 * g.L;
    wopts.supersolution_level = cfg.M;
    wopts.eigen_opts.residual_tol = cfg.eigen_tol;
    wopts.eigen_opts.max_iterations = cfg.max_iter;
    WaveResult wr = solve_wave(g, cfg.operator_spec(), nl, cfg.sim, wopts);
    write_field_csv((ctx.outdir / "wave_below.csv").string(), wr.from_below.profile,
                    "u", cfg.precision);
    write_field_csv((ctx.outdir / "wave_above.csv").string(), wr.from_above.profile,
                    "u", cfg.precision);
    ctx.summary << "lambda1(R=" << wopts.eigen_R << ") = " << wr.lambda1
                << "\ngap = " << wr.gap
                << "\nresidual_below = " << wr.from_below.residual
                << "\nresidual_above = " << wr.from_above.residual << "\n";
    if (wr.partial) ctx.summary << "warning: a relaxation hit the horizon\n";
    if (wr.uniqueness_flag)
        ctx.summary << "warning: uniqueness probe gap above 100*steady_tol\n";

    if (wr.from_below.outcome == Outcome::Steady &&
        wr.from_below.profile.max() > 10.0 * cfg.sim.extinction_tol) {
        double lo = cfg.window_lo_factor * cfg.patch_radius();
        double hi = cfg.window_hi_factor * g.L;
        std::ofstream fits(ctx.outdir / "tail_fit.csv");
        fits.precision(17);
        fits << "side,x_lo,x_hi,slope,stderr\n";
        for (TailSide side : {TailSide::Left, TailSide::Right}) {
            TailFit fit = fit_tail_exponent(wr.from_below.profile, lo, hi, side);
            fits << (side == TailSide::Left ? "left" : "right") << "," << fit.x_lo
                 << "," << fit.x_hi << "," << fit.slope << "," << fit.slope_stderr
                 << "\n";
            ctx.summary << (side == TailSide::Left ? "left" : "right")
                        << " tail slope = " << fit.slope << " +- "
                        << fit.slope_stderr << " (target " << -(1.0 + 2.0 * cfg.s)
                        << ")\n";
        }
    }
    return 0;
}

int cmd_tail_fit(Ctx& ctx, const std::string& input) {
    const RunConfig& cfg = ctx.cfg;
    Field profile = read_field_csv(input);
    double lo = cfg.window_lo_factor * cfg.patch_radius();
    double hi = cfg.window_hi_factor * profile.grid.L;
    std::ofstream fits(ctx.outdir / "tail_fit.csv");
    fits.precision(17);
    fits << "side,x_lo,x_hi,slope,stderr\n";
    for (TailSide side : {TailSide::Left, TailSide::Right}) {
        TailFit fit = fit_tail_exponent(profile, lo, hi, side);
        fits << (side == TailSide::Left ? "left" : "right") << "," << fit.x_lo << ","
             << fit.x_hi << "," << fit.slope << "," << fit.slope_stderr << "\n";
        ctx.summary << (side == TailSide::Left ? "left" : "right")
                    << " slope = " << fit.slope << " +- " << fit.slope_stderr << "\n";
    }
    return 0;
}

int cmd_thresholds(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    ThresholdOptions topts;
    topts.c_max = cfg.c_max;
    topts.n_scan = cfg.n_scan;
    topts.bisect_tol = cfg.bisect_tol;
    topts.R_schedule = cfg.R_schedule;
    topts.line_tol = cfg.line_tol;
    topts.eigen_opts.residual_tol = cfg.eigen_tol;
    topts.eigen_opts.max_iterations = cfg.max_iter;
    ThresholdReport rep =
        scan_and_bisect(g, cfg.operator_spec(), cfg.potential(g), topts);
    std::vector<std::pair<double, double>> rows;
    for (size_t j = 0; j < rep.c_grid.size(); ++j)
        rows.emplace_back(rep.c_grid[j], rep.lambda_values[j]);
    write_pairs_csv((ctx.outdir / "lambda_of_c.csv").string(), "c,lambda1", rows,
                    cfg.precision);
    ctx.summary << "monotone_observed = " << (rep.monotone_observed ? "yes" : "no")
                << "\n";
    if (rep.outer_open) {
        ctx.summary << "warning: " << rep.warning << "\n";
    } else {
        ctx.summary << "c* bracket: [" << rep.c_star_bracket->c_lo << ", "
                    << rep.c_star_bracket->c_hi << "]\n";
        ctx.summary << "c** bracket: [" << rep.c_star_star_bracket->c_lo << ", "
                    << rep.c_star_star_bracket->c_hi << "]\n";
    }
    return 0;
}

int cmd_barrier_check(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    double beta = cfg.beta > 0.0 ? cfg.beta : 1.0 + 2.0 * cfg.s;
    Barrier b = make_barrier(cfg.kappa, cfg.s, beta);
    double rk = b.r_kappa();
    std::vector<double> sample;
    for (int j = 0; j < cfg.sample_count; ++j) {
        double t = cfg.sample_lo *
                   std::pow(cfg.sample_hi / cfg.sample_lo,
                            double(j) / double(cfg.sample_count - 1));
        sample.push_back(t * rk);
        sample.push_back(-t * rk);
    }
    BarrierCertificate cert = certify_barrier(b, cfg.c, cfg.nu, sample);
    std::vector<CertRow> rows;
    for (const auto& p : cert.points) rows.push_back({p.x, p.value, p.passed});
    write_certificate_csv((ctx.outdir / "barrier_certificate.csv").string(), rows,
                          cfg.precision);
    ctx.summary << "r_kappa = " << rk
                << "\nC(beta) empirical = " << cert.c_beta_empirical
                << "\ncertified = " << (cert.certified ? "yes" : "no")
                << "\nR_nu = " << cert.R_nu << "\n";
    return cert.certified ? 0 : 2;
}

int cmd_hypotheses(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    Nonlinearity nl = cfg.nonlinearity(g);
    HypothesesReport rep = check_hypotheses(nl, g);
    for (const auto& c : rep.clauses)
        ctx.summary << (c.passed ? "pass" : "FAIL") << ": " << c.name
                    << (c.witness.empty() ? "" : " [" + c.witness + "]") << "\n";
    ctx.summary << (rep.all_passed() ? "all hypotheses hold\n"
                                     : "hypothesis failure\n");
    return rep.all_passed() ? 0 : 2;
}

int cmd_bench_matvec(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    OperatorSpec spec = cfg.operator_spec();
    NonlocalOperator op = make_frac_operator(g, spec);
    Field u = make_field(g, [](double x) { return std::sin(0.37 * x) + 0.2; });
    using clock = std::chrono::steady_clock;

    Field yd = op.frac_apply(u, true);
    Field yf = op.frac_apply(u, false);
    double diff = 0.0;
    for (int i = 0; i < g.N; ++i) diff = std::max(diff, std::abs(yd[i] - yf[i]));
    diff /= yd.max_abs();

    const int reps = 5;
    auto t0 = clock::now();
    for (int r = 0; r < reps; ++r) yd = op.frac_apply(u, true);
    auto t1 = clock::now();
    for (int r = 0; r < reps; ++r) yf = op.frac_apply(u, false);
    auto t2 = clock::now();
    double ms_dense = std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
    double ms_fft = std::chrono::duration<double, std::milli>(t2 - t1).count() / reps;
    ctx.summary << "N = " << g.N << "\ndense ms = " << ms_dense
                << "\nfft ms = " << ms_fft << "\nspeedup = " << ms_dense / ms_fft
                << "\nmax rel diff = " << diff << "\n";
    write_pairs_csv((ctx.outdir / "bench.csv").string(), "dense_ms,fft_ms",
                    {{ms_dense, ms_fft}}, cfg.precision);
    return diff <= 1e-10 ? 0 : 2;
}

int cmd_kernel_dump(Ctx& ctx) {
    const RunConfig& cfg = ctx.cfg;
    Grid g = cfg.grid();
    KernelWeights K = build_kernel(g, cfg.s);
    std::vector<std::pair<double, double>> rows;
    for (int k = 0; k <= std::min(K.k_store, g.N - 1); ++k)
        rows.emplace_back(double(k), K.w[size_t(k)]);
    write_pairs_csv((ctx.outdir / "kernel.csv").string(), "offset,weight", rows,
                    cfg.precision);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional KPP moving-patch solver"};
    app.require_subcommand(1);
    app.fallthrough(true);
    std::string config_path;
    std::vector<std::string> overrides;
    std::string tail_input;
    app.add_option("--config", config_path, "INI configuration file");
    app.add_option("--set", overrides, "override: section.key=value");

    auto* sc_symbol = app.add_subcommand("symbol-check", "discrete symbol vs -|xi|^{2s}");
    auto* sc_eigen = app.add_subcommand("eigen", "principal eigenpair on (-R, R)");
    auto* sc_line = app.add_subcommand("eigen-line", "whole-line eigenvalue limit");
    auto* sc_evolve = app.add_subcommand("evolve", "IMEX evolution with outcome");
    auto* sc_wave = app.add_subcommand("wave", "traveling-wave relaxation");
    auto* sc_tail = app.add_subcommand("tail-fit", "log-log tail slope of a profile CSV");
    sc_tail->add_option("--input", tail_input, "profile CSV (x,u)")->required();
    auto* sc_thr = app.add_subcommand("thresholds", "critical speed brackets");
    auto* sc_bar = app.add_subcommand("barrier-check", "barrier certificate");
    auto* sc_hyp = app.add_subcommand("hypotheses", "KPP hypothesis checks");
    auto* sc_bench = app.add_subcommand("bench-matvec", "dense vs FFT timings");
    auto* sc_kernel = app.add_subcommand("kernel-dump", "kernel weights CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        Ctx ctx = open_context(config_path, overrides);
        if (sc_symbol->parsed()) return cmd_symbol_check(ctx);
        if (sc_eigen->parsed()) return cmd_eigen(ctx);
        if (sc_line->parsed()) return cmd_eigen_line(ctx);
        if (sc_evolve->parsed()) return cmd_evolve(ctx);
        if (sc_wave->parsed()) return cmd_wave(ctx);
        if (sc_tail->parsed()) return cmd_tail_fit(ctx, tail_input);
        if (sc_thr->parsed()) return cmd_thresholds(ctx);
        if (sc_bar->parsed()) return cmd_barrier_check(ctx);
        if (sc_hyp->parsed()) return cmd_hypotheses(ctx);
        if (sc_bench->parsed()) return cmd_bench_matvec(ctx);
        if (sc_kernel->parsed()) return cmd_kernel_dump(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const ShapeError& e) {
        std::cerr << "shape error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
