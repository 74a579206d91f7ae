#include "ginx/cli.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "ginx/kernels.hpp"
#include "ginx/odd_check.hpp"
#include "ginx/output.hpp"

namespace ginx {
namespace cli {

namespace {

constexpr const char* kVersion = "0.1.0";

const char* command_name(Command c) {
    switch (c) {
        case Command::LimitLaw: return "limit-law";
        case Command::Gap: return "gap";
        case Command::Simulate: return "simulate";
        case Command::Figures: return "figures";
        case Command::Selfcheck: return "selfcheck";
    }
    return "?";
}

std::vector<double> t_grid(const RunConfig& c) {
    std::vector<double> ts;
    for (double t = c.t_min; t <= c.t_max + 1e-12; t += c.step) ts.push_back(t);
    return ts;
}

Metadata base_metadata(const RunConfig& c) {
    Metadata m;
    m.add("tool", std::string("ginx"));
    m.add("version", std::string(kVersion));
    m.add("command", std::string(command_name(c.command)));
    m.add("ensemble", std::string(ensemble::kind_name(c.kind)));
    m.add("n", static_cast<long long>(c.n));
    m.add("samples", static_cast<long long>(c.samples));
    m.add("seed", static_cast<long long>(c.seed));
    m.add("t_min", c.t_min);
    m.add("t_max", c.t_max);
    m.add("step", c.step);
    m.add("nodes", static_cast<long long>(c.nodes));
    m.add("L", c.L);
    m.add("L2", c.L2);
    m.add("gamma_mode", std::string(c.gamma_mode == specialfn::GammaMode::Implicit
                                        ? "implicit"
                                        : "asymptotic"));
    m.add("full", std::string(c.full ? "true" : "false"));
    m.add("sampler", std::string(ensemble::SampleStream::id()));
    return m;
}

std::string out_path(const RunConfig& c, const std::string& suffix) {
    std::string p = c.out;
    if (!suffix.empty()) p += "." + suffix;
    return p + "." + c.format;
}

void write_gap_curves(const RunConfig& c, const std::string& suffix,
                      const std::vector<fredholm::GapCurve>& curves,
                      Metadata meta) {
    for (const auto& curve : curves)
        if (!curve.monotone())
            throw fredholm::numerical_error(
                "emitted gap curve is not monotone in t");
    const std::string body = (c.format == "json")
                                 ? gap_curves_json(curves, meta)
                                 : gap_curves_csv(curves, meta);
    write_file_atomic(out_path(c, suffix), body);
}

long long effective_samples(const RunConfig& c, long long full_count) {
    return c.full ? full_count : c.samples;
}

ensemble::ExperimentResult run(const RunConfig& c, ensemble::Kind kind,
                               long long n, long long samples) {
    ensemble::ExperimentConfig ec;
    ec.kind = kind;
    ec.n = static_cast<int>(n);
    ec.samples = samples;
    ec.seed = c.seed;
    ec.gamma_mode = c.gamma_mode;
    ec.workers = c.workers;
    return ensemble::run_experiment(ec);
}

void cmd_limit_law(const RunConfig& c, std::ostream& log) {
    fredholm::GapCurve curve;
    curve.method = fredholm::GapMethod::Limit;
    curve.n = 0;
    curve.nodes = c.nodes;
    curve.L = c.L;
    curve.L2 = c.L2;
    double max_delta = 0.0;
    for (const double t : t_grid(c)) {
        const auto coarse = fredholm::limit_law_real(t, c.nodes, c.L, c.L2);
        const auto fine = fredholm::limit_law_real(t, 2 * c.nodes, c.L, c.L2);
        const double delta = std::fabs(coarse.value - fine.value);
        max_delta = std::max(max_delta, delta);
        if (delta > 1e-6)
            throw fredholm::numerical_error(
                "limit-law grid refinement moved the value by " +
                format_g17(delta) + " at t = " + format_g17(t));
        curve.t.push_back(t);
        curve.probability.push_back(coarse.value);
    }
    Metadata meta = base_metadata(c);
    meta.add("max_refine_delta", max_delta);
    write_gap_curves(c, "", {curve}, meta);
    log << "limit-law: " << curve.t.size() << " rows, max refine delta "
        << max_delta << "\n";
}

void cmd_gap_real_even(const RunConfig& c, std::ostream& log) {
    fredholm::GapCurve curve;
    curve.method = fredholm::GapMethod::FiniteEven;
    curve.n = c.n;
    curve.nodes = c.nodes;
    curve.L = c.L;
    curve.L2 = c.L2;
    double max_delta = 0.0, max_trunc = 0.0;
    for (const double t : t_grid(c)) {
        const auto coarse = fredholm::finite_gap_real_even(c.n, t, c.nodes, c.L, c.L2);
        const auto fine =
            fredholm::finite_gap_real_even(c.n, t, 2 * c.nodes, c.L, c.L2);
        const double delta = std::fabs(coarse.value - fine.value);
        max_delta = std::max(max_delta, delta);
        max_trunc = std::max(max_trunc, coarse.truncation_bound);
        if (delta > 1e-6)
            throw fredholm::numerical_error(
                "gap grid refinement moved the value by " + format_g17(delta) +
                " at t = " + format_g17(t));
        curve.t.push_back(t);
        curve.probability.push_back(coarse.value);
    }
    curve.truncation_bound = max_trunc;
    Metadata meta = base_metadata(c);
    meta.add("max_refine_delta", max_delta);
    meta.add("truncation_bound", max_trunc);
    write_gap_curves(c, "", {curve}, meta);
    log << "gap: " << curve.t.size() << " rows (finite-even), max refine delta "
        << max_delta << "\n";
}

void cmd_gap_real_odd(const RunConfig& c, std::ostream& log) {
    // one Monte Carlo run reused for every threshold, plus even neighbours
    const auto mc = run(c, ensemble::Kind::Real, c.n, c.samples);
    fredholm::GapCurve mc_curve, below, above;
    mc_curve.method = fredholm::GapMethod::MonteCarlo;
    mc_curve.n = c.n;
    below.method = above.method = fredholm::GapMethod::FiniteEven;
    below.n = c.n - 1;
    above.n = c.n + 1;
    for (auto* curve : {&mc_curve, &below, &above}) {
        curve->nodes = c.nodes;
        curve->L = c.L;
        curve->L2 = c.L2;
    }
    bool all_consistent = true;
    for (const double t : t_grid(c)) {
        long long cnt = 0;
        for (const double v : mc.largest_real)
            if (!(v > t)) ++cnt;
        const double p = static_cast<double>(cnt) /
                         static_cast<double>(mc.samples());
        const double se = std::sqrt(p * (1.0 - p) /
                                    static_cast<double>(mc.samples()));
        const double pb = fredholm::finite_gap_real_even(c.n - 1, t, c.nodes, c.L, c.L2).value;
        const double pa = fredholm::finite_gap_real_even(c.n + 1, t, c.nodes, c.L, c.L2).value;
        mc_curve.t.push_back(t);
        mc_curve.probability.push_back(p);
        below.t.push_back(t);
        below.probability.push_back(pb);
        above.t.push_back(t);
        above.probability.push_back(pa);
        const double slack = 5.0 * se + 0.02;
        if (p < std::min(pa, pb) - slack || p > std::max(pa, pb) + slack)
            all_consistent = false;
    }
    Metadata meta = base_metadata(c);
    meta.add("odd_sandwich_consistent", std::string(all_consistent ? "true" : "false"));
    const auto norms = kernels::odd_correction_norms(
        static_cast<int>(c.n), -2.0, 8.0);
    meta.add("correction_norm_T", norms.d_T);
    meta.add("correction_norm_psi", norms.d_psi);
    meta.add("correction_norm_phi", norms.d_phi);
    meta.add("correction_norm_phi_vs_eps_psi", norms.d_phi_vs_eps_psi);
    write_gap_curves(c, "", {mc_curve, below, above}, meta);
    if (!all_consistent)
        throw fredholm::numerical_error(
            "odd-n Monte Carlo left the even-neighbour envelope");
    log << "gap (odd n): sandwich consistent across " << mc_curve.t.size()
        << " thresholds\n";
}

void cmd_gap_complex(const RunConfig& c, std::ostream& log) {
    const auto sc = specialfn::scaling_constants(c.n, c.gamma_mode);
    fredholm::GapCurve curve;
    curve.method = fredholm::GapMethod::ComplexTrace;
    curve.n = c.n;
    curve.nodes = c.nodes;
    curve.L = 40.0;
    curve.L2 = 0.0;
    for (const double t : t_grid(c)) {
        const auto r = fredholm::complex_gap_trace(c.n, t, sc);
        curve.t.push_back(t);
        curve.probability.push_back(r.p_approx);
    }
    Metadata meta = base_metadata(c);
    write_gap_curves(c, "", {curve}, meta);
    log << "gap: " << curve.t.size() << " rows (complex-trace)\n";
}

void cmd_simulate(const RunConfig& c, std::ostream& log) {
    const auto res = run(c, c.kind, c.n, c.samples);
    Metadata meta = base_metadata(c);
    meta.add("largest_is_real_count", res.largest_is_real_count());
    meta.add("largest_is_real_proportion",
             static_cast<double>(res.largest_is_real_count()) /
                 static_cast<double>(res.samples()));
    meta.add("real_count_mean", res.real_count_mean());
    meta.add("real_count_variance", res.real_count_variance());
    meta.add("eigen_failures", res.eigen_failures);
    for (const auto& stat : c.statistics) {
        const auto sorted = res.sorted_statistic(stat);
        if (sorted.empty()) continue;
        const auto table = EcdfTable::from_sorted(sorted);
        Metadata m2 = meta;
        m2.add("statistic", stat);
        m2.add("finite_samples", static_cast<long long>(sorted.size()));
        write_file_atomic(out_path(c, stat), c.format == "json"
                                                 ? ecdf_json(table, m2)
                                                 : ecdf_csv(table, m2));
    }
    log << "simulate: " << res.samples() << " samples, P(largest real) = "
        << static_cast<double>(res.largest_is_real_count()) /
               static_cast<double>(res.samples())
        << "\n";
}

void write_histogram_file(const RunConfig& c, const std::string& suffix,
                          const std::vector<double>& sorted, int bins,
                          Metadata meta) {
    const Histogram h = Histogram::build(sorted, bins);
    meta.add("finite_samples", static_cast<long long>(sorted.size()));
    write_file_atomic(out_path(c, suffix), c.format == "json"
                                               ? histogram_json(h, meta)
                                               : histogram_csv(h, meta));
}

void write_gumbel_reference(const RunConfig& c, const std::string& suffix,
                            fredholm::GumbelKind kind) {
    fredholm::GapCurve ref;
    ref.method = fredholm::GapMethod::Limit;
    ref.n = 0;
    for (double t = -4.0; t <= 8.0 + 1e-12; t += 0.05) {
        ref.t.push_back(t);
        ref.probability.push_back(fredholm::gumbel_reference(t, kind));
    }
    Metadata meta = base_metadata(c);
    meta.add("reference",
             std::string(kind == fredholm::GumbelKind::RealGinibreRadius
                             ? "gumbel-real"
                             : "gumbel-complex"));
    write_gap_curves(c, suffix, {ref}, meta);
}

void cmd_figures(const RunConfig& c, std::ostream& log) {
    const auto want = [&](int k) { return c.which == 0 || c.which == k; };
    if (want(1)) {
        for (const long long n : {36LL, 64LL, 100LL}) {
            const auto res = run(c, ensemble::Kind::Real, n,
                                 effective_samples(c, 40000));
            for (const char* stat : {"largest-complex", "largest-real"}) {
                Metadata meta = base_metadata(c);
                meta.add("figure", 1LL);
                meta.add("fig_n", n);
                meta.add("statistic", std::string(stat));
                write_histogram_file(
                    c, "fig1." + std::string(stat) + ".n" + std::to_string(n),
                    res.sorted_statistic(stat), 60, meta);
            }
        }
        log << "figures: wrote figure 1 data\n";
    }
    if (want(2)) {
        ProportionTable table;
        for (const long long n : parse_n_list(c.n_list)) {
            const auto res = run(c, ensemble::Kind::Real, n, c.samples);
            const double p = static_cast<double>(res.largest_is_real_count()) /
                             static_cast<double>(res.samples());
            table.n.push_back(n);
            table.samples.push_back(res.samples());
            table.proportion.push_back(p);
            table.stderr_.push_back(std::sqrt(
                p * (1.0 - p) / static_cast<double>(res.samples())));
        }
        Metadata meta = base_metadata(c);
        meta.add("figure", 2LL);
        write_file_atomic(out_path(c, "fig2"),
                          c.format == "json" ? proportion_json(table, meta)
                                             : proportion_csv(table, meta));
        log << "figures: wrote figure 2 data\n";
    }
    if (want(3) || want(4) || want(5)) {
        const long long n = 100;
        const auto sc = specialfn::scaling_constants(n, c.gamma_mode);
        if (want(3)) {
            const auto res = run(c, ensemble::Kind::Real, n,
                                 effective_samples(c, 40000));
            for (const char* stat : {"largest-complex", "spectral-radius"}) {
                auto sorted = res.sorted_statistic(stat);
                for (double& v : sorted)
                    v = (v - sc.center_complex) * sc.scale_complex;
                Metadata meta = base_metadata(c);
                meta.add("figure", 3LL);
                meta.add("statistic", std::string(stat) + "-scaled");
                write_histogram_file(c, "fig3." + std::string(stat), sorted, 60,
                                     meta);
            }
            write_gumbel_reference(c, "fig3.reference",
                                   fredholm::GumbelKind::RealGinibreRadius);
            log << "figures: wrote figure 3 data\n";
        }
        if (want(4)) {
            const auto res = run(c, ensemble::Kind::Real, n,
                                 effective_samples(c, 40000));
            for (const char* stat : {"largest-complex", "largest-real"}) {
                Metadata meta = base_metadata(c);
                meta.add("figure", 4LL);
                meta.add("statistic", std::string(stat));
                write_histogram_file(c, "fig4." + std::string(stat),
                                     res.sorted_statistic(stat), 80, meta);
            }
            log << "figures: wrote figure 4 data\n";
        }
        if (want(5)) {
            Scatter sc5;
            const long long matrices = std::min<long long>(c.samples, 1000);
            for (long long i = 0; i < matrices; ++i) {
                ensemble::SampleStream stream(c.seed, static_cast<std::uint64_t>(i));
                const auto mat =
                    ensemble::sample_matrix(ensemble::Kind::Real, 100, stream);
                for (const auto& z : ensemble::eigenvalues(mat))
                    sc5.points.emplace_back(z.real(), z.imag());
            }
            Metadata meta = base_metadata(c);
            meta.add("figure", 5LL);
            meta.add("matrices", matrices);
            write_file_atomic(out_path(c, "fig5"),
                              c.format == "json" ? scatter_json(sc5, meta)
                                                 : scatter_csv(sc5, meta));
            log << "figures: wrote figure 5 data\n";
        }
    }
    if (want(6)) {
        const long long n = 100;
        const auto sc = specialfn::scaling_constants(n, c.gamma_mode);
        const long long samples = effective_samples(c, 40000);
        const auto res = run(c, ensemble::Kind::Complex, n, samples);
        auto sorted = res.sorted_statistic("spectral-radius");
        for (double& v : sorted) v = (v - sc.center_complex) * sc.scale_complex;
        const double ks = ensemble::ks_statistic(sorted, [](double t) {
            return fredholm::gumbel_reference(
                t, fredholm::GumbelKind::ComplexGinibreRadius);
        });
        Metadata meta = base_metadata(c);
        meta.add("figure", 6LL);
        meta.add("statistic", std::string("spectral-radius-scaled"));
        meta.add("ks_vs_gumbel_complex", ks);
        write_histogram_file(c, "fig6.complex-radius", sorted, 60, meta);
        write_gumbel_reference(c, "fig6.reference",
                               fredholm::GumbelKind::ComplexGinibreRadius);

        // companion: real-ensemble largest complex modulus against the
        // real-ensemble Gumbel, reported without a pass bound
        const auto res_r = run(c, ensemble::Kind::Real, n, samples);
        auto sorted_r = res_r.sorted_statistic("largest-complex");
        for (double& v : sorted_r) v = (v - sc.center_complex) * sc.scale_complex;
        const double ks_r = ensemble::ks_statistic(sorted_r, [](double t) {
            return fredholm::gumbel_reference(
                t, fredholm::GumbelKind::RealGinibreRadius);
        });
        Metadata meta_r = base_metadata(c);
        meta_r.add("figure", 6LL);
        meta_r.add("statistic", std::string("largest-complex-scaled"));
        meta_r.add("ks_vs_gumbel_real_informative", ks_r);
        write_histogram_file(c, "fig6.real-largest-complex", sorted_r, 60, meta_r);
        log << "figures: wrote figure 6 data (KS vs Gumbel = " << ks << ")\n";
    }
}

void cmd_selfcheck(const RunConfig& c, std::ostream& log) {
    // Pfaffian identity over random antisymmetric matrices
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 2 * (1 + static_cast<int>(rng() % 5));
        Eigen::MatrixXd b(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) b(i, j) = normal(rng);
        const Eigen::MatrixXd k = b - b.transpose();
        worst = std::max(worst, fredholm::pfaffian_det_identity_check(k));
    }
    log << "selfcheck: pfaffian identity residual " << worst << "\n";
    if (worst > 1e-10)
        throw fredholm::numerical_error("selfcheck: pfaffian identity residual");

    // regularized gamma complement over a parameter lattice
    double worst_pq = 0.0;
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 25; ++j) {
            const double a = 0.5 + (2000.0 - 0.5) * i / 39.0;
            const double x = 4000.0 * j / 24.0;
            const auto g = specialfn::reg_gamma(a, x);
            worst_pq = std::max(worst_pq, std::fabs(g.p + g.q - 1.0));
        }
    log << "selfcheck: reg_gamma complement residual " << worst_pq << "\n";
    if (worst_pq > 1e-14)
        throw fredholm::numerical_error("selfcheck: reg_gamma complement");

    // grid refinement of the limit law
    double worst_ref = 0.0;
    for (const double t : {-2.0, 0.0, 2.0}) {
        const double d = std::fabs(fredholm::limit_law_real(t, 64).value -
                                   fredholm::limit_law_real(t, 128).value);
        worst_ref = std::max(worst_ref, d);
    }
    log << "selfcheck: limit-law refinement delta " << worst_ref << "\n";
    if (worst_ref > 1e-6)
        throw fredholm::numerical_error("selfcheck: grid refinement");
    log << "selfcheck: ok\n";
}

}  // namespace

void validate(const RunConfig& c) {
    if (!(c.step > 0.0)) throw std::invalid_argument("step must be positive");
    if (!(c.t_min <= c.t_max))
        throw std::invalid_argument("t range is empty (t-min > t-max)");
    if (c.nodes < 16 || c.nodes > 512)
        throw std::invalid_argument("nodes must lie in [16, 512]");
    if (c.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (c.n < 1) throw std::invalid_argument("n must be >= 1");
    if (c.workers < 1 || c.workers > 256)
        throw std::invalid_argument("workers must lie in [1, 256]");
    if (c.format != "csv" && c.format != "json")
        throw std::invalid_argument("format must be csv or json");
    if (c.command == Command::Figures && (c.which < 0 || c.which > 6))
        throw std::invalid_argument("figure selector must lie in 1..6 (0 = all)");
    if (c.command == Command::Gap && c.kind == ensemble::Kind::Real && c.n < 4)
        throw std::invalid_argument("real gap needs n >= 4");
    if (c.command == Command::Gap && c.kind == ensemble::Kind::Complex && c.n < 10)
        throw std::invalid_argument("complex gap needs n >= 10");
}

std::vector<long long> parse_n_list(const std::string& spec) {
    // "a:b", "a:b:step" or "a,b,c"
    std::vector<long long> out;
    if (spec.find(':') != std::string::npos) {
        long long a = 0, b = 0, s = 5;
        const size_t p1 = spec.find(':');
        const size_t p2 = spec.find(':', p1 + 1);
        a = std::stoll(spec.substr(0, p1));
        b = std::stoll(spec.substr(p1 + 1, p2 == std::string::npos
                                               ? std::string::npos
                                               : p2 - p1 - 1));
        if (p2 != std::string::npos) s = std::stoll(spec.substr(p2 + 1));
        if (a < 1 || b < a || s < 1)
            throw std::invalid_argument("bad n-list range: " + spec);
        for (long long n = a; n <= b; n += s) out.push_back(n);
        return out;
    }
    size_t pos = 0;
    while (pos < spec.size()) {
        const size_t comma = spec.find(',', pos);
        const std::string tok =
            spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                        : comma - pos);
        out.push_back(std::stoll(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty n-list");
    return out;
}

int execute(const RunConfig& config, std::ostream& log) {
    try {
        switch (config.command) {
            case Command::LimitLaw: cmd_limit_law(config, log); break;
            case Command::Gap:
                if (config.kind == ensemble::Kind::Complex)
                    cmd_gap_complex(config, log);
                else if (config.n % 2 == 0)
                    cmd_gap_real_even(config, log);
                else
                    cmd_gap_real_odd(config, log);
                break;
            case Command::Simulate: cmd_simulate(config, log); break;
            case Command::Figures: cmd_figures(config, log); break;
            case Command::Selfcheck: cmd_selfcheck(config, log); break;
        }
    } catch (const io_error& e) {
        log << "I/O error: " << e.what() << "\n";
        return 5;
    } catch (const fredholm::numerical_error& e) {
        log << "numerical check failed: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        log << "invalid request: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace cli
}  // namespace ginx
