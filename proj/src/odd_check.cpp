#include "ginx/odd_check.hpp"

#include <algorithm>
#include <cmath>

#include "ginx/ensemble.hpp"

namespace ginx {
namespace fredholm {

OddGapReport finite_gap_real_odd_check(long long n, double t,
                                       long long samples, std::uint64_t seed,
                                       int m, double L, double L2,
                                       int workers) {
    if (n % 2 == 0 || n < 5)
        throw std::invalid_argument(
            "finite_gap_real_odd_check: n must be odd and >= 5");
    OddGapReport rep{};
    const double root = std::sqrt(static_cast<double>(n));
    rep.norms = kernels::odd_correction_norms(static_cast<int>(n),
                                              std::max(t - root, 1.0 - root + 0.5),
                                              8.0);

    ensemble::ExperimentConfig cfg;
    cfg.kind = ensemble::Kind::Real;
    cfg.n = static_cast<int>(n);
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.workers = workers;
    const ensemble::ExperimentResult res = ensemble::run_experiment(cfg);
    long long below = 0;
    for (const double v : res.largest_real)
        if (!(v > t)) ++below;  // odd n always has a real eigenvalue
    rep.mc_samples = res.samples();
    rep.mc_probability =
        static_cast<double>(below) / static_cast<double>(res.samples());
    rep.mc_stderr = std::sqrt(rep.mc_probability * (1.0 - rep.mc_probability) /
                              static_cast<double>(res.samples()));

    rep.even_below = finite_gap_real_even(n - 1, t, m, L, L2).value;
    rep.even_above = finite_gap_real_even(n + 1, t, m, L, L2).value;
    const double lo = std::min(rep.even_below, rep.even_above);
    const double hi = std::max(rep.even_below, rep.even_above);
    const double slack = 5.0 * rep.mc_stderr + 0.02;
    rep.consistent =
        rep.mc_probability >= lo - slack && rep.mc_probability <= hi + slack;
    return rep;
}

}  // namespace fredholm
}  // namespace ginx
