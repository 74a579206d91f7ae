#pragma once

// Odd-n gap consistency: the correction-norm decay plus a Monte Carlo
// sandwich between the two even Fredholm neighbours (the full odd-n
// determinant with its extra rank corrections is intentionally not built).

#include <cstdint>

#include "ginx/fredholm.hpp"
#include "ginx/kernels.hpp"

namespace ginx {
namespace fredholm {

struct OddGapReport {
    kernels::OddCorrectionNorms norms;
    double mc_probability;
    double mc_stderr;
    long long mc_samples;
    double even_below;  // P_{R,n-1}(t)
    double even_above;  // P_{R,n+1}(t)
    bool consistent;    // MC within the even interval +- (5 se + 0.02)
};

// t is the absolute threshold, as in finite_gap_real_even.
OddGapReport finite_gap_real_odd_check(long long n, double t,
                                       long long samples = 20000,
                                       std::uint64_t seed = 1,
                                       int m = 64, double L = 12.0,
                                       double L2 = 12.0, int workers = 1);

}  // namespace fredholm
}  // namespace ginx
