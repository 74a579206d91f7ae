#pragma once

// Monte Carlo engine: Ginibre sampling, spectra, extremal statistics,
// deterministic counter-based seeding and mergeable experiment aggregates.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ginx/specialfn.hpp"

namespace ginx {
namespace ensemble {

enum class Kind { Real, Complex };
const char* kind_name(Kind k);

// Per-sample random stream derived from (master seed, sample index).
// Identical (seed, index) pairs reproduce bit-exactly on every platform:
// the engine is the standard-specified mt19937_64 and Gaussians come from
// an explicit Box-Muller transform.
class SampleStream {
  public:
    SampleStream(std::uint64_t master_seed, std::uint64_t sample_index);
    double uniform();   // in (0, 1]
    double gaussian();  // standard normal
    std::uint64_t raw() { return engine_(); }

    static constexpr const char* id() {
        return "box-muller/mt19937_64/splitmix64";
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct EnsembleMatrix {
    Kind kind = Kind::Real;
    int n = 0;
    Eigen::MatrixXd real_entries;     // populated for Kind::Real
    Eigen::MatrixXcd complex_entries; // populated for Kind::Complex
};

EnsembleMatrix sample_matrix(Kind kind, int n, SampleStream& stream);

// Full spectrum with multiplicity.  Real matrices go through a real Schur
// reduction so real eigenvalues carry imaginary part exactly zero and
// complex ones appear in exact conjugate pairs.
std::vector<std::complex<double>> eigenvalues(const EnsembleMatrix& m);

struct SpectrumSummary {
    double spectral_radius = 0.0;
    std::optional<double> largest_real;
    std::optional<double> largest_complex_modulus;
    int real_count = 0;
    bool largest_is_real = false;
    // (r', theta') for eigenvalues in the strict upper half plane with
    // r' above the configured floor
    std::vector<std::pair<double, double>> scaled_upper_half_points;
};

SpectrumSummary spectrum_summary(const std::vector<std::complex<double>>& eigs,
                                 int n, const specialfn::ScalingConstants& sc,
                                 double scaled_floor = -8.0);

struct ExperimentConfig {
    Kind kind = Kind::Real;
    int n = 0;
    long long samples = 0;
    std::uint64_t seed = 0;
    long long first_index = 0;
    double scaled_floor = -8.0;
    specialfn::GammaMode gamma_mode = specialfn::GammaMode::Implicit;
    int workers = 1;  // execution detail; excluded from identity/merging

    bool compatible(const ExperimentConfig& o) const {
        return kind == o.kind && n == o.n && seed == o.seed &&
               scaled_floor == o.scaled_floor && gamma_mode == o.gamma_mode;
    }
};

// Per-sample records in sample-index order; merge concatenates, so counts
// are exact and order-insensitive.
struct ExperimentResult {
    ExperimentConfig config;
    std::string sampler_id;
    std::vector<double> spectral_radius;
    std::vector<double> largest_real;             // NaN when none
    std::vector<double> largest_complex_modulus;  // NaN when none
    std::vector<std::uint32_t> real_count;
    std::vector<std::uint8_t> largest_is_real;
    std::vector<std::uint32_t> point_offsets;  // size samples + 1
    std::vector<std::pair<double, double>> scaled_points;
    long long eigen_failures = 0;
    std::vector<std::pair<long long, long long>> lineage;  // (first, count)

    long long samples() const { return static_cast<long long>(spectral_radius.size()); }
    long long largest_is_real_count() const;
    double real_count_mean() const;
    double real_count_variance() const;
    // sorted finite values of the named statistic
    std::vector<double> sorted_statistic(const std::string& name) const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult merge_results(const ExperimentResult& a,
                               const ExperimentResult& b);

// Sup distance between the ECDF of sorted samples and a reference CDF.
double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf);

// Mean count per sample of scaled upper-half points with r' > t falling in
// each angular sector (subsets of (0, pi)).
std::vector<double> sector_counts(
    const ExperimentResult& result, double t,
    const std::vector<std::pair<double, double>>& sectors);

}  // namespace ensemble
}  // namespace ginx
