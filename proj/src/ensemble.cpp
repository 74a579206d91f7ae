#include "ginx/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace ginx {
namespace ensemble {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

const char* kind_name(Kind k) { return k == Kind::Real ? "real" : "complex"; }

SampleStream::SampleStream(std::uint64_t master_seed, std::uint64_t sample_index)
    : engine_(splitmix64(splitmix64(master_seed) ^
                         splitmix64(sample_index + 0x51B5C19Dull))) {}

double SampleStream::uniform() {
    // 53-bit mantissa, strictly in (0, 1]
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double SampleStream::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

EnsembleMatrix sample_matrix(Kind kind, int n, SampleStream& stream) {
    if (n < 1) throw std::invalid_argument("sample_matrix: n must be >= 1");
    EnsembleMatrix m;
    m.kind = kind;
    m.n = n;
    if (kind == Kind::Real) {
        m.real_entries.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.real_entries(i, j) = stream.gaussian();
    } else {
        m.complex_entries.resize(n, n);
        const double s = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double re = stream.gaussian();
                const double im = stream.gaussian();
                m.complex_entries(i, j) = std::complex<double>(s * re, s * im);
            }
    }
    return m;
}

std::vector<std::complex<double>> eigenvalues(const EnsembleMatrix& m) {
    std::vector<std::complex<double>> out;
    out.reserve(m.n);
    if (m.kind == Kind::Real) {
        if (!m.real_entries.allFinite())
            throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
        Eigen::RealSchur<Eigen::MatrixXd> schur(m.real_entries, false);
        if (schur.info() != Eigen::Success)
            throw std::runtime_error("eigenvalues: real Schur iteration failed");
        const Eigen::MatrixXd& T = schur.matrixT();
        const int n = m.n;
        for (int i = 0; i < n;) {
            if (i + 1 < n && T(i + 1, i) != 0.0) {
                const double p = 0.5 * (T(i, i) + T(i + 1, i + 1));
                const double d = 0.5 * (T(i, i) - T(i + 1, i + 1));
                const double disc = d * d + T(i, i + 1) * T(i + 1, i);
                if (disc < 0.0) {
                    const double q = std::sqrt(-disc);
                    out.emplace_back(p, q);
                    out.emplace_back(p, -q);  // exact conjugate
                } else {
                    const double s = std::sqrt(disc);
                    out.emplace_back(p + s, 0.0);
                    out.emplace_back(p - s, 0.0);
                }
                i += 2;
            } else {
                out.emplace_back(T(i, i), 0.0);
                ++i;
            }
        }
    } else {
        if (!m.complex_entries.allFinite())
            throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m.complex_entries, false);
        if (schur.info() != Eigen::Success)
            throw std::runtime_error("eigenvalues: complex Schur iteration failed");
        for (int i = 0; i < m.n; ++i) out.push_back(schur.matrixT()(i, i));
    }
    return out;
}

SpectrumSummary spectrum_summary(const std::vector<std::complex<double>>& eigs,
                                 int n, const specialfn::ScalingConstants& sc,
                                 double scaled_floor) {
    if (static_cast<int>(eigs.size()) != n)
        throw std::invalid_argument("spectrum_summary: eigenvalue count mismatch");
    SpectrumSummary s;
    double max_real_abs = -1.0;
    for (const auto& z : eigs) {
        const double az = std::abs(z);
        s.spectral_radius = std::max(s.spectral_radius, az);
        if (z.imag() == 0.0) {
            ++s.real_count;
            max_real_abs = std::max(max_real_abs, std::fabs(z.real()));
            if (!s.largest_real || z.real() > *s.largest_real)
                s.largest_real = z.real();
        } else {
            if (!s.largest_complex_modulus || az > *s.largest_complex_modulus)
                s.largest_complex_modulus = az;
            if (z.imag() > 0.0) {
                const double rp = (az - sc.center_complex) * sc.scale_complex;
                if (rp >= scaled_floor)
                    s.scaled_upper_half_points.emplace_back(rp, std::arg(z));
            }
        }
    }
    s.largest_is_real =
        s.largest_real.has_value() &&
        (!s.largest_complex_modulus ||
         max_real_abs >= *s.largest_complex_modulus);
    return s;
}

long long ExperimentResult::largest_is_real_count() const {
    long long c = 0;
    for (const auto v : largest_is_real) c += v;
    return c;
}

double ExperimentResult::real_count_mean() const {
    if (real_count.empty()) return 0.0;
    long long sum = 0;
    for (const auto v : real_count) sum += v;
    return static_cast<double>(sum) / static_cast<double>(real_count.size());
}

double ExperimentResult::real_count_variance() const {
    if (real_count.size() < 2) return 0.0;
    const double mean = real_count_mean();
    double acc = 0.0, comp = 0.0;
    for (const auto v : real_count) {
        const double d = (v - mean) * (v - mean) - comp;
        const double t = acc + d;
        comp = (t - acc) - d;
        acc = t;
    }
    return acc / static_cast<double>(real_count.size() - 1);
}

std::vector<double> ExperimentResult::sorted_statistic(
    const std::string& name) const {
    const std::vector<double>* src = nullptr;
    if (name == "spectral-radius") src = &spectral_radius;
    else if (name == "largest-real") src = &largest_real;
    else if (name == "largest-complex") src = &largest_complex_modulus;
    else throw std::invalid_argument("unknown statistic: " + name);
    std::vector<double> out;
    out.reserve(src->size());
    for (const double v : *src)
        if (std::isfinite(v)) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct SampleRecord {
    double radius;
    double largest_real;
    double largest_complex;
    std::uint32_t real_count;
    std::uint8_t is_real;
    std::vector<std::pair<double, double>> points;
    bool failed;
};

SampleRecord one_sample(const ExperimentConfig& cfg,
                        const specialfn::ScalingConstants& sc,
                        long long index) {
    SampleRecord rec{};
    SampleStream stream(cfg.seed, static_cast<std::uint64_t>(index));
    const EnsembleMatrix mat = sample_matrix(cfg.kind, cfg.n, stream);
    std::vector<std::complex<double>> eigs;
    try {
        eigs = eigenvalues(mat);
    } catch (const std::runtime_error&) {
        rec.failed = true;
        return rec;
    }
    // periodic backward-error spot check on a few eigenpairs
    if (index % 1024 == 0 && cfg.kind == Kind::Real) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(mat.real_entries, true);
        if (es.info() == Eigen::Success) {
            const double scale = mat.real_entries.norm();
            for (int k = 0; k < 3; ++k) {
                const int j =
                    static_cast<int>(stream.raw() % static_cast<std::uint64_t>(cfg.n));
                const auto v = es.eigenvectors().col(j);
                const double resid =
                    (mat.real_entries.cast<std::complex<double>>() * v -
                     es.eigenvalues()[j] * v)
                        .norm();
                if (resid > 1e-8 * scale) {
                    rec.failed = true;
                    return rec;
                }
            }
        }
    }
    const SpectrumSummary s =
        spectrum_summary(eigs, cfg.n, sc, cfg.scaled_floor);
    rec.radius = s.spectral_radius;
    rec.largest_real = s.largest_real.value_or(kNaN);
    rec.largest_complex = s.largest_complex_modulus.value_or(kNaN);
    rec.real_count = static_cast<std::uint32_t>(s.real_count);
    rec.is_real = s.largest_is_real ? 1 : 0;
    rec.points = s.scaled_upper_half_points;
    return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.samples < 1)
        throw std::invalid_argument("run_experiment: samples must be >= 1");
    if (config.n < 1) throw std::invalid_argument("run_experiment: n must be >= 1");
    const specialfn::ScalingConstants sc =
        specialfn::scaling_constants(std::max<long long>(config.n, 2),
                                     config.gamma_mode);

    const long long samples = config.samples;
    std::vector<SampleRecord> records(static_cast<size_t>(samples));
    const int workers = std::max(1, config.workers);
    if (workers == 1) {
        for (long long i = 0; i < samples; ++i)
            records[static_cast<size_t>(i)] =
                one_sample(config, sc, config.first_index + i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<long long> next{0};
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    const long long i = next.fetch_add(1);
                    if (i >= samples) return;
                    records[static_cast<size_t>(i)] =
                        one_sample(config, sc, config.first_index + i);
                }
            });
        for (auto& th : pool) th.join();
    }

    ExperimentResult out;
    out.config = config;
    out.sampler_id = SampleStream::id();
    out.lineage.emplace_back(config.first_index, samples);
    out.spectral_radius.reserve(samples);
    out.point_offsets.reserve(samples + 1);
    out.point_offsets.push_back(0);
    for (const auto& rec : records) {
        if (rec.failed) {
            ++out.eigen_failures;
            // keep index alignment with an empty record
            out.spectral_radius.push_back(kNaN);
            out.largest_real.push_back(kNaN);
            out.largest_complex_modulus.push_back(kNaN);
            out.real_count.push_back(0);
            out.largest_is_real.push_back(0);
            out.point_offsets.push_back(
                static_cast<std::uint32_t>(out.scaled_points.size()));
            continue;
        }
        out.spectral_radius.push_back(rec.radius);
        out.largest_real.push_back(rec.largest_real);
        out.largest_complex_modulus.push_back(rec.largest_complex);
        out.real_count.push_back(rec.real_count);
        out.largest_is_real.push_back(rec.is_real);
        out.scaled_points.insert(out.scaled_points.end(), rec.points.begin(),
                                 rec.points.end());
        out.point_offsets.push_back(
            static_cast<std::uint32_t>(out.scaled_points.size()));
    }
    if (out.eigen_failures * 10000 > samples)
        throw std::runtime_error(
            "run_experiment: eigensolver failure rate above 0.01%");
    return out;
}

ExperimentResult merge_results(const ExperimentResult& a,
                               const ExperimentResult& b) {
    if (!a.config.compatible(b.config))
        throw std::invalid_argument("merge_results: incompatible configurations");
    if (a.samples() == 0) return b;
    if (b.samples() == 0) return a;
    const ExperimentResult* lo = &a;
    const ExperimentResult* hi = &b;
    if (hi->config.first_index < lo->config.first_index) std::swap(lo, hi);
    if (lo->config.first_index + lo->samples() > hi->config.first_index)
        throw std::invalid_argument("merge_results: overlapping sample index ranges");

    ExperimentResult out = *lo;
    out.config.samples = lo->samples() + hi->samples();
    auto append = [](auto& dst, const auto& src) {
        dst.insert(dst.end(), src.begin(), src.end());
    };
    append(out.spectral_radius, hi->spectral_radius);
    append(out.largest_real, hi->largest_real);
    append(out.largest_complex_modulus, hi->largest_complex_modulus);
    append(out.real_count, hi->real_count);
    append(out.largest_is_real, hi->largest_is_real);
    const std::uint32_t base = out.point_offsets.back();
    for (size_t i = 1; i < hi->point_offsets.size(); ++i)
        out.point_offsets.push_back(base + hi->point_offsets[i]);
    append(out.scaled_points, hi->scaled_points);
    out.eigen_failures += hi->eigen_failures;
    for (const auto& seg : hi->lineage) out.lineage.push_back(seg);
    return out;
}

double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf) {
    if (sorted_samples.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    const double n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (size_t i = 0; i < sorted_samples.size(); ++i) {
        if (i > 0 && sorted_samples[i] < sorted_samples[i - 1])
            throw std::invalid_argument("ks_statistic: samples not sorted");
        const double f = cdf(sorted_samples[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

std::vector<double> sector_counts(
    const ExperimentResult& result, double t,
    const std::vector<std::pair<double, double>>& sectors) {
    constexpr double kPi = 3.14159265358979323846;
    for (const auto& s : sectors)
        if (!(s.first >= 0.0 && s.first < s.second && s.second <= kPi))
            throw std::invalid_argument("sector_counts: sector outside (0, pi)");
    if (t < result.config.scaled_floor)
        throw std::invalid_argument(
            "sector_counts: t below the stored scaled-point floor");
    std::vector<double> means(sectors.size(), 0.0);
    const long long samples = result.samples();
    if (samples == 0) return means;
    for (size_t s = 0; s < sectors.size(); ++s) {
        long long total = 0;
        for (const auto& p : result.scaled_points)
            if (p.first > t && p.second >= sectors[s].first &&
                p.second < sectors[s].second)
                ++total;
        means[s] = static_cast<double>(total) / static_cast<double>(samples);
    }
    return means;
}

}  // namespace ensemble
}  // namespace ginx
