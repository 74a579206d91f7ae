#pragma once

// Deterministic CSV/JSON emission (fixed headers, 17-significant-digit
// numbers, atomic writes) plus the minimal parsing used by round-trip
// checks.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ginx/fredholm.hpp"

namespace ginx {
namespace cli {

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

std::string format_g17(double v);

// Ordered key/value block echoed into every output file.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> entries;
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, long long value);
};

// Write-to-temp then rename; throws io_error on failure.
void write_file_atomic(const std::string& path, const std::string& content);

std::string gap_curve_csv(const fredholm::GapCurve& curve, const Metadata& meta);
std::string gap_curve_json(const fredholm::GapCurve& curve, const Metadata& meta);
// several curves in one file: shared header/metadata, one row per (curve, t)
std::string gap_curves_csv(const std::vector<fredholm::GapCurve>& curves,
                           const Metadata& meta);
std::string gap_curves_json(const std::vector<fredholm::GapCurve>& curves,
                            const Metadata& meta);
fredholm::GapCurve parse_gap_curve_csv(const std::string& text);

struct EcdfTable {
    std::vector<double> t;
    std::vector<double> ecdf;
    std::vector<double> stderr_;
    static EcdfTable from_sorted(const std::vector<double>& sorted);
};
std::string ecdf_csv(const EcdfTable& table, const Metadata& meta);
std::string ecdf_json(const EcdfTable& table, const Metadata& meta);
EcdfTable parse_ecdf_csv(const std::string& text);

struct Histogram {
    std::vector<double> bin_left;
    std::vector<double> bin_right;
    std::vector<long long> count;
    std::vector<double> density;
    static Histogram build(const std::vector<double>& sorted, int bins);
};
std::string histogram_csv(const Histogram& h, const Metadata& meta);
std::string histogram_json(const Histogram& h, const Metadata& meta);

struct ProportionTable {
    std::vector<long long> n;
    std::vector<long long> samples;
    std::vector<double> proportion;
    std::vector<double> stderr_;
};
std::string proportion_csv(const ProportionTable& t, const Metadata& meta);
std::string proportion_json(const ProportionTable& t, const Metadata& meta);

struct Scatter {
    std::vector<std::pair<double, double>> points;  // (re, im)
};
std::string scatter_csv(const Scatter& s, const Metadata& meta);
std::string scatter_json(const Scatter& s, const Metadata& meta);

}  // namespace cli
}  // namespace ginx
