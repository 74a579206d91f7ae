#include "ginx/output.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ginx {
namespace cli {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

void emit_metadata_csv(std::string& out, const Metadata& meta) {
    for (const auto& kv : meta.entries)
        out += "# " + kv.first + ": " + kv.second + "\n";
}

std::string metadata_json(const Metadata& meta) {
    std::string out = "{";
    for (size_t i = 0; i < meta.entries.size(); ++i) {
        if (i) out += ",";
        out += "\"" + json_escape(meta.entries[i].first) + "\":\"" +
               json_escape(meta.entries[i].second) + "\"";
    }
    out += "}";
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// data lines of a CSV body (skips '#' comments and the header)
std::vector<std::vector<std::string>> csv_rows(const std::string& text,
                                               const std::string& header) {
    std::istringstream in(text);
    std::string line;
    bool seen_header = false;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            if (line != header)
                throw io_error("csv parse: unexpected header '" + line + "'");
            seen_header = true;
            continue;
        }
        rows.push_back(split(line, ','));
    }
    if (!seen_header) throw io_error("csv parse: header not found");
    return rows;
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Metadata::add(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
}
void Metadata::add(const std::string& key, double value) {
    entries.emplace_back(key, format_g17(value));
}
void Metadata::add(const std::string& key, long long value) {
    entries.emplace_back(key, std::to_string(value));
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw io_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw io_error("rename to " + path + " failed: " + std::strerror(errno));
    }
}

std::string gap_curve_csv(const fredholm::GapCurve& curve, const Metadata& meta) {
    std::string out;
    emit_metadata_csv(out, meta);
    out += "t,probability,method,n,nodes,L,L2\n";
    for (size_t i = 0; i < curve.t.size(); ++i) {
        out += format_g17(curve.t[i]) + "," + format_g17(curve.probability[i]) +
               "," + fredholm::gap_method_name(curve.method) + "," +
               std::to_string(curve.n) + "," + std::to_string(curve.nodes) +
               "," + format_g17(curve.L) + "," + format_g17(curve.L2) + "\n";
    }
    return out;
}

std::string gap_curve_json(const fredholm::GapCurve& curve, const Metadata& meta) {
    std::string out = "{\"metadata\":" + metadata_json(meta) +
                      ",\"schema\":\"gap_curve\",\"method\":\"" +
                      fredholm::gap_method_name(curve.method) +
                      "\",\"n\":" + std::to_string(curve.n) +
                      ",\"nodes\":" + std::to_string(curve.nodes) +
                      ",\"L\":" + format_g17(curve.L) +
                      ",\"L2\":" + format_g17(curve.L2) + ",\"rows\":[";
    for (size_t i = 0; i < curve.t.size(); ++i) {
        if (i) out += ",";
        out += "[" + format_g17(curve.t[i]) + "," +
               format_g17(curve.probability[i]) + "]";
    }
    out += "]}\n";
    return out;
}

std::string gap_curves_csv(const std::vector<fredholm::GapCurve>& curves,
                           const Metadata& meta) {
    if (curves.empty()) throw std::invalid_argument("gap_curves_csv: no curves");
    std::string out = gap_curve_csv(curves.front(), meta);
    for (size_t i = 1; i < curves.size(); ++i) {
        const std::string whole = gap_curve_csv(curves[i], Metadata{});
        out += whole.substr(whole.find('\n') + 1);  // drop the repeated header
    }
    return out;
}

namespace {

std::string gap_curve_json_fragment(const fredholm::GapCurve& curve) {
    std::string out = "{\"method\":\"" +
                      std::string(fredholm::gap_method_name(curve.method)) +
                      "\",\"n\":" + std::to_string(curve.n) +
                      ",\"nodes\":" + std::to_string(curve.nodes) +
                      ",\"L\":" + format_g17(curve.L) +
                      ",\"L2\":" + format_g17(curve.L2) + ",\"rows\":[";
    for (size_t i = 0; i < curve.t.size(); ++i) {
        if (i) out += ",";
        out += "[" + format_g17(curve.t[i]) + "," +
               format_g17(curve.probability[i]) + "]";
    }
    out += "]}";
    return out;
}

}  // namespace

std::string gap_curves_json(const std::vector<fredholm::GapCurve>& curves,
                            const Metadata& meta) {
    std::string out = "{\"metadata\":" + metadata_json(meta) +
                      ",\"schema\":\"gap_curve_set\",\"curves\":[";
    for (size_t i = 0; i < curves.size(); ++i) {
        if (i) out += ",";
        out += gap_curve_json_fragment(curves[i]);
    }
    out += "]}\n";
    return out;
}

fredholm::GapCurve parse_gap_curve_csv(const std::string& text) {
    fredholm::GapCurve curve;
    const auto rows = csv_rows(text, "t,probability,method,n,nodes,L,L2");
    for (const auto& r : rows) {
        if (r.size() != 7) throw io_error("gap curve row arity");
        curve.t.push_back(std::stod(r[0]));
        curve.probability.push_back(std::stod(r[1]));
        curve.n = std::stoll(r[3]);
        curve.nodes = std::stoi(r[4]);
        curve.L = std::stod(r[5]);
        curve.L2 = std::stod(r[6]);
        for (const auto m : {fredholm::GapMethod::Limit,
                             fredholm::GapMethod::FiniteEven,
                             fredholm::GapMethod::ComplexTrace,
                             fredholm::GapMethod::MonteCarlo})
            if (r[2] == fredholm::gap_method_name(m)) curve.method = m;
    }
    return curve;
}

EcdfTable EcdfTable::from_sorted(const std::vector<double>& sorted) {
    EcdfTable t;
    const double n = static_cast<double>(sorted.size());
    t.t = sorted;
    t.ecdf.reserve(sorted.size());
    t.stderr_.reserve(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) {
        const double f = static_cast<double>(i + 1) / n;
        t.ecdf.push_back(f);
        t.stderr_.push_back(std::sqrt(f * (1.0 - f) / n));
    }
    return t;
}

std::string ecdf_csv(const EcdfTable& table, const Metadata& meta) {
    std::string out;
    emit_metadata_csv(out, meta);
    out += "t,ecdf,stderr\n";
    for (size_t i = 0; i < table.t.size(); ++i)
        out += format_g17(table.t[i]) + "," + format_g17(table.ecdf[i]) + "," +
               format_g17(table.stderr_[i]) + "\n";
    return out;
}

std::string ecdf_json(const EcdfTable& table, const Metadata& meta) {
    std::string out = "{\"metadata\":" + metadata_json(meta) +
                      ",\"schema\":\"ecdf\",\"rows\":[";
    for (size_t i = 0; i < table.t.size(); ++i) {
        if (i) out += ",";
        out += "[" + format_g17(table.t[i]) + "," + format_g17(table.ecdf[i]) +
               "," + format_g17(table.stderr_[i]) + "]";
    }
    out += "]}\n";
    return out;
}

EcdfTable parse_ecdf_csv(const std::string& text) {
    EcdfTable t;
    for (const auto& r : csv_rows(text, "t,ecdf,stderr")) {
        if (r.size() != 3) throw io_error("ecdf row arity");
        t.t.push_back(std::stod(r[0]));
        t.ecdf.push_back(std::stod(r[1]));
        t.stderr_.push_back(std::stod(r[2]));
    }
    return t;
}

Histogram Histogram::build(const std::vector<double>& sorted, int bins) {
    if (sorted.empty()) throw std::invalid_argument("histogram: empty sample");
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    Histogram h;
    double lo = sorted.front(), hi = sorted.back();
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / bins;
    h.bin_left.resize(bins);
    h.bin_right.resize(bins);
    h.count.assign(bins, 0);
    for (int b = 0; b < bins; ++b) {
        h.bin_left[b] = lo + b * width;
        h.bin_right[b] = lo + (b + 1) * width;
    }
    for (const double v : sorted) {
        int b = static_cast<int>((v - lo) / width);
        if (b >= bins) b = bins - 1;
        if (b < 0) b = 0;
        ++h.count[b];
    }
    const double total = static_cast<double>(sorted.size());
    h.density.resize(bins);
    for (int b = 0; b < bins; ++b)
        h.density[b] = static_cast<double>(h.count[b]) / (total * width);
    return h;
}

std::string histogram_csv(const Histogram& h, const Metadata& meta) {
    std::string out;
    emit_metadata_csv(out, meta);
    out += "bin_left,bin_right,count,density\n";
    for (size_t i = 0; i < h.count.size(); ++i)
        out += format_g17(h.bin_left[i]) + "," + format_g17(h.bin_right[i]) +
               "," + std::to_string(h.count[i]) + "," +
               format_g17(h.density[i]) + "\n";
    return out;
}

std::string histogram_json(const Histogram& h, const Metadata& meta) {
    std::string out = "{\"metadata\":" + metadata_json(meta) +
                      ",\"schema\":\"histogram\",\"rows\":[";
    for (size_t i = 0; i < h.count.size(); ++i) {
        if (i) out += ",";
        out += "[" + format_g17(h.bin_left[i]) + "," +
               format_g17(h.bin_right[i]) + "," + std::to_string(h.count[i]) +
               "," + format_g17(h.density[i]) + "]";
    }
    out += "]}\n";
    return out;
}

std::string proportion_csv(const ProportionTable& t, const Metadata& meta) {
    std::string out;
    emit_metadata_csv(out, meta);
    out += "n,samples,proportion_largest_real,stderr\n";
    for (size_t i = 0; i < t.n.size(); ++i)
        out += std::to_string(t.n[i]) + "," + std::to_string(t.samples[i]) +
               "," + format_g17(t.proportion[i]) + "," +
               format_g17(t.stderr_[i]) + "\n";
    return out;
}

std::string proportion_json(const ProportionTable& t, const Metadata& meta) {
    std::string out = "{\"metadata\":" + metadata_json(meta) +
                      ",\"schema\":\"proportion\",\"rows\":[";
    for (size_t i = 0; i < t.n.size(); ++i) {
        if (i) out += ",";
        out += "[" + std::to_string(t.n[i]) + "," + std::to_string(t.samples[i]) +
               "," + format_g17(t.proportion[i]) + "," +
               format_g17(t.stderr_[i]) + "]";
    }
    out += "]}\n";
    return out;
}

std::string scatter_csv(const Scatter& s, const Metadata& meta) {
    std::string out;
    emit_metadata_csv(out, meta);
    out += "re,im\n";
    for (const auto& p : s.points)
        out += format_g17(p.first) + "," + format_g17(p.second) + "\n";
    return out;
}

std::string scatter_json(const Scatter& s, const Metadata& meta) {
    std::string out = "{\"metadata\":" + metadata_json(meta) +
                      ",\"schema\":\"scatter\",\"rows\":[";
    for (size_t i = 0; i < s.points.size(); ++i) {
        if (i) out += ",";
        out += "[" + format_g17(s.points[i].first) + "," +
               format_g17(s.points[i].second) + "]";
    }
    out += "]}\n";
    return out;
}

}  // namespace cli
}  // namespace ginx
