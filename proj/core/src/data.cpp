#include "tccm/data.hpp"

#include "tccm/errors.hpp"
#include "tccm/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

namespace tccm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

bool parse_number(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::size_t> normals_of(const Dataset& d) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.y.size(); ++i) {
        if (d.y[i] == 0) idx.push_back(i);
    }
    return idx;
}

}  // namespace

std::size_t Dataset::anomaly_count() const {
    return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
}

double Dataset::anomaly_rate() const {
    return y.empty() ? 0.0 : static_cast<double>(anomaly_count()) / static_cast<double>(y.size());
}

Matrix Dataset::rows_at(std::span<const std::size_t> indices) const {
    Matrix out(static_cast<Eigen::Index>(indices.size()), X.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(indices[i]));
    }
    return out;
}

std::vector<int> Dataset::labels_at(std::span<const std::size_t> indices) const {
    std::vector<int> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(y[i]);
    return out;
}

Dataset parse_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw DataFormatError(source + ": empty file");

    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header_views = split_fields(line);
    const std::vector<std::string> header(header_views.begin(), header_views.end());
    std::size_t label_col = header.size();
    Dataset d;
    d.source = source;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "label") {
            if (label_col != header.size()) throw DataFormatError(source + ": duplicate label column");
            label_col = j;
        } else {
            d.feature_names.emplace_back(header[j]);
        }
    }
    if (label_col == header.size()) throw DataFormatError(source + ": missing 'label' column");
    if (d.feature_names.empty()) throw DataFormatError(source + ": no feature columns");

    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DataFormatError(source + ": row " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, header has " +
                                  std::to_string(header.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            double v = 0.0;
            if (!parse_number(fields[j], v)) {
                throw DataFormatError(source + ": row " + std::to_string(line_no) + ", column '" +
                                      std::string(header[j]) + "': cannot parse '" + std::string(fields[j]) + "'");
            }
            if (j == label_col) {
                if (v != 0.0 && v != 1.0) {
                    throw DataFormatError(source + ": row " + std::to_string(line_no) + ": label must be 0 or 1, got '" +
                                          std::string(fields[j]) + "'");
                }
                d.y.push_back(static_cast<int>(v));
            } else {
                values.push_back(v);
            }
        }
    }
    if (d.y.size() < 2) throw DataFormatError(source + ": need at least 2 data rows");

    const auto n = static_cast<Eigen::Index>(d.y.size());
    const auto dim = static_cast<Eigen::Index>(d.feature_names.size());
    d.X = Eigen::Map<Matrix>(values.data(), n, dim);
    return d;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataFormatError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path.string());
}

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw Error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string format_csv(const Dataset& data) {
    std::string out;
    for (const auto& name : data.feature_names) {
        out += name;
        out += ',';
    }
    out += "label\n";
    for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
            out += format_double(data.X(i, j));
            out += ',';
        }
        out += std::to_string(data.y[static_cast<std::size_t>(i)]);
        out += '\n';
    }
    return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataFormatError(path.string() + ": cannot write file");
    out << format_csv(data);
}

// ---------------------------------------------------------------------------

SplitPlan split_semi_supervised(const Dataset& data, std::uint64_t seed) {
    auto normals = normals_of(data);
    if (normals.size() < 2) {
        throw ConfigError("semi-supervised split needs at least 2 normal rows, found " +
                          std::to_string(normals.size()));
    }
    Rng rng(seed, Stream::Split);
    rng.shuffle(std::span(normals));

    SplitPlan plan;
    plan.seed = seed;
    const std::size_t n_train = normals.size() / 2;
    plan.train.assign(normals.begin(), normals.begin() + static_cast<std::ptrdiff_t>(n_train));
    plan.test.assign(normals.begin() + static_cast<std::ptrdiff_t>(n_train), normals.end());
    for (std::size_t i = 0; i < data.y.size(); ++i) {
        if (data.y[i] == 1) plan.test.push_back(i);
    }
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.test.begin(), plan.test.end());
    return plan;
}

std::size_t contamination_count(std::size_t base, double ratio, std::size_t max_k) {
    std::size_t best = 0;
    double best_gap = std::abs(0.0 - ratio);
    for (std::size_t k = 1; k <= max_k; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(base + k);
        const double gap = std::abs(frac - ratio);
        if (gap < best_gap) {
            best_gap = gap;
            best = k;
        }
        if (frac > ratio) break;
    }
    return best;
}

SplitPlan inject_contamination(const SplitPlan& plan, const Dataset& data, double ratio, std::uint64_t seed) {
    if (!(ratio >= 0.0) || ratio >= 1.0) {
        throw ConfigError("contamination ratio must be in [0, 1), got " + std::to_string(ratio));
    }
    if (ratio == 0.0) return plan;
    if (ratio > data.anomaly_rate()) {
        throw ConfigError("contamination ratio " + std::to_string(ratio) + " exceeds the dataset anomaly rate " +
                          std::to_string(data.anomaly_rate()));
    }

    std::vector<std::size_t> anomalies;
    for (std::size_t i : plan.test) {
        if (data.y[i] == 1) anomalies.push_back(i);
    }
    Rng rng(seed, Stream::Contamination);
    rng.shuffle(std::span(anomalies));
    const std::size_t reserved = (anomalies.size() + 1) / 2;
    const std::span<const std::size_t> pool(anomalies.data() + reserved, anomalies.size() - reserved);

    std::size_t train_normals = 0;
    for (std::size_t i : plan.train) train_normals += data.y[i] == 0 ? 1 : 0;

    // The nearest achievable count, searched without the pool cap so that an
    // undersized pool is reported instead of silently truncated.
    const std::size_t k = contamination_count(train_normals, ratio, data.rows());
    if (k > pool.size()) {
        throw ConfigError("contamination ratio " + std::to_string(ratio) + " needs " + std::to_string(k) +
                          " anomalies but only " + std::to_string(pool.size()) + " are available for injection");
    }

    SplitPlan out = plan;
    out.contamination_ratio = ratio;
    out.test.clear();
    for (std::size_t i : plan.test) {
        if (data.y[i] == 0) out.test.push_back(i);
    }
    out.test.insert(out.test.end(), anomalies.begin(), anomalies.begin() + static_cast<std::ptrdiff_t>(reserved));
    out.train.insert(out.train.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    out.unused.insert(out.unused.end(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    std::sort(out.unused.begin(), out.unused.end());
    return out;
}

// ---------------------------------------------------------------------------

Scaler Scaler::identity(int dim) {
    return Scaler{Vector::Zero(dim), Vector::Ones(dim)};
}

Matrix Scaler::transform(const Matrix& x) const {
    if (x.cols() != mean.size()) {
        throw DimensionError("scaler fitted on " + std::to_string(mean.size()) + " features, input has " +
                             std::to_string(x.cols()));
    }
    Matrix out = x;
    out.rowwise() -= mean.transpose();
    out.array().rowwise() /= std.transpose().array();
    return out;
}

Scaler fit_scaler(const Matrix& rows) {
    if (rows.rows() == 0) throw ConfigError("cannot fit a scaler on zero rows");
    const double n = static_cast<double>(rows.rows());
    Scaler s;
    s.mean = rows.colwise().sum().transpose() / n;
    s.std.resize(rows.cols());
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        const double var = (rows.col(j).array() - s.mean[j]).square().sum() / n;
        const double sd = std::sqrt(var);
        s.std[j] = sd < 1e-12 ? 1.0 : sd;
    }
    return s;
}

Scaler fit_scaler(const Dataset& data, std::span<const std::size_t> train) {
    return fit_scaler(data.rows_at(train));
}

Matrix transform(const Scaler& scaler, const Matrix& x) { return scaler.transform(x); }

}  // namespace tccm
