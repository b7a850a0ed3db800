#pragma once

#include "tccm/autodiff.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tccm {

// Labeled tabular rows. Labels: 0 = normal, 1 = anomaly.
struct Dataset {
    std::vector<std::string> feature_names;
    Matrix X;
    std::vector<int> y;
    std::string source;

    std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
    int dim() const { return static_cast<int>(X.cols()); }
    std::size_t anomaly_count() const;
    double anomaly_rate() const;

    Matrix rows_at(std::span<const std::size_t> indices) const;
    std::vector<int> labels_at(std::span<const std::size_t> indices) const;
};

// CSV with a header row and a column named "label" holding 0/1; every other
// column must parse as a decimal float. Throws DataFormatError naming the
// offending row/column.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text, const std::string& source = "<memory>");

// Writes features with round-trip-exact decimals, then the label column.
void write_csv(const Dataset& data, const std::filesystem::path& path);
std::string format_csv(const Dataset& data);

// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);

struct SplitPlan {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    // Anomalies held back from both partitions by the contamination protocol.
    std::vector<std::size_t> unused;
    std::uint64_t seed = 0;
    double contamination_ratio = 0.0;
};

// A seeded floor(50%) of the normal rows train; the remaining normals and all
// anomalies test. Index lists are sorted. Throws ConfigError with < 2 normals.
SplitPlan split_semi_supervised(const Dataset& data, std::uint64_t seed);

// Contamination protocol: anomalies are halved at random into a test half and
// an injection pool; k pool anomalies join train, with k the integer nearest
// to the solution of k / (train_normals + k) = ratio. Pool anomalies that are
// not injected go to `unused`. ratio == 0 returns the plan unchanged.
SplitPlan inject_contamination(const SplitPlan& plan, const Dataset& data, double ratio, std::uint64_t seed);

// Integer k in [0, max_k] minimizing |k / (base + k) - ratio|, smaller k on ties.
std::size_t contamination_count(std::size_t base, double ratio, std::size_t max_k);

// Per-feature z-score transform fitted on training rows.
struct Scaler {
    Vector mean;
    Vector std;

    static Scaler identity(int dim);
    Matrix transform(const Matrix& x) const;
    bool operator==(const Scaler&) const = default;
};

// Population statistics over `train` rows; std < 1e-12 is replaced by 1.
Scaler fit_scaler(const Dataset& data, std::span<const std::size_t> train);
Scaler fit_scaler(const Matrix& train_rows);
Matrix transform(const Scaler& scaler, const Matrix& x);

}  // namespace tccm
