#pragma once

#include "tccm/data.hpp"
#include "tccm/pipeline.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace tccm {

// ---------------------------------------------------------------------------
// Gaussian mixtures

enum class GmmRole { Normal, Anomaly };

struct GmmComponent {
    double weight = 1.0;
    Vector mean;
    double sigma = 1.0;  // isotropic: covariance sigma^2 I
};

struct GmmSpec {
    std::vector<GmmComponent> components;
    int dim = 0;
    GmmRole role = GmmRole::Normal;

    // Weights sum to 1 within 1e-12, sigma > 0, means sized dim.
    void validate() const;
};

// Each draw picks a component by weight and adds sigma * N(0, I) (Box–Muller).
// `component_of` receives the chosen component per row when non-null.
Matrix sample_gmm(const GmmSpec& spec, std::size_t n, std::uint64_t seed,
                  std::vector<int>* component_of = nullptr);

// Three equal-weight modes at -3·1, 0, +3·1 with identity covariance.
GmmSpec shift_normal_spec(int dim);
// Two equal-weight modes at -9·1 and +9·1 with identity covariance.
GmmSpec shift_anomaly_spec(int dim);

// Normals from `normal`, anomalies from `anomaly`, labeled.
Dataset gmm_dataset(const GmmSpec& normal, std::size_t n_normal, const GmmSpec& anomaly, std::size_t n_anomaly,
                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Two-dimensional illustrations

enum class Figure1Kind { Ring, Moons, Clusters };

std::string_view to_string(Figure1Kind kind);

// Ring:     normals on the unit circle with radial noise sd 0.05; anomalies ~ N(0, 0.1 I).
// Moons:    normals on the upper half circle, anomalies sparse on the lower interleaved moon.
// Clusters: normals ~ N((-2,-2), 0.5^2 I); anomalies ~ N((2,2), 0.5^2 I).
Dataset make_figure1_dataset(Figure1Kind kind, std::size_t n_normal, std::size_t n_anomaly, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Feature-attribution benchmark

struct InterpretabilityData {
    Dataset data;
    // Shifted feature indices per row (sorted); empty for normal rows.
    std::vector<std::vector<std::size_t>> truth;
};

// Normals ~ N(0, I_d). Three anomaly components shift a fixed set of 1, 2 and
// 3 distinct features respectively; each shifted value gets U(15, 20) added.
// Throws ConfigError for d < 3.
InterpretabilityData make_interpretability_dataset(int d, std::uint64_t seed, std::size_t n_normal = 2000,
                                                   std::size_t n_per_component = 100);

struct ExplanationScores {
    double exact_match = 0.0;
    double jaccard = 0.0;
};

// Throws MetricError on an empty truth set or length mismatch.
ExplanationScores explanation_metrics(const std::vector<std::vector<std::size_t>>& predicted,
                                      const std::vector<std::vector<std::size_t>>& truth);

// ---------------------------------------------------------------------------
// Score-law oracles

// ln Gamma(x) for x > 0 (Lanczos approximation).
double log_gamma(double x);

// E||sigma_f * eps||, eps ~ N(0, I_d): sigma_f * sqrt(2) * Gamma((d+1)/2) / Gamma(d/2).
double chi_mean(int d, double sigma_f);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

// Monte Carlo E||delta + eps|| with ||delta||^2 = lambda, eps ~ N(0, I_d).
McEstimate noncentral_chi_mean_mc(int d, double lambda, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Studies

struct StudyTraining {
    int epochs = 20;
    std::optional<std::size_t> batch_size;  // unset: the trainer's size rule
    double learning_rate = 0.005;
    LossKind loss = LossKind::RowL2;
    int hidden = 256;
    TimeEmbeddingConfig embed;
};

struct MismatchConfig {
    std::size_t n_normal = 2000;  // half trains, half tests
    std::size_t n_anomaly = 200;
    double anomaly_offset = 9.0;
    StudyTraining training;
};

struct MismatchRow {
    int dim = 0;
    double auroc = 0.0;
    double auprc = 0.0;
    double normal_mean = 0.0;
    double normal_median = 0.0;
    double anomaly_mean = 0.0;
    double anomaly_median = 0.0;
    double normal_stderr = 0.0;  // standard error of normal_mean
    double sigma_f = 0.0;        // normal_mean / chi_mean(d, 1)
    double chi_prediction = 0.0; // chi_mean(d, sigma_f)
    std::vector<double> normal_scores;
    std::vector<double> anomaly_scores;
};

// Anomaly mean for the mismatch study: +offset / -offset on alternating
// coordinates, away from the line through the normal modes.
Vector mismatch_anomaly_mean(int dim, double offset = 9.0);

std::vector<MismatchRow> mismatch_study(const std::vector<int>& dims, std::uint64_t seed,
                                        const MismatchConfig& cfg = {});

struct InterpretabilityConfig {
    std::size_t n_normal = 2000;
    std::size_t n_per_component = 100;
    StudyTraining training;
};

struct InterpretabilityResult {
    int dim = 0;
    ExplanationScores explanation;
    double auroc = 0.0;
    double auprc = 0.0;
    std::size_t anomalies = 0;
};

InterpretabilityResult interpretability_study(int d, std::uint64_t seed, const InterpretabilityConfig& cfg = {});

struct Figure1Result {
    ExperimentResult run;
    std::vector<double> t_grid;
    std::vector<double> auroc_by_t;
};

// Trains on a 2D illustration and sweeps the scoring time over t_grid.
Figure1Result figure1_study(Figure1Kind kind, std::uint64_t seed, const StudyTraining& training,
                            std::size_t n_normal = 1000, std::size_t n_anomaly = 100,
                            std::vector<double> t_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});

ExperimentConfig to_experiment(const StudyTraining& training, std::uint64_t seed);

}  // namespace tccm
