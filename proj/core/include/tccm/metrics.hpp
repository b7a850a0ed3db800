#pragma once

#include "tccm/model.hpp"
#include "tccm/trainer.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tccm {

// Probability that a random anomaly outranks a random normal, ties counting
// one half. Throws MetricError unless both classes are present.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Average precision: sum over positives, in descending score order (ties kept
// in index order), of precision at that rank times 1/P. Throws MetricError
// with no positives.
double auprc(std::span<const double> scores, std::span<const int> labels);

// Contrast score margin between the k highest scores and the rest.
struct CsmReport {
    std::size_t k = 0;
    double mu_o = 0.0;
    double sigma_o = 0.0;  // population std of the top-k scores
    double mu_i = 0.0;
    double sigma_i = 0.0;  // population std of the remaining scores
    double t = 0.0;        // (mu_o - mu_i) / sqrt(sigma_o^2 + sigma_i^2)
    bool infinite = false; // both variances zero; t holds +inf
};

// Throws MetricError unless 1 <= k < scores.size().
CsmReport csm(std::span<const double> scores, std::size_t k);

struct EpochCandidate {
    int epochs = 0;
    CsmReport report;
};

struct EpochSelection {
    int best_epochs = 0;
    std::vector<EpochCandidate> candidates;  // ascending epochs
};

// Picks the candidate with the largest margin among scores of `train_pool` at
// t = 1, with k = round(assumed_rate * n). One training run to the largest
// candidate, snapshotting at the others. Ties go to fewer epochs.
EpochSelection select_epochs(const Matrix& train_pool, const ModelParams& init, TrainConfig cfg,
                             std::vector<int> candidate_epochs, double assumed_rate = 0.05);

// Picks the best candidate from precomputed scores, one score vector per
// candidate epoch count.
EpochSelection select_from_scores(std::span<const int> candidate_epochs,
                                  std::span<const std::vector<double>> scores, std::size_t k);

}  // namespace tccm
