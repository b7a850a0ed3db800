#pragma once

#include "tccm/data.hpp"
#include "tccm/model.hpp"
#include "tccm/trainer.hpp"

#include <vector>

namespace tccm {

// End-to-end semi-supervised run: split -> (contamination) -> scaler -> train -> score test rows.
struct ExperimentConfig {
    TrainConfig train;  // train.seed also seeds the split and the initialization
    TimeEmbeddingConfig embed;
    int hidden = 256;
    bool normalize = true;
    double contamination = 0.0;
    double t_fixed = 1.0;
};

struct ExperimentResult {
    SplitPlan split;
    Scaler scaler;
    ModelParams params;
    std::vector<double> loss_trace;
    Matrix test_x;  // scaled
    std::vector<int> test_y;
    std::vector<double> test_scores;
    double auroc = 0.0;
    double auprc = 0.0;
};

// Split and scaler only, as used by training and by later evaluation of a checkpoint.
SplitPlan make_split(const Dataset& data, std::uint64_t seed, double contamination);

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& cfg, const EpochCallback& on_epoch = {});

}  // namespace tccm
