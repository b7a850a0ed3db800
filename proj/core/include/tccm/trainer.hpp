#pragma once

#include "tccm/autodiff.hpp"
#include "tccm/model.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tccm {

enum class LossKind {
    RowL2,         // mean_i ||f + z_i||_2
    RowL2Squared,  // mean_i ||f + z_i||_2^2
};

std::string_view to_string(LossKind kind);
// Accepts "l2" and "mse".
LossKind parse_loss_kind(std::string_view name);

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct TrainConfig {
    int epochs = 1;
    // Unset: 1024 when there are more than 10,000 training rows, else min(512, rows).
    std::optional<std::size_t> batch_size;
    double learning_rate = 0.005;
    LossKind loss = LossKind::RowL2;
    // Train on z + t*eps, eps ~ N(0, I); the target stays -z.
    bool noise_injection = false;
    // Train on t*z; the target stays -z.
    bool time_interpolation = false;
    std::uint64_t seed = 0;
    AdamConfig adam;

    // Throws ConfigError on epochs < 1, batch_size < 1 or learning_rate <= 0.
    void validate() const;
    std::size_t resolved_batch_size(std::size_t train_rows) const;
};

struct AdamState {
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;
    std::int64_t step = 0;

    static AdamState for_params(const ModelParams& params);
};

// Records the batch loss on the tape and returns its 1x1 node. `t` holds one
// time per row; `noise` (B x d) is required when cfg.noise_injection is set.
Tape::Node record_loss(Tape& tape, const ModelParams& params, const Matrix& batch, std::span<const double> t,
                       const TrainConfig& cfg, const Matrix* noise, ModelParams* grads);

double loss(const ModelParams& params, const Matrix& batch, std::span<const double> t, const TrainConfig& cfg,
            const Matrix* noise = nullptr);

struct LossAndGradient {
    double loss = 0.0;
    ModelParams gradient;
};
LossAndGradient loss_and_gradient(const ModelParams& params, const Matrix& batch, std::span<const double> t,
                                  const TrainConfig& cfg, const Matrix* noise = nullptr);

// Bias-corrected Adam. Throws NumericalError naming the tensor on a
// non-finite gradient; params and state are untouched in that case.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
               const AdamConfig& adam = {});

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_trace;  // row-weighted mean loss per epoch
};

// Called after every epoch with the 1-based epoch number.
using EpochCallback = std::function<void(int epoch, double mean_loss, const ModelParams& params)>;

// Minibatch training on `train_rows` (normal rows only in the semi-supervised
// protocol). Deterministic given (cfg.seed, cfg, data, init).
TrainResult train(const Matrix& train_rows, ModelParams init, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

}  // namespace tccm
