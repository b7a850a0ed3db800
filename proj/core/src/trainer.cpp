#include "tccm/trainer.hpp"

#include "tccm/errors.hpp"
#include "tccm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tccm {

std::string_view to_string(LossKind kind) {
    return kind == LossKind::RowL2 ? "l2" : "mse";
}

LossKind parse_loss_kind(std::string_view name) {
    if (name == "l2") return LossKind::RowL2;
    if (name == "mse") return LossKind::RowL2Squared;
    throw ConfigError("unknown loss '" + std::string(name) + "' (expected l2 or mse)");
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1, got " + std::to_string(epochs));
    if (batch_size && *batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive, got " + std::to_string(learning_rate));
    }
}

std::size_t TrainConfig::resolved_batch_size(std::size_t train_rows) const {
    if (batch_size) return *batch_size;
    if (train_rows > 10000) return 1024;
    return std::max<std::size_t>(1, std::min<std::size_t>(512, train_rows));
}

AdamState AdamState::for_params(const ModelParams& params) {
    AdamState s;
    params.for_each_tensor([&](std::string_view, auto values) {
        s.first_moment.emplace_back(values.size(), 0.0);
        s.second_moment.emplace_back(values.size(), 0.0);
    });
    return s;
}

Tape::Node record_loss(Tape& tape, const ModelParams& params, const Matrix& batch, std::span<const double> t,
                       const TrainConfig& cfg, const Matrix* noise, ModelParams* grads) {
    if (static_cast<Eigen::Index>(t.size()) != batch.rows()) {
        throw DimensionError("loss: " + std::to_string(t.size()) + " time values for " +
                             std::to_string(batch.rows()) + " rows");
    }
    Matrix input = batch;
    if (cfg.time_interpolation) {
        for (Eigen::Index i = 0; i < input.rows(); ++i) input.row(i) *= t[static_cast<std::size_t>(i)];
    }
    if (cfg.noise_injection) {
        if (!noise || noise->rows() != batch.rows() || noise->cols() != batch.cols()) {
            throw DimensionError("loss: noise injection needs a noise matrix shaped like the batch");
        }
        for (Eigen::Index i = 0; i < input.rows(); ++i) {
            input.row(i) += t[static_cast<std::size_t>(i)] * noise->row(i);
        }
    }
    auto x = tape.constant(std::move(input));
    auto target = tape.constant(batch);
    auto v = record_velocity(tape, params, x, t, grads);
    auto residual = tape.add(v, target);
    auto per_row = cfg.loss == LossKind::RowL2 ? tape.row_l2(residual) : tape.row_sq_l2(residual);
    return tape.mean(per_row);
}

double loss(const ModelParams& params, const Matrix& batch, std::span<const double> t, const TrainConfig& cfg,
            const Matrix* noise) {
    Tape tape;
    return tape.scalar(record_loss(tape, params, batch, t, cfg, noise, nullptr));
}

LossAndGradient loss_and_gradient(const ModelParams& params, const Matrix& batch, std::span<const double> t,
                                  const TrainConfig& cfg, const Matrix* noise) {
    LossAndGradient out{0.0, params.zeros_like()};
    Tape tape;
    auto root = record_loss(tape, params, batch, t, cfg, noise, &out.gradient);
    out.loss = tape.scalar(root);
    tape.backward(root);
    return out;
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state, double lr, const AdamConfig& adam) {
    std::vector<std::span<const double>> g;
    grads.for_each_tensor([&](std::string_view name, std::span<const double> values) {
        for (double x : values) {
            if (!std::isfinite(x)) throw NumericalError("adam: non-finite gradient in layer " + std::string(name));
        }
        g.push_back(values);
    });
    if (state.first_moment.size() != g.size()) {
        throw DimensionError("adam: optimizer state does not match parameters");
    }

    ++state.step;
    const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(state.step));
    std::size_t k = 0;
    params.for_each_tensor([&](std::string_view name, std::span<double> values) {
        auto& m = state.first_moment[k];
        auto& v = state.second_moment[k];
        const auto& gk = g[k];
        if (m.size() != values.size() || gk.size() != values.size()) {
            throw DimensionError("adam: shape mismatch in layer " + std::string(name));
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            m[i] = adam.beta1 * m[i] + (1.0 - adam.beta1) * gk[i];
            v[i] = adam.beta2 * v[i] + (1.0 - adam.beta2) * gk[i] * gk[i];
            const double m_hat = m[i] / c1;
            const double v_hat = v[i] / c2;
            values[i] -= lr * m_hat / (std::sqrt(v_hat) + adam.eps);
        }
        ++k;
    });
}

TrainResult train(const Matrix& train_rows, ModelParams init, const TrainConfig& cfg, const EpochCallback& on_epoch) {
    cfg.validate();
    if (train_rows.rows() == 0) throw ConfigError("training set is empty");
    init.validate();
    if (train_rows.cols() != init.input_dim) {
        throw DimensionError("training data has " + std::to_string(train_rows.cols()) +
                             " columns, model expects " + std::to_string(init.input_dim));
    }

    const auto n = static_cast<std::size_t>(train_rows.rows());
    const std::size_t batch_size = cfg.resolved_batch_size(n);
    Rng shuffle_rng(cfg.seed, Stream::Shuffle);
    Rng time_rng(cfg.seed, Stream::Time);
    Rng noise_rng(cfg.seed, Stream::Noise);

    TrainResult result{std::move(init), {}};
    ModelParams& params = result.params;
    AdamState state = AdamState::for_params(params);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(std::span(order));
        double weighted = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < n; start += batch_size, ++batch_index) {
            const std::size_t end = std::min(n, start + batch_size);
            const auto rows = static_cast<Eigen::Index>(end - start);
            Matrix batch(rows, train_rows.cols());
            for (Eigen::Index i = 0; i < rows; ++i) {
                batch.row(i) = train_rows.row(static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(i)]));
            }
            std::vector<double> t(static_cast<std::size_t>(rows));
            for (double& ti : t) ti = time_rng.uniform();
            Matrix noise;
            if (cfg.noise_injection) {
                noise.resize(rows, batch.cols());
                for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = noise_rng.normal();
            }

            auto lg = loss_and_gradient(params, batch, t, cfg, cfg.noise_injection ? &noise : nullptr);
            if (!std::isfinite(lg.loss)) {
                throw NumericalError("training loss is not finite at epoch " + std::to_string(epoch) + ", batch " +
                                     std::to_string(batch_index));
            }
            adam_step(params, lg.gradient, state, cfg.learning_rate, cfg.adam);
            weighted += lg.loss * static_cast<double>(rows);
        }
        const double mean_loss = weighted / static_cast<double>(n);
        result.loss_trace.push_back(mean_loss);
        if (on_epoch) on_epoch(epoch, mean_loss, params);
    }
    return result;
}

}  // namespace tccm
