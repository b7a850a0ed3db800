#include "tccm/time_embedding.hpp"

#include "tccm/errors.hpp"

#include <cmath>
#include <string>

namespace tccm {

namespace {

void check_time(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError("time embedding: t = " + std::to_string(t) + " outside [0, 1]");
    }
}

void check_params(const TimeEmbeddingConfig& cfg, const TimeEmbeddingParams& p) {
    switch (cfg.kind) {
        case EmbeddingKind::Sinusoidal:
            return;
        case EmbeddingKind::LinearSin:
            if (p.w1.rows() != 1 || p.w1.cols() != cfg.dim || p.b1.size() != cfg.dim) {
                throw ConfigError("time embedding: LinearSin weights missing or misshaped");
            }
            return;
        case EmbeddingKind::SinusoidalMlp:
            if (p.w1.rows() != cfg.dim || p.w1.cols() != cfg.mlp_hidden ||
                p.w2.rows() != cfg.mlp_hidden || p.w2.cols() != cfg.dim) {
                throw ConfigError("time embedding: SinusoidalMlp weights missing or misshaped");
            }
            return;
    }
}

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
    return m;
}

}  // namespace

std::string_view to_string(EmbeddingKind kind) {
    switch (kind) {
        case EmbeddingKind::Sinusoidal: return "sinusoidal";
        case EmbeddingKind::LinearSin: return "linear-sin";
        case EmbeddingKind::SinusoidalMlp: return "sinusoidal-mlp";
    }
    return "sinusoidal";
}

EmbeddingKind parse_embedding_kind(std::string_view name) {
    if (name == "sinusoidal") return EmbeddingKind::Sinusoidal;
    if (name == "linear-sin") return EmbeddingKind::LinearSin;
    if (name == "sinusoidal-mlp") return EmbeddingKind::SinusoidalMlp;
    throw ConfigError("unknown time embedding kind '" + std::string(name) + "'");
}

void TimeEmbeddingConfig::validate() const {
    if (dim < 2 || dim % 2 != 0) {
        throw ConfigError("time embedding dim must be even and >= 2, got " + std::to_string(dim));
    }
    if (kind == EmbeddingKind::SinusoidalMlp && mlp_hidden < 1) {
        throw ConfigError("time embedding mlp_hidden must be >= 1");
    }
}

TimeEmbeddingParams init_embedding_params(const TimeEmbeddingConfig& cfg, Rng& rng) {
    cfg.validate();
    TimeEmbeddingParams p;
    switch (cfg.kind) {
        case EmbeddingKind::Sinusoidal:
            break;
        case EmbeddingKind::LinearSin:
            p.w1 = uniform_matrix(1, cfg.dim, 1.0, rng);
            p.b1 = Vector::Zero(cfg.dim);
            break;
        case EmbeddingKind::SinusoidalMlp:
            p.w1 = uniform_matrix(cfg.dim, cfg.mlp_hidden, std::sqrt(1.0 / cfg.dim), rng);
            p.b1 = Vector::Zero(cfg.mlp_hidden);
            p.w2 = uniform_matrix(cfg.mlp_hidden, cfg.dim, std::sqrt(1.0 / cfg.mlp_hidden), rng);
            p.b2 = Vector::Zero(cfg.dim);
            break;
    }
    return p;
}

Vector sinusoidal_embedding(double t, int dim) {
    Vector out(dim);
    for (int i = 0; i < dim / 2; ++i) {
        const double freq = 1.0 / std::pow(10000.0, static_cast<double>(2 * i) / dim);
        out[2 * i] = std::sin(t * freq);
        out[2 * i + 1] = std::cos(t * freq);
    }
    return out;
}

Vector embed(double t, const TimeEmbeddingConfig& cfg, const TimeEmbeddingParams& params) {
    const double ts[] = {t};
    return embed_batch(ts, cfg, params).row(0).transpose();
}

Matrix embed_batch(std::span<const double> t, const TimeEmbeddingConfig& cfg,
                   const TimeEmbeddingParams& params) {
    cfg.validate();
    check_params(cfg, params);
    const auto n = static_cast<Eigen::Index>(t.size());
    for (double ti : t) check_time(ti);

    switch (cfg.kind) {
        case EmbeddingKind::Sinusoidal: {
            Matrix out(n, cfg.dim);
            for (Eigen::Index i = 0; i < n; ++i) out.row(i) = sinusoidal_embedding(t[i], cfg.dim).transpose();
            return out;
        }
        case EmbeddingKind::LinearSin: {
            Matrix col = Eigen::Map<const Matrix>(t.data(), n, 1);
            return affine(col, params.w1, params.b1).array().sin().matrix();
        }
        case EmbeddingKind::SinusoidalMlp: {
            Matrix s(n, cfg.dim);
            for (Eigen::Index i = 0; i < n; ++i) s.row(i) = sinusoidal_embedding(t[i], cfg.dim).transpose();
            return affine(relu(affine(s, params.w1, params.b1)), params.w2, params.b2);
        }
    }
    return {};
}

Tape::Node record_embedding(Tape& tape, std::span<const double> t, const TimeEmbeddingConfig& cfg,
                            const TimeEmbeddingParams& params, TimeEmbeddingParams* grads) {
    cfg.validate();
    check_params(cfg, params);
    for (double ti : t) check_time(ti);
    const auto n = static_cast<Eigen::Index>(t.size());

    switch (cfg.kind) {
        case EmbeddingKind::Sinusoidal:
            return tape.constant(embed_batch(t, cfg));
        case EmbeddingKind::LinearSin: {
            auto col = tape.constant(Eigen::Map<const Matrix>(t.data(), n, 1));
            auto pre = tape.affine(col, params.w1, params.b1, grads ? &grads->w1 : nullptr,
                                   grads ? &grads->b1 : nullptr);
            return tape.sin(pre);
        }
        case EmbeddingKind::SinusoidalMlp: {
            Matrix s(n, cfg.dim);
            for (Eigen::Index i = 0; i < n; ++i) s.row(i) = sinusoidal_embedding(t[i], cfg.dim).transpose();
            auto in = tape.constant(std::move(s));
            auto h = tape.relu(tape.affine(in, params.w1, params.b1, grads ? &grads->w1 : nullptr,
                                           grads ? &grads->b1 : nullptr));
            return tape.affine(h, params.w2, params.b2, grads ? &grads->w2 : nullptr,
                               grads ? &grads->b2 : nullptr);
        }
    }
    return tape.constant(Matrix(n, cfg.dim));
}

}  // namespace tccm
