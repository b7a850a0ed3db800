#pragma once

#include "tccm/autodiff.hpp"
#include "tccm/rng.hpp"

#include <span>
#include <string>
#include <string_view>

namespace tccm {

enum class EmbeddingKind { Sinusoidal, LinearSin, SinusoidalMlp };

std::string_view to_string(EmbeddingKind kind);
EmbeddingKind parse_embedding_kind(std::string_view name);

struct TimeEmbeddingConfig {
    EmbeddingKind kind = EmbeddingKind::Sinusoidal;
    int dim = 128;
    int mlp_hidden = 128;  // SinusoidalMlp only

    // Throws ConfigError on odd or non-positive dim.
    void validate() const;
    bool operator==(const TimeEmbeddingConfig&) const = default;
};

// Learnable weights of the non-default kinds; empty for Sinusoidal.
//   LinearSin:      phi(t) = sin(t * w1 + b1),           w1: 1 x dim
//   SinusoidalMlp:  phi(t) = relu(s(t) w1 + b1) w2 + b2,  w1: dim x hidden, w2: hidden x dim
struct TimeEmbeddingParams {
    Matrix w1;
    Vector b1;
    Matrix w2;
    Vector b2;
};

TimeEmbeddingParams init_embedding_params(const TimeEmbeddingConfig& cfg, Rng& rng);

// out[2i] = sin(t / 10000^(2i/dim)), out[2i+1] = cos(t / 10000^(2i/dim)).
Vector sinusoidal_embedding(double t, int dim);

// Throws DomainError if t is outside [0, 1].
Vector embed(double t, const TimeEmbeddingConfig& cfg, const TimeEmbeddingParams& params = {});

// One embedding row per time value.
Matrix embed_batch(std::span<const double> t, const TimeEmbeddingConfig& cfg,
                   const TimeEmbeddingParams& params = {});

// Records the embedding of each t on the tape. Gradients of the learnable
// weights (if any) accumulate into `grads` when it is non-null.
Tape::Node record_embedding(Tape& tape, std::span<const double> t, const TimeEmbeddingConfig& cfg,
                            const TimeEmbeddingParams& params, TimeEmbeddingParams* grads);

}  // namespace tccm
