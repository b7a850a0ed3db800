#pragma once

#include "tccm/autodiff.hpp"
#include "tccm/time_embedding.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tccm {

// Weights of the velocity field f([z; Embed(t)]):
//   (d + dim) -> hidden1 -> ReLU -> hidden2 -> ReLU -> d
// The first `input_dim` rows of w1 multiply z, the remaining rows the embedding.
struct ModelParams {
    int input_dim = 0;
    TimeEmbeddingConfig embed;
    int hidden1 = 256;
    int hidden2 = 256;
    Matrix w1;
    Vector b1;
    Matrix w2;
    Vector b2;
    Matrix w3;
    Vector b3;
    TimeEmbeddingParams embed_params;

    // Throws DimensionError if the shapes do not chain.
    void validate() const;

    // Visits every tensor in a fixed order as (name, contiguous values).
    template <typename Self, typename Fn>
    static void visit(Self& self, Fn&& fn) {
        fn("w1", std::span(self.w1.data(), static_cast<std::size_t>(self.w1.size())));
        fn("b1", std::span(self.b1.data(), static_cast<std::size_t>(self.b1.size())));
        fn("w2", std::span(self.w2.data(), static_cast<std::size_t>(self.w2.size())));
        fn("b2", std::span(self.b2.data(), static_cast<std::size_t>(self.b2.size())));
        fn("w3", std::span(self.w3.data(), static_cast<std::size_t>(self.w3.size())));
        fn("b3", std::span(self.b3.data(), static_cast<std::size_t>(self.b3.size())));
        auto& e = self.embed_params;
        if (e.w1.size()) fn("embed.w1", std::span(e.w1.data(), static_cast<std::size_t>(e.w1.size())));
        if (e.b1.size()) fn("embed.b1", std::span(e.b1.data(), static_cast<std::size_t>(e.b1.size())));
        if (e.w2.size()) fn("embed.w2", std::span(e.w2.data(), static_cast<std::size_t>(e.w2.size())));
        if (e.b2.size()) fn("embed.b2", std::span(e.b2.data(), static_cast<std::size_t>(e.b2.size())));
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) { visit(*this, std::forward<Fn>(fn)); }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const { visit(*this, std::forward<Fn>(fn)); }

    std::size_t parameter_count() const;
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    // Same shapes, all values zero.
    ModelParams zeros_like() const;

    bool operator==(const ModelParams&) const;
};

// Weights ~ U(-sqrt(1/fan_in), +sqrt(1/fan_in)), biases zero.
ModelParams init_params(int input_dim, const TimeEmbeddingConfig& embed, std::uint64_t seed,
                        int hidden = 256);

// f([z; Embed(t)]) for every row of z.
Matrix velocity(const ModelParams& params, const Matrix& z, double t);

// Records f([z; Embed(t_i)]) on the tape, one t per row of z.
Tape::Node record_velocity(Tape& tape, const ModelParams& params, Tape::Node z,
                           std::span<const double> t, ModelParams* grads);

// Scoring at one fixed time. The embedding contribution to the first layer is
// folded into a bias row once, so each row costs only the z-columns of w1.
class FixedTimeField {
public:
    FixedTimeField(const ModelParams& params, double t_fixed);

    double t_fixed() const { return t_; }
    int input_dim() const { return params_->input_dim; }

    // f([z; Embed(t)]) + z
    Matrix residual(const Matrix& z) const;
    Vector scores(const Matrix& z) const;
    // Scores and their gradients with respect to z (zero gradient at a zero residual).
    void scores_and_gradients(const Matrix& z, Vector& scores, Matrix& gradients) const;

private:
    const ModelParams* params_;
    double t_;
    Vector layer1_bias_;  // Embed(t) w1_embed + b1
};

struct ScoreReport {
    std::vector<double> scores;
    double t_fixed = 1.0;
    std::optional<Matrix> attributions;  // |residual_j| per row
};

// S(z; t) = ||f([z; Embed(t)]) + z||_2. Throws DomainError unless 0 < t_fixed <= 1.
ScoreReport score(const ModelParams& params, const Matrix& z, double t_fixed = 1.0,
                  bool with_attributions = false);

Vector attribute(const ModelParams& params, const Vector& z, double t_fixed = 1.0);

// Indices of the k largest entries, descending; ties broken by lower index.
std::vector<std::size_t> top_k_features(const Vector& attribution, std::size_t k);

// Largest singular value by power iteration on W^T W. Throws NumericalError
// if the relative change does not fall below `rel_tol` within `max_iters`.
double spectral_norm(const Matrix& w, double rel_tol = 1e-6, int max_iters = 10000);

// sigma_max(z-rows of w1) * sigma_max(w2) * sigma_max(w3): a Lipschitz bound
// of z -> f([z; Embed(t)]) for any fixed t, since ReLU is 1-Lipschitz.
double lipschitz_upper_bound(const ModelParams& params);

}  // namespace tccm
