#pragma once

// Seeded generators shared by the property tests.

#include "tccm/model.hpp"
#include "tccm/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace tccm::testing {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
    return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
    return v;
}

// Small random network with nonzero biases so every layer is exercised.
inline ModelParams random_params(Rng& rng, int d, int hidden = 16, int embed_dim = 8) {
    TimeEmbeddingConfig embed;
    embed.dim = embed_dim;
    ModelParams p = init_params(d, embed, rng.next(), hidden);
    p.b1 = random_vector(rng, p.b1.size(), 0.1);
    p.b2 = random_vector(rng, p.b2.size(), 0.1);
    p.b3 = random_vector(rng, p.b3.size(), 0.1);
    return p;
}

// Hand-built ReLU network with f(z) = -z exactly, using hidden width 2d:
// relu(z) and relu(-z) recombine as -(relu(z) - relu(-z)).
inline ModelParams contracting_params(int d, int embed_dim = 4) {
    TimeEmbeddingConfig embed;
    embed.dim = embed_dim;
    ModelParams p = init_params(d, embed, 0, 2 * d).zeros_like();
    for (int j = 0; j < d; ++j) {
        p.w1(j, j) = 1.0;
        p.w1(j, d + j) = -1.0;
        p.w3(j, j) = -1.0;
        p.w3(d + j, j) = 1.0;
    }
    p.w2.setIdentity();
    return p;
}

// Scores drawn from a small integer grid so ties are common.
inline std::vector<double> tied_scores(Rng& rng, std::size_t n, int levels) {
    std::vector<double> s(n);
    for (auto& x : s) x = static_cast<double>(rng.below(static_cast<std::uint64_t>(levels)));
    return s;
}

// Labels with at least one member of each class.
inline std::vector<int> two_class_labels(Rng& rng, std::size_t n) {
    std::vector<int> y(n);
    do {
        for (auto& v : y) v = static_cast<int>(rng.below(2));
    } while (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0);
    return y;
}

}  // namespace tccm::testing
