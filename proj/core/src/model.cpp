#include "tccm/model.hpp"

#include "tccm/errors.hpp"
#include "tccm/parallel.hpp"
#include "tccm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tccm {

namespace {

void fill_uniform(Matrix& m, double bound, Rng& rng) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
}

void check_fixed_time(double t) {
    if (!(t > 0.0 && t <= 1.0)) {
        throw DomainError("t_fixed = " + std::to_string(t) + " outside (0, 1]");
    }
}

void check_input(const ModelParams& p, const Matrix& z) {
    if (z.cols() != p.input_dim) {
        throw DimensionError("input has " + std::to_string(z.cols()) + " columns, model expects " +
                             std::to_string(p.input_dim));
    }
}

}  // namespace

void ModelParams::validate() const {
    const int in = input_dim + embed.dim;
    const bool ok = input_dim >= 1 && w1.rows() == in && w1.cols() == hidden1 && b1.size() == hidden1 &&
                    w2.rows() == hidden1 && w2.cols() == hidden2 && b2.size() == hidden2 &&
                    w3.rows() == hidden2 && w3.cols() == input_dim && b3.size() == input_dim;
    if (!ok) {
        throw DimensionError("model parameters: layer shapes do not chain for input_dim " +
                             std::to_string(input_dim) + ", embed dim " + std::to_string(embed.dim));
    }
}

std::size_t ModelParams::parameter_count() const {
    std::size_t n = 0;
    for_each_tensor([&](std::string_view, auto values) { n += values.size(); });
    return n;
}

std::vector<double> ModelParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for_each_tensor([&](std::string_view, auto values) { flat.insert(flat.end(), values.begin(), values.end()); });
    return flat;
}

void ModelParams::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw DimensionError("assign: expected " + std::to_string(parameter_count()) + " values, got " +
                             std::to_string(flat.size()));
    }
    std::size_t offset = 0;
    for_each_tensor([&](std::string_view, std::span<double> values) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), values.size(), values.begin());
        offset += values.size();
    });
}

ModelParams ModelParams::zeros_like() const {
    ModelParams z = *this;
    z.for_each_tensor([](std::string_view, std::span<double> values) { std::fill(values.begin(), values.end(), 0.0); });
    return z;
}

bool ModelParams::operator==(const ModelParams& other) const {
    if (input_dim != other.input_dim || !(embed == other.embed) || hidden1 != other.hidden1 ||
        hidden2 != other.hidden2) {
        return false;
    }
    const auto a = flatten();
    const auto b = other.flatten();
    return a == b;
}

ModelParams init_params(int input_dim, const TimeEmbeddingConfig& embed, std::uint64_t seed, int hidden) {
    if (input_dim < 1) throw ConfigError("input_dim must be >= 1");
    if (hidden < 1) throw ConfigError("hidden width must be >= 1");
    embed.validate();

    Rng rng(seed, Stream::Init);
    ModelParams p;
    p.input_dim = input_dim;
    p.embed = embed;
    p.hidden1 = hidden;
    p.hidden2 = hidden;

    const int in = input_dim + embed.dim;
    p.w1.resize(in, hidden);
    p.w2.resize(hidden, hidden);
    p.w3.resize(hidden, input_dim);
    fill_uniform(p.w1, std::sqrt(1.0 / in), rng);
    fill_uniform(p.w2, std::sqrt(1.0 / hidden), rng);
    fill_uniform(p.w3, std::sqrt(1.0 / hidden), rng);
    p.b1 = Vector::Zero(hidden);
    p.b2 = Vector::Zero(hidden);
    p.b3 = Vector::Zero(input_dim);
    p.embed_params = init_embedding_params(embed, rng);
    return p;
}

Tape::Node record_velocity(Tape& tape, const ModelParams& p, Tape::Node z, std::span<const double> t,
                           ModelParams* grads) {
    if (static_cast<Eigen::Index>(t.size()) != tape.value(z).rows()) {
        throw DimensionError("record_velocity: one time value per row required");
    }
    check_input(p, tape.value(z));
    auto e = record_embedding(tape, t, p.embed, p.embed_params, grads ? &grads->embed_params : nullptr);
    auto x = tape.concat(z, e);
    auto h1 = tape.relu(tape.affine(x, p.w1, p.b1, grads ? &grads->w1 : nullptr, grads ? &grads->b1 : nullptr));
    auto h2 = tape.relu(tape.affine(h1, p.w2, p.b2, grads ? &grads->w2 : nullptr, grads ? &grads->b2 : nullptr));
    return tape.affine(h2, p.w3, p.b3, grads ? &grads->w3 : nullptr, grads ? &grads->b3 : nullptr);
}

Matrix velocity(const ModelParams& params, const Matrix& z, double t) {
    check_input(params, z);
    const std::vector<double> ts(static_cast<std::size_t>(z.rows()), t);
    const Matrix e = embed_batch(ts, params.embed, params.embed_params);
    const Matrix h1 = relu(affine(concat_cols(z, e), params.w1, params.b1));
    const Matrix h2 = relu(affine(h1, params.w2, params.b2));
    return affine(h2, params.w3, params.b3);
}

// ---------------------------------------------------------------------------

FixedTimeField::FixedTimeField(const ModelParams& params, double t_fixed) : params_(&params), t_(t_fixed) {
    check_fixed_time(t_fixed);
    params.validate();
    const Vector e = embed(t_fixed, params.embed, params.embed_params);
    layer1_bias_ = params.w1.bottomRows(params.embed.dim).transpose() * e + params.b1;
}

Matrix FixedTimeField::residual(const Matrix& z) const {
    check_input(*params_, z);
    const auto& p = *params_;
    Matrix h1 = z * p.w1.topRows(p.input_dim);
    h1.rowwise() += layer1_bias_.transpose();
    h1 = h1.cwiseMax(0.0);
    Matrix h2 = h1 * p.w2;
    h2.rowwise() += p.b2.transpose();
    h2 = h2.cwiseMax(0.0);
    Matrix out = h2 * p.w3;
    out.rowwise() += p.b3.transpose();
    out += z;
    return out;
}

Vector FixedTimeField::scores(const Matrix& z) const { return row_l2(residual(z)); }

void FixedTimeField::scores_and_gradients(const Matrix& z, Vector& scores, Matrix& gradients) const {
    check_input(*params_, z);
    const auto& p = *params_;
    Matrix a1 = z * p.w1.topRows(p.input_dim);
    a1.rowwise() += layer1_bias_.transpose();
    const Matrix h1 = a1.cwiseMax(0.0);
    Matrix a2 = h1 * p.w2;
    a2.rowwise() += p.b2.transpose();
    const Matrix h2 = a2.cwiseMax(0.0);
    Matrix r = h2 * p.w3;
    r.rowwise() += p.b3.transpose();
    r += z;

    scores = row_l2(r);
    // dS/dr = r / ||r||; dS/dz = dS/dr (I + J_f).
    Matrix g = row_l2_backward(r, scores, Vector::Ones(r.rows()));
    gradients = g;
    Matrix g2 = relu_backward(a2, g * p.w3.transpose());
    Matrix g1 = relu_backward(a1, g2 * p.w2.transpose());
    gradients.noalias() += g1 * p.w1.topRows(p.input_dim).transpose();
}

ScoreReport score(const ModelParams& params, const Matrix& z, double t_fixed, bool with_attributions) {
    check_fixed_time(t_fixed);
    check_input(params, z);
    const FixedTimeField field(params, t_fixed);

    Matrix residual(z.rows(), z.cols());
    parallel_for_rows(static_cast<std::size_t>(z.rows()), [&](std::size_t begin, std::size_t end) {
        const auto b = static_cast<Eigen::Index>(begin);
        const auto n = static_cast<Eigen::Index>(end - begin);
        residual.middleRows(b, n) = field.residual(z.middleRows(b, n));
    });

    ScoreReport report;
    report.t_fixed = t_fixed;
    const Vector s = row_l2(residual);
    report.scores.assign(s.data(), s.data() + s.size());
    if (with_attributions) report.attributions = residual.cwiseAbs();
    return report;
}

Vector attribute(const ModelParams& params, const Vector& z, double t_fixed) {
    const Matrix row = z.transpose();
    const FixedTimeField field(params, t_fixed);
    return field.residual(row).row(0).cwiseAbs().transpose();
}

std::vector<std::size_t> top_k_features(const Vector& attribution, std::size_t k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(attribution.size()));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double va = attribution[static_cast<Eigen::Index>(a)];
                          const double vb = attribution[static_cast<Eigen::Index>(b)];
                          return va > vb || (va == vb && a < b);
                      });
    idx.resize(k);
    return idx;
}

double spectral_norm(const Matrix& w, double rel_tol, int max_iters) {
    if (w.size() == 0) return 0.0;
    // Gram matrix on the smaller side.
    const Matrix gram = w.rows() < w.cols() ? Matrix(w * w.transpose()) : Matrix(w.transpose() * w);
    const Eigen::Index n = gram.rows();
    if (gram.cwiseAbs().maxCoeff() == 0.0) return 0.0;

    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
    v.normalize();

    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Vector u = gram * v;
        const double next = u.norm();
        if (!std::isfinite(next)) throw NumericalError("spectral_norm: non-finite iterate");
        if (next == 0.0) return 0.0;
        v = u / next;
        if (it > 0 && std::abs(next - lambda) <= rel_tol * next) {
            return std::sqrt(next);
        }
        lambda = next;
    }
    throw NumericalError("spectral_norm: power iteration did not converge in " + std::to_string(max_iters) +
                         " steps");
}

double lipschitz_upper_bound(const ModelParams& params) {
    params.validate();
    const Matrix w1z = params.w1.topRows(params.input_dim);
    return spectral_norm(w1z) * spectral_norm(params.w2) * spectral_norm(params.w3);
}

}  // namespace tccm
