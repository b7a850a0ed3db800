#pragma once

// Dense primitives and a small reverse-mode tape for the fixed TCCM graph:
// concat -> affine -> relu -> affine -> relu -> affine -> residual -> row norm -> mean.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace tccm {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

// out[i][j] = sum_k x[i][k] * w[k][j] + b[j]
Matrix affine(const Matrix& x, const Matrix& w, const Vector& b);

struct AffineGradients {
    Matrix dx;
    Matrix dw;
    Vector db;
};
AffineGradients affine_backward(const Matrix& x, const Matrix& w, const Matrix& dout);

Matrix relu(const Matrix& x);
// Gradient passes only where x > 0.
Matrix relu_backward(const Matrix& x, const Matrix& dout);

Vector row_l2(const Matrix& x);
// d||v||/dv = v / ||v||, and zero for an all-zero row.
Matrix row_l2_backward(const Matrix& x, const Vector& norms, const Vector& dout);

Vector row_sq_l2(const Matrix& x);

Matrix concat_cols(const Matrix& left, const Matrix& right);

// Reverse-mode tape over a closed set of primitives. Nodes are appended in
// evaluation order, so the node list is already topologically sorted.
// Parameter gradients are accumulated (+=) into caller-owned buffers.
class Tape {
public:
    using Node = std::size_t;

    // Input without gradient.
    Node constant(Matrix value);
    // Input whose adjoint is available after backward().
    Node variable(Matrix value);

    Node concat(Node left, Node right);
    Node affine(Node x, const Matrix& w, const Vector& b, Matrix* dw, Vector* db);
    Node relu(Node x);
    Node sin(Node x);
    Node add(Node a, Node b);
    // Adds a 1×n row to every row of a B×n node.
    Node add_row(Node a, Node row);
    Node row_l2(Node x);
    Node row_sq_l2(Node x);
    // Mean of all entries as a 1×1 node.
    Node mean(Node x);

    const Matrix& value(Node n) const { return nodes_[n].value; }
    const Matrix& adjoint(Node n) const { return nodes_[n].adjoint; }
    double scalar(Node n) const { return nodes_[n].value(0, 0); }

    // Seeds d(root)/d(root) = 1 for a 1×1 root. Allowed once per recorded graph.
    void backward(Node root);

    // Hash of every ReLU on/off pattern and zero-norm row on the tape. Two
    // evaluations with equal signatures lie on the same linear piece.
    std::uint64_t piece_signature() const;

    std::size_t size() const { return nodes_.size(); }
    void clear();

private:
    enum class Op { Input, Concat, Affine, Relu, Sin, Add, AddRow, RowL2, RowSqL2, Mean };

    struct Entry {
        Op op = Op::Input;
        Node a = 0;
        Node b = 0;
        Matrix value;
        Matrix adjoint;
        const Matrix* w = nullptr;
        Matrix* dw = nullptr;
        Vector* db = nullptr;
        bool requires_grad = false;
    };

    Node push(Entry e);

    std::vector<Entry> nodes_;
    bool backward_done_ = false;
};

using ScalarFn = std::function<double(std::span<const double>)>;

struct GradCheckOptions {
    double eps = 1e-5;
    // Coordinates to check; empty means every coordinate.
    std::vector<std::size_t> coordinates;
    // Optional linear-piece id (e.g. Tape::piece_signature). Coordinates whose
    // ±eps probes land on a different piece than the base point are skipped.
    std::function<std::uint64_t(std::span<const double>)> piece;
};

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
    std::size_t skipped = 0;
};

// max over coordinates of |analytic - central| / max(1, |central|).
GradCheckResult grad_check(const ScalarFn& fn, std::span<const double> point,
                           std::span<const double> analytic, const GradCheckOptions& options = {});

}  // namespace tccm
