#include "tccm/autodiff.hpp"

#include "tccm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tccm {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }
bool all_finite(const Vector& v) { return v.allFinite(); }

Matrix affine(const Matrix& x, const Matrix& w, const Vector& b) {
    if (x.cols() != w.rows() || w.cols() != b.size()) {
        throw DimensionError("affine: x " + shape(x) + ", W " + shape(w) + ", b " +
                             std::to_string(b.size()));
    }
    Matrix out = x * w;
    out.rowwise() += b.transpose();
    return out;
}

AffineGradients affine_backward(const Matrix& x, const Matrix& w, const Matrix& dout) {
    if (dout.rows() != x.rows() || dout.cols() != w.cols() || x.cols() != w.rows()) {
        throw DimensionError("affine_backward: x " + shape(x) + ", W " + shape(w) + ", dout " +
                             shape(dout));
    }
    AffineGradients g;
    g.dx = dout * w.transpose();
    g.dw = x.transpose() * dout;
    g.db = dout.colwise().sum().transpose();
    return g;
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& x, const Matrix& dout) {
    if (x.rows() != dout.rows() || x.cols() != dout.cols()) {
        throw DimensionError("relu_backward: x " + shape(x) + ", dout " + shape(dout));
    }
    return (x.array() > 0.0).select(dout, 0.0);
}

Vector row_l2(const Matrix& x) { return x.rowwise().norm(); }

Vector row_sq_l2(const Matrix& x) { return x.rowwise().squaredNorm(); }

Matrix row_l2_backward(const Matrix& x, const Vector& norms, const Vector& dout) {
    if (norms.size() != x.rows() || dout.size() != x.rows()) {
        throw DimensionError("row_l2_backward: x " + shape(x));
    }
    Matrix dx(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (norms[i] > 0.0) {
            dx.row(i) = x.row(i) * (dout[i] / norms[i]);
        } else {
            dx.row(i).setZero();
        }
    }
    return dx;
}

Matrix concat_cols(const Matrix& left, const Matrix& right) {
    if (left.rows() != right.rows()) {
        throw DimensionError("concat: " + shape(left) + " and " + shape(right));
    }
    Matrix out(left.rows(), left.cols() + right.cols());
    out.leftCols(left.cols()) = left;
    out.rightCols(right.cols()) = right;
    return out;
}

// ---------------------------------------------------------------------------

Tape::Node Tape::push(Entry e) {
    if (backward_done_) {
        throw Error("tape: cannot record after backward(); call clear() first");
    }
    nodes_.push_back(std::move(e));
    return nodes_.size() - 1;
}

Tape::Node Tape::constant(Matrix value) {
    Entry e;
    e.value = std::move(value);
    return push(std::move(e));
}

Tape::Node Tape::variable(Matrix value) {
    Entry e;
    e.value = std::move(value);
    e.requires_grad = true;
    return push(std::move(e));
}

Tape::Node Tape::concat(Node left, Node right) {
    Entry e;
    e.op = Op::Concat;
    e.a = left;
    e.b = right;
    e.value = concat_cols(nodes_[left].value, nodes_[right].value);
    e.requires_grad = nodes_[left].requires_grad || nodes_[right].requires_grad;
    return push(std::move(e));
}

Tape::Node Tape::affine(Node x, const Matrix& w, const Vector& b, Matrix* dw, Vector* db) {
    Entry e;
    e.op = Op::Affine;
    e.a = x;
    e.w = &w;
    e.dw = dw;
    e.db = db;
    e.value = tccm::affine(nodes_[x].value, w, b);
    e.requires_grad = nodes_[x].requires_grad || dw != nullptr || db != nullptr;
    return push(std::move(e));
}

Tape::Node Tape::relu(Node x) {
    Entry e;
    e.op = Op::Relu;
    e.a = x;
    e.value = tccm::relu(nodes_[x].value);
    e.requires_grad = nodes_[x].requires_grad;
    return push(std::move(e));
}

Tape::Node Tape::sin(Node x) {
    Entry e;
    e.op = Op::Sin;
    e.a = x;
    e.value = nodes_[x].value.array().sin().matrix();
    e.requires_grad = nodes_[x].requires_grad;
    return push(std::move(e));
}

Tape::Node Tape::add(Node a, Node b) {
    const Matrix& va = nodes_[a].value;
    const Matrix& vb = nodes_[b].value;
    if (va.rows() != vb.rows() || va.cols() != vb.cols()) {
        throw DimensionError("add: " + shape(va) + " and " + shape(vb));
    }
    Entry e;
    e.op = Op::Add;
    e.a = a;
    e.b = b;
    e.value = va + vb;
    e.requires_grad = nodes_[a].requires_grad || nodes_[b].requires_grad;
    return push(std::move(e));
}

Tape::Node Tape::add_row(Node a, Node row) {
    const Matrix& va = nodes_[a].value;
    const Matrix& vr = nodes_[row].value;
    if (vr.rows() != 1 || vr.cols() != va.cols()) {
        throw DimensionError("add_row: " + shape(va) + " and " + shape(vr));
    }
    Entry e;
    e.op = Op::AddRow;
    e.a = a;
    e.b = row;
    e.value = va;
    e.value.rowwise() += vr.row(0);
    e.requires_grad = nodes_[a].requires_grad || nodes_[row].requires_grad;
    return push(std::move(e));
}

Tape::Node Tape::row_l2(Node x) {
    Entry e;
    e.op = Op::RowL2;
    e.a = x;
    e.value = tccm::row_l2(nodes_[x].value);
    e.requires_grad = nodes_[x].requires_grad;
    return push(std::move(e));
}

Tape::Node Tape::row_sq_l2(Node x) {
    Entry e;
    e.op = Op::RowSqL2;
    e.a = x;
    e.value = tccm::row_sq_l2(nodes_[x].value);
    e.requires_grad = nodes_[x].requires_grad;
    return push(std::move(e));
}

Tape::Node Tape::mean(Node x) {
    Entry e;
    e.op = Op::Mean;
    e.a = x;
    e.value = Matrix::Constant(1, 1, nodes_[x].value.mean());
    e.requires_grad = nodes_[x].requires_grad;
    return push(std::move(e));
}

void Tape::backward(Node root) {
    if (backward_done_) {
        throw Error("tape: backward() already ran for this graph");
    }
    if (nodes_[root].value.size() != 1) {
        throw DimensionError("tape: backward root must be 1x1, got " + shape(nodes_[root].value));
    }
    for (auto& n : nodes_) {
        n.adjoint = Matrix::Zero(n.value.rows(), n.value.cols());
    }
    nodes_[root].adjoint(0, 0) = 1.0;
    backward_done_ = true;

    for (Node i = root + 1; i-- > 0;) {
        Entry& n = nodes_[i];
        if (!n.requires_grad) continue;
        const Matrix& g = n.adjoint;
        switch (n.op) {
            case Op::Input:
                break;
            case Op::Concat: {
                Entry& l = nodes_[n.a];
                Entry& r = nodes_[n.b];
                if (l.requires_grad) l.adjoint += g.leftCols(l.value.cols());
                if (r.requires_grad) r.adjoint += g.rightCols(r.value.cols());
                break;
            }
            case Op::Affine: {
                Entry& x = nodes_[n.a];
                if (n.dw) n.dw->noalias() += x.value.transpose() * g;
                if (n.db) *n.db += g.colwise().sum().transpose();
                if (x.requires_grad) x.adjoint.noalias() += g * n.w->transpose();
                break;
            }
            case Op::Relu: {
                Entry& x = nodes_[n.a];
                x.adjoint += tccm::relu_backward(x.value, g);
                break;
            }
            case Op::Sin: {
                Entry& x = nodes_[n.a];
                x.adjoint.array() += g.array() * x.value.array().cos();
                break;
            }
            case Op::Add: {
                if (nodes_[n.a].requires_grad) nodes_[n.a].adjoint += g;
                if (nodes_[n.b].requires_grad) nodes_[n.b].adjoint += g;
                break;
            }
            case Op::AddRow: {
                if (nodes_[n.a].requires_grad) nodes_[n.a].adjoint += g;
                if (nodes_[n.b].requires_grad) nodes_[n.b].adjoint += g.colwise().sum();
                break;
            }
            case Op::RowL2: {
                Entry& x = nodes_[n.a];
                const Vector norms = n.value.col(0);
                const Vector dout = g.col(0);
                x.adjoint += tccm::row_l2_backward(x.value, norms, dout);
                break;
            }
            case Op::RowSqL2: {
                Entry& x = nodes_[n.a];
                for (Eigen::Index r = 0; r < x.value.rows(); ++r) {
                    x.adjoint.row(r) += 2.0 * g(r, 0) * x.value.row(r);
                }
                break;
            }
            case Op::Mean: {
                Entry& x = nodes_[n.a];
                x.adjoint.array() += g(0, 0) / static_cast<double>(x.value.size());
                break;
            }
        }
    }
}

std::uint64_t Tape::piece_signature() const {
    std::uint64_t h = 0;
    for (const auto& n : nodes_) {
        if (n.op == Op::Relu) {
            const Matrix& x = nodes_[n.a].value;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                h = mix(h, x.data()[i] > 0.0 ? 1u : 2u);
            }
        } else if (n.op == Op::RowL2) {
            for (Eigen::Index i = 0; i < n.value.size(); ++i) {
                h = mix(h, n.value.data()[i] > 0.0 ? 3u : 4u);
            }
        }
    }
    return h;
}

void Tape::clear() {
    nodes_.clear();
    backward_done_ = false;
}

// ---------------------------------------------------------------------------

GradCheckResult grad_check(const ScalarFn& fn, std::span<const double> point,
                           std::span<const double> analytic, const GradCheckOptions& options) {
    if (!(options.eps > 0.0)) {
        throw ConfigError("grad_check: eps must be positive");
    }
    if (analytic.size() != point.size()) {
        throw DimensionError("grad_check: gradient has " + std::to_string(analytic.size()) +
                             " entries, point has " + std::to_string(point.size()));
    }
    std::vector<std::size_t> coords = options.coordinates;
    if (coords.empty()) {
        coords.resize(point.size());
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    }

    std::vector<double> probe(point.begin(), point.end());
    const std::uint64_t base_piece = options.piece ? options.piece(probe) : 0;

    GradCheckResult result;
    for (std::size_t c : coords) {
        if (c >= point.size()) {
            throw DimensionError("grad_check: coordinate " + std::to_string(c) + " out of range");
        }
        const double x0 = point[c];
        probe[c] = x0 + options.eps;
        const double fp = fn(probe);
        const bool plus_same = !options.piece || options.piece(probe) == base_piece;
        probe[c] = x0 - options.eps;
        const double fm = fn(probe);
        const bool minus_same = !options.piece || options.piece(probe) == base_piece;
        probe[c] = x0;

        if (!std::isfinite(fp) || !std::isfinite(fm) || !std::isfinite(analytic[c])) {
            throw NumericalError("grad_check: non-finite value at coordinate " + std::to_string(c));
        }
        if (!plus_same || !minus_same) {
            ++result.skipped;
            continue;
        }
        const double central = (fp - fm) / (2.0 * options.eps);
        const double rel = std::abs(analytic[c] - central) / std::max(1.0, std::abs(central));
        result.max_relative_error = std::max(result.max_relative_error, rel);
        ++result.checked;
    }
    return result;
}

}  // namespace tccm
