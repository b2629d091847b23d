#include "kgqa/tape.hpp"

#include <cmath>
#include <string>

namespace kgqa {

namespace {

constexpr double kMaskOffset = -1e30;

std::string shape_str(const Tensor& t) {
    return std::to_string(t.rows) + "x" + std::to_string(t.cols);
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
    fail(ErrorCode::invalid_argument,
         std::string(op) + ": incompatible shapes " + shape_str(a) + " and " + shape_str(b));
}

}  // namespace

NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

Tensor& Tape::grad_of(Node& n) {
    const Tensor& v = val_of(n);
    if (n.grad.rows != v.rows || n.grad.cols != v.cols) n.grad = Tensor(v.rows, v.cols);
    return n.grad;
}

NodeId Tape::leaf(Param& p) {
    Node n;
    n.op = Op::leaf;
    n.needs_grad = true;
    n.param = &p;
    return push(std::move(n));
}

NodeId Tape::constant(Tensor t) {
    Node n;
    n.op = Op::constant;
    n.val = std::move(t);
    return push(std::move(n));
}

NodeId Tape::matmul(NodeId a, NodeId b, bool trans_b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    const int k = trans_b ? B.cols : B.rows;
    const int out_cols = trans_b ? B.rows : B.cols;
    if (A.cols != k) shape_error("matmul", A, B);

    Node n;
    n.op = Op::matmul;
    n.in0 = a;
    n.in1 = b;
    n.aux = trans_b ? 1 : 0;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = Tensor(A.rows, out_cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < out_cols; ++j) {
            double acc = 0.0;
            if (trans_b) {
                for (int t = 0; t < A.cols; ++t) acc += A.at(i, t) * B.at(j, t);
            } else {
                for (int t = 0; t < A.cols; ++t) acc += A.at(i, t) * B.at(t, j);
            }
            n.val.at(i, j) = acc;
        }
    }
    return push(std::move(n));
}

NodeId Tape::add(NodeId a, NodeId b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (!A.same_shape(B)) shape_error("add", A, B);
    Node n;
    n.op = Op::add;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = A;
    for (size_t i = 0; i < n.val.size(); ++i) n.val.v[i] += B.v[i];
    return push(std::move(n));
}

NodeId Tape::mul(NodeId a, NodeId b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (!A.same_shape(B)) shape_error("mul", A, B);
    Node n;
    n.op = Op::mul;
    n.in0 = a;
    n.in1 = b;
    n.needs_grad = at(a).needs_grad || at(b).needs_grad;
    n.val = A;
    for (size_t i = 0; i < n.val.size(); ++i) n.val.v[i] *= B.v[i];
    return push(std::move(n));
}

NodeId Tape::concat(std::span<const NodeId> parts, int axis) {
    if (parts.empty()) fail(ErrorCode::invalid_argument, "concat: no inputs");
    int rows = value(parts[0]).rows;
    int cols = value(parts[0]).cols;
    bool needs = false;
    for (size_t i = 1; i < parts.size(); ++i) {
        const Tensor& t = value(parts[i]);
        if (axis == 0) {
            if (t.cols != cols) shape_error("concat", value(parts[0]), t);
            rows += t.rows;
        } else {
            if (t.rows != rows) shape_error("concat", value(parts[0]), t);
            cols += t.cols;
        }
    }
    for (NodeId p : parts) needs = needs || at(p).needs_grad;

    Node n;
    n.op = Op::concat;
    n.aux = axis;
    n.needs_grad = needs;
    n.extra_off = static_cast<uint32_t>(pool_.size());
    n.extra_len = static_cast<uint32_t>(parts.size());
    for (NodeId p : parts) pool_.push_back(p);
    n.val = Tensor(rows, cols);
    if (axis == 0) {
        int r = 0;
        for (NodeId p : parts) {
            const Tensor& t = value(p);
            std::copy(t.v.begin(), t.v.end(), n.val.v.begin() + static_cast<size_t>(r) * cols);
            r += t.rows;
        }
    } else {
        int c = 0;
        for (NodeId p : parts) {
            const Tensor& t = value(p);
            for (int i = 0; i < rows; ++i)
                std::copy(t.row(i).begin(), t.row(i).end(), n.val.row(i).begin() + c);
            c += t.cols;
        }
    }
    return push(std::move(n));
}

NodeId Tape::concat(NodeId a, NodeId b, int axis) {
    const NodeId parts[2] = {a, b};
    return concat(std::span<const NodeId>(parts, 2), axis);
}

NodeId Tape::gather(NodeId table, std::span<const int32_t> row_ids) {
    const Tensor& T = value(table);
    Node n;
    n.op = Op::gather;
    n.in0 = table;
    n.needs_grad = at(table).needs_grad;
    n.extra_off = static_cast<uint32_t>(pool_.size());
    n.extra_len = static_cast<uint32_t>(row_ids.size());
    n.val = Tensor(static_cast<int>(row_ids.size()), T.cols);
    int out = 0;
    for (int32_t id : row_ids) {
        if (id < 0 || id >= T.rows)
            fail(ErrorCode::invalid_argument,
                 "gather: row " + std::to_string(id) + " out of range (" + shape_str(T) + ")");
        pool_.push_back(id);
        auto src = T.row(id);
        std::copy(src.begin(), src.end(), n.val.row(out++).begin());
    }
    return push(std::move(n));
}

NodeId Tape::gather(NodeId table, int32_t row_id) {
    return gather(table, std::span<const int32_t>(&row_id, 1));
}

NodeId Tape::sigmoid(NodeId a) {
    Node n;
    n.op = Op::sigmoid;
    n.in0 = a;
    n.needs_grad = at(a).needs_grad;
    n.val = value(a);
    for (double& x : n.val.v) x = 1.0 / (1.0 + std::exp(-x));
    return push(std::move(n));
}

NodeId Tape::tanh_op(NodeId a) {
    Node n;
    n.op = Op::tanh_fn;
    n.in0 = a;
    n.needs_grad = at(a).needs_grad;
    n.val = value(a);
    for (double& x : n.val.v) x = std::tanh(x);
    return push(std::move(n));
}

NodeId Tape::exp_op(NodeId a) {
    Node n;
    n.op = Op::exp_fn;
    n.in0 = a;
    n.needs_grad = at(a).needs_grad;
    n.val = value(a);
    for (double& x : n.val.v) x = std::exp(x);
    return push(std::move(n));
}

NodeId Tape::log_softmax(NodeId a, int valid) {
    const Tensor& A = value(a);
    if (A.rows != 1 && A.cols != 1)
        fail(ErrorCode::invalid_argument, "log_softmax: expected a vector, got " + shape_str(A));
    const int len = static_cast<int>(A.size());
    if (valid < 1 || valid > len)
        fail(ErrorCode::invalid_argument,
             "log_softmax: valid count " + std::to_string(valid) + " outside [1, " +
                 std::to_string(len) + "]");

    Node n;
    n.op = Op::log_softmax;
    n.in0 = a;
    n.aux = valid;
    n.needs_grad = at(a).needs_grad;
    n.val = A;
    for (int i = valid; i < len; ++i) n.val.v[i] += kMaskOffset;
    double mx = n.val.v[0];
    for (int i = 1; i < len; ++i) mx = std::max(mx, n.val.v[i]);
    double sum = 0.0;
    for (int i = 0; i < len; ++i) sum += std::exp(n.val.v[i] - mx);
    const double lse = mx + std::log(sum);
    for (int i = 0; i < len; ++i) n.val.v[i] -= lse;
    return push(std::move(n));
}

const Tensor& Tape::value(NodeId id) const {
    return val_of(at(id));
}

void Tape::clear() {
    nodes_.clear();
    pool_.clear();
}

void Tape::backward(NodeId loss) {
    Node& top = at(loss);
    if (val_of(top).size() != 1)
        fail(ErrorCode::invalid_argument, "backward: loss must be a scalar node");
    grad_of(top).v[0] += 1.0;
    for (size_t i = static_cast<size_t>(loss) + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (!n.needs_grad || n.grad.empty()) continue;
        backward_node(n);
    }
}

void Tape::backward_node(Node& n) {
    switch (n.op) {
        case Op::leaf: {
            Tensor& g = n.param->grad;
            for (size_t i = 0; i < g.size(); ++i) g.v[i] += n.grad.v[i];
            break;
        }
        case Op::constant:
            break;
        case Op::matmul: {
            Node& na = at(n.in0);
            Node& nb = at(n.in1);
            const Tensor& A = val_of(na);
            const Tensor& B = val_of(nb);
            const bool trans_b = n.aux != 0;
            if (na.needs_grad) {
                Tensor& dA = grad_of(na);
                for (int i = 0; i < A.rows; ++i)
                    for (int t = 0; t < A.cols; ++t) {
                        double acc = 0.0;
                        for (int j = 0; j < n.grad.cols; ++j)
                            acc += n.grad.at(i, j) * (trans_b ? B.at(j, t) : B.at(t, j));
                        dA.at(i, t) += acc;
                    }
            }
            if (nb.needs_grad) {
                Tensor& dB = grad_of(nb);
                if (trans_b) {
                    // C = A·Bᵀ  =>  dB += dCᵀ·A
                    for (int j = 0; j < B.rows; ++j)
                        for (int t = 0; t < B.cols; ++t) {
                            double acc = 0.0;
                            for (int i = 0; i < A.rows; ++i) acc += n.grad.at(i, j) * A.at(i, t);
                            dB.at(j, t) += acc;
                        }
                } else {
                    for (int t = 0; t < B.rows; ++t)
                        for (int j = 0; j < B.cols; ++j) {
                            double acc = 0.0;
                            for (int i = 0; i < A.rows; ++i) acc += A.at(i, t) * n.grad.at(i, j);
                            dB.at(t, j) += acc;
                        }
                }
            }
            break;
        }
        case Op::add: {
            for (NodeId in : {n.in0, n.in1}) {
                Node& ni = at(in);
                if (!ni.needs_grad) continue;
                Tensor& g = grad_of(ni);
                for (size_t i = 0; i < g.size(); ++i) g.v[i] += n.grad.v[i];
            }
            break;
        }
        case Op::mul: {
            Node& na = at(n.in0);
            Node& nb = at(n.in1);
            if (na.needs_grad) {
                Tensor& g = grad_of(na);
                const Tensor& B = val_of(nb);
                for (size_t i = 0; i < g.size(); ++i) g.v[i] += n.grad.v[i] * B.v[i];
            }
            if (nb.needs_grad) {
                Tensor& g = grad_of(nb);
                const Tensor& A = val_of(na);
                for (size_t i = 0; i < g.size(); ++i) g.v[i] += n.grad.v[i] * A.v[i];
            }
            break;
        }
        case Op::concat: {
            const int axis = n.aux;
            int r = 0, c = 0;
            for (int32_t pid : extra(n)) {
                Node& np = at(pid);
                const Tensor& pv = val_of(np);
                if (np.needs_grad) {
                    Tensor& g = grad_of(np);
                    if (axis == 0) {
                        for (int i = 0; i < pv.rows; ++i)
                            for (int j = 0; j < pv.cols; ++j) g.at(i, j) += n.grad.at(r + i, j);
                    } else {
                        for (int i = 0; i < pv.rows; ++i)
                            for (int j = 0; j < pv.cols; ++j) g.at(i, j) += n.grad.at(i, c + j);
                    }
                }
                r += pv.rows;
                c += pv.cols;
            }
            break;
        }
        case Op::gather: {
            Node& nt = at(n.in0);
            if (!nt.needs_grad) break;
            Tensor& g = grad_of(nt);
            int out = 0;
            for (int32_t id : extra(n)) {
                for (int j = 0; j < g.cols; ++j) g.at(id, j) += n.grad.at(out, j);
                ++out;
            }
            break;
        }
        case Op::sigmoid: {
            Node& na = at(n.in0);
            if (!na.needs_grad) break;
            Tensor& g = grad_of(na);
            for (size_t i = 0; i < g.size(); ++i) {
                const double s = n.val.v[i];
                g.v[i] += n.grad.v[i] * s * (1.0 - s);
            }
            break;
        }
        case Op::tanh_fn: {
            Node& na = at(n.in0);
            if (!na.needs_grad) break;
            Tensor& g = grad_of(na);
            for (size_t i = 0; i < g.size(); ++i) {
                const double t = n.val.v[i];
                g.v[i] += n.grad.v[i] * (1.0 - t * t);
            }
            break;
        }
        case Op::exp_fn: {
            Node& na = at(n.in0);
            if (!na.needs_grad) break;
            Tensor& g = grad_of(na);
            for (size_t i = 0; i < g.size(); ++i) g.v[i] += n.grad.v[i] * n.val.v[i];
            break;
        }
        case Op::log_softmax: {
            Node& na = at(n.in0);
            if (!na.needs_grad) break;
            Tensor& g = grad_of(na);
            const size_t len = n.val.size();
            double dsum = 0.0;
            for (size_t i = 0; i < len; ++i) dsum += n.grad.v[i];
            for (size_t i = 0; i < len; ++i) {
                const double p = std::exp(n.val.v[i]);  // 0 for masked lanes
                g.v[i] += n.grad.v[i] - p * dsum;
            }
            break;
        }
    }
}

}  // namespace kgqa
