#pragma once
// Reverse-mode autodiff over a flat operation tape.
//
// The primitive set is deliberately small: matmul (optionally with a
// transposed right operand), elementwise add/mul, row concat/gather,
// sigmoid, tanh, exp, and a masked log-softmax. That is enough to express
// the whole policy network, including the LSTM cell, as compositions.
//
// A tape is single-threaded. Leaf nodes alias Param storage owned by the
// caller; those Params must outlive the tape. backward() accumulates into
// Param::grad, so repeated calls without zero_grad() add up.

#include <cstdint>
#include <span>
#include <vector>

#include "kgqa/tensor.hpp"

namespace kgqa {

using NodeId = int32_t;

class Tape {
public:
    // -- graph construction -------------------------------------------------
    NodeId leaf(Param& p);
    NodeId constant(Tensor t);
    NodeId scalar(double x) { return constant(Tensor::scalar(x)); }

    NodeId matmul(NodeId a, NodeId b, bool trans_b = false);
    NodeId add(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    // Concatenate along axis (0 = stack rows, 1 = widen columns).
    NodeId concat(std::span<const NodeId> parts, int axis);
    NodeId concat(NodeId a, NodeId b, int axis);
    // Select rows of a table node; gradient scatters back into the rows.
    NodeId gather(NodeId table, std::span<const int32_t> row_ids);
    NodeId gather(NodeId table, int32_t row_id);
    NodeId sigmoid(NodeId a);
    NodeId tanh_op(NodeId a);
    NodeId exp_op(NodeId a);
    // Log-softmax over a vector node (n x 1 or 1 x n). Positions at index
    // >= valid are masked by an additive -1e30 before normalization and
    // end up with probability 0 within double precision.
    NodeId log_softmax(NodeId a, int valid);

    // -- execution ----------------------------------------------------------
    const Tensor& value(NodeId id) const;
    // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every
    // reachable Param::grad. `loss` must be a 1x1 node.
    void backward(NodeId loss);

    size_t node_count() const { return nodes_.size(); }
    void clear();

private:
    enum class Op : uint8_t {
        leaf,
        constant,
        matmul,
        add,
        mul,
        concat,
        gather,
        sigmoid,
        tanh_fn,
        exp_fn,
        log_softmax,
    };

    struct Node {
        Op op;
        bool needs_grad = false;
        int32_t in0 = -1;
        int32_t in1 = -1;
        int32_t aux = 0;        // matmul: trans_b; concat: axis; log_softmax: valid
        uint32_t extra_off = 0; // pool slice: concat inputs or gather row ids
        uint32_t extra_len = 0;
        Param* param = nullptr; // leaf only
        Tensor val;             // owned value (leaf nodes alias param->value instead)
        Tensor grad;
    };

    NodeId push(Node n);
    const Node& at(NodeId id) const { return nodes_[static_cast<size_t>(id)]; }
    Node& at(NodeId id) { return nodes_[static_cast<size_t>(id)]; }
    static const Tensor& val_of(const Node& n) { return n.param ? n.param->value : n.val; }
    Tensor& grad_of(Node& n);
    std::span<const int32_t> extra(const Node& n) const {
        return {pool_.data() + n.extra_off, n.extra_len};
    }

    void backward_node(Node& n);

    std::vector<Node> nodes_;
    std::vector<int32_t> pool_;
};

}  // namespace kgqa
