#pragma once

#include <vector>

#include "kgqa/tensor.hpp"

namespace kgqa {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam with bias correction. Moments are keyed by position in the
// parameter list, which therefore must stay stable across steps.
class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    // Applies one update from each param's accumulated grad. Does not
    // zero the grads; the caller owns that.
    void step(std::vector<Param>& params);

    // Rescale grads so their global L2 norm is at most max_norm (no-op if
    // max_norm <= 0 or the norm is already below it). Returns the norm.
    static double clip_grad_norm(std::vector<Param>& params, double max_norm);

    int64_t step_count() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    int64_t t_ = 0;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
};

}  // namespace kgqa
