#include "kgqa/adam.hpp"

#include <cmath>

#include "kgqa/error.hpp"

namespace kgqa {

void Adam::step(std::vector<Param>& params) {
    if (m_.empty()) {
        m_.reserve(params.size());
        v_.reserve(params.size());
        for (const Param& p : params) {
            m_.emplace_back(p.value.rows, p.value.cols);
            v_.emplace_back(p.value.rows, p.value.cols);
        }
    }
    if (m_.size() != params.size())
        fail(ErrorCode::state, "adam: parameter list changed size between steps");

    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (size_t k = 0; k < params.size(); ++k) {
        Tensor& theta = params[k].value;
        const Tensor& g = params[k].grad;
        Tensor& m = m_[k];
        Tensor& v = v_[k];
        for (size_t i = 0; i < theta.size(); ++i) {
            m.v[i] = cfg_.beta1 * m.v[i] + (1.0 - cfg_.beta1) * g.v[i];
            v.v[i] = cfg_.beta2 * v.v[i] + (1.0 - cfg_.beta2) * g.v[i] * g.v[i];
            const double mhat = m.v[i] / bc1;
            const double vhat = v.v[i] / bc2;
            theta.v[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

double Adam::clip_grad_norm(std::vector<Param>& params, double max_norm) {
    double sq = 0.0;
    for (const Param& p : params)
        for (double g : p.grad.v) sq += g * g;
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const double scale = max_norm / norm;
        for (Param& p : params)
            for (double& g : p.grad.v) g *= scale;
    }
    return norm;
}

}  // namespace kgqa
