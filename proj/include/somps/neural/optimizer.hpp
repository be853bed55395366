#pragma once

#include "somps/neural/params.hpp"

namespace somps {

/// Gradient descent with momentum: v <- mu*v - lr*g; w <- w + v.
class SgdMomentum {
public:
    SgdMomentum(const ModelParams& shape_like, double learning_rate, double momentum);

    void step(ModelParams& params, const ModelParams& gradient);

    double learning_rate() const { return learning_rate_; }
    double momentum() const { return momentum_; }

private:
    ModelParams velocity_;
    double learning_rate_;
    double momentum_;
};

/// params += scale * other, tensor by tensor.
void axpy(ModelParams& params, double scale, const ModelParams& other);

} // namespace somps
