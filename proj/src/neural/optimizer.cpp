#include "somps/neural/optimizer.hpp"

#include <vector>

namespace somps {

namespace {

std::vector<const Eigen::MatrixXd*> tensors(const ModelParams& p) {
    std::vector<const Eigen::MatrixXd*> out;
    p.for_each([&out](const std::string&, const Eigen::MatrixXd& m) { out.push_back(&m); });
    return out;
}

} // namespace

SgdMomentum::SgdMomentum(const ModelParams& shape_like, double learning_rate, double momentum)
    : velocity_(shape_like), learning_rate_(learning_rate), momentum_(momentum) {
    velocity_.for_each([](const std::string&, Eigen::MatrixXd& m) { m.setZero(); });
}

void SgdMomentum::step(ModelParams& params, const ModelParams& gradient) {
    const auto grads = tensors(gradient);
    std::size_t i = 0;
    velocity_.for_each([&](const std::string&, Eigen::MatrixXd& v) {
        v = momentum_ * v - learning_rate_ * *grads[i++];
    });
    axpy(params, 1.0, velocity_);
}

void axpy(ModelParams& params, double scale, const ModelParams& other) {
    const auto src = tensors(other);
    std::size_t i = 0;
    params.for_each([&](const std::string&, Eigen::MatrixXd& m) { m += scale * *src[i++]; });
}

} // namespace somps
