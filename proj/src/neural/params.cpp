#include "somps/neural/params.hpp"

#include "somps/error.hpp"
#include "somps/rng.hpp"

#include <cmath>

namespace somps {

std::string_view to_string(ModelVariant v) {
    switch (v) {
    case ModelVariant::somps: return "somps";
    case ModelVariant::sig_only: return "sig";
    case ModelVariant::pns_only: return "pns";
    }
    return "unknown";
}

std::optional<ModelVariant> parse_variant(std::string_view s) {
    if (s == "somps") return ModelVariant::somps;
    if (s == "sig" || s == "sig_only") return ModelVariant::sig_only;
    if (s == "pns" || s == "pns_only") return ModelVariant::pns_only;
    return std::nullopt;
}

void ModelConfig::validate() const {
    if (gcn_layers < 1 || gcn_output_dim < 1 || bilstm_hidden < 1 || attention_heads < 1 || head_dim_qk < 1 ||
        head_dim_v < 1 || attention_output_dim < 1 || pns_hidden < 1) {
        throw ArgumentError("model config: every dimension must be >= 1");
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ArgumentError("model config: dropout must lie in [0, 1)");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ArgumentError("model config: learning_rate must be finite and >= 0");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ArgumentError("model config: momentum must lie in [0, 1)");
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;

Index idx(std::size_t n) { return static_cast<Index>(n); }

BranchParams zero_branch(const ModelConfig& c, std::size_t activity_dim, std::size_t embedding_dim) {
    BranchParams b;
    for (std::size_t l = 0; l < c.gcn_layers; ++l) {
        b.gcn.push_back(MatrixXd::Zero(idx(l == 0 ? activity_dim : c.gcn_output_dim), idx(c.gcn_output_dim)));
    }
    const auto h = idx(c.bilstm_hidden);
    for (auto* p : {&b.lstm_forward, &b.lstm_backward}) {
        p->input_weights = MatrixXd::Zero(4 * h, idx(embedding_dim));
        p->recurrent_weights = MatrixXd::Zero(4 * h, h);
        p->bias = MatrixXd::Zero(4 * h, 1);
    }
    const auto n = idx(c.attention_heads);
    b.query = MatrixXd::Zero(2 * h, n * idx(c.head_dim_qk));
    b.key = MatrixXd::Zero(idx(c.gcn_output_dim), n * idx(c.head_dim_qk));
    b.value = MatrixXd::Zero(idx(c.gcn_output_dim), n * idx(c.head_dim_v));
    b.output = MatrixXd::Zero(n * idx(c.head_dim_v), idx(c.attention_output_dim));
    return b;
}

} // namespace

ModelParams ModelParams::zeros(const ModelConfig& config, const FeatureDims& dims) {
    config.validate();
    if (dims.embedding_dim < 1 || dims.tweet_activity_dim < 1 || dims.retweet_activity_dim < 1 || dims.pns_dim < 1) {
        throw ArgumentError("feature dims must be >= 1");
    }
    ModelParams p;
    p.tweet = zero_branch(config, dims.tweet_activity_dim, dims.embedding_dim);
    p.retweet = zero_branch(config, dims.retweet_activity_dim, dims.embedding_dim);
    p.pns_weights = MatrixXd::Zero(idx(config.pns_hidden), idx(dims.pns_dim));
    p.pns_bias = MatrixXd::Zero(idx(config.pns_hidden), 1);
    p.classifier_weights = MatrixXd::Zero(1, 2 * idx(config.attention_output_dim) + idx(config.pns_hidden));
    p.classifier_bias = MatrixXd::Zero(1, 1);
    return p;
}

ModelParams ModelParams::initialize(const ModelConfig& config, const FeatureDims& dims, std::uint64_t seed) {
    ModelParams p = zeros(config, dims);
    Rng rng(seed);
    auto fill = [&rng](MatrixXd& m, Index fan_in) {
        const double limit = std::sqrt(3.0 / static_cast<double>(fan_in));
        for (Index r = 0; r < m.rows(); ++r) {
            for (Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform(-limit, limit);
        }
    };
    const auto h = idx(config.bilstm_hidden);
    p.for_each([&](const std::string& name, MatrixXd& m) {
        if (name.ends_with("bias")) return;
        if (name.ends_with("input_weights") || name.ends_with("recurrent_weights") || name == "pns.weights" ||
            name == "classifier.weights") {
            fill(m, m.cols());
        } else {
            fill(m, m.rows());
        }
    });
    for (auto* b : {&p.tweet, &p.retweet}) {
        for (auto* l : {&b->lstm_forward, &b->lstm_backward}) l->bias.block(h, 0, h, 1).setOnes();
    }
    return p;
}

std::size_t ModelParams::parameter_count() const {
    std::size_t n = 0;
    for_each([&n](const std::string&, const MatrixXd& m) { n += static_cast<std::size_t>(m.size()); });
    return n;
}

} // namespace somps
