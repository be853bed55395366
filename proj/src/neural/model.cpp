#include "somps/neural/model.hpp"

#include "somps/error.hpp"
#include "somps/rng.hpp"

#include <algorithm>
#include <cmath>

namespace somps {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

FeatureDims feature_dims(const ArticleFeatures& f) {
    return {static_cast<std::size_t>(f.tweet.embedding.cols()), static_cast<std::size_t>(f.tweet.activity.cols()),
            static_cast<std::size_t>(f.retweet.activity.cols()), static_cast<std::size_t>(f.pns.size())};
}

namespace {

AttentionShape attention_shape(const ModelConfig& c) { return {c.attention_heads, c.head_dim_qk, c.head_dim_v}; }

BranchTrace branch_forward(const BranchFeatures& f, const BranchParams& p, const ModelConfig& config) {
    if (f.embedding.cols() != p.lstm_forward.input_weights.cols()) {
        throw ArgumentError("forward: embedding width " + std::to_string(f.embedding.cols()) +
                            " does not match model (" + std::to_string(p.lstm_forward.input_weights.cols()) + ")");
    }
    if (f.activity.cols() != p.gcn.front().rows()) {
        throw ArgumentError("forward: activity width " + std::to_string(f.activity.cols()) +
                            " does not match model (" + std::to_string(p.gcn.front().rows()) + ")");
    }
    BranchTrace t;
    t.norm_adjacency = normalize_adjacency(f.adjacency);
    t.gcn = gcn_forward_cached(t.norm_adjacency, f.activity, p.gcn);
    t.lstm = bilstm_forward_cached(f.embedding, p.lstm_forward, p.lstm_backward);
    t.attention = multi_head_attention(t.lstm.output, t.gcn.output, p.query, p.key, p.value, p.output,
                                       attention_shape(config), f.valid_users);
    t.pooled = t.attention.output.colwise().mean().transpose();
    return t;
}

void branch_backward(const BranchTrace& t, const BranchFeatures& f, const BranchParams& p, const ModelConfig& config,
                     const VectorXd& d_pooled, BranchParams& g) {
    const Index m = t.attention.output.rows();
    const MatrixXd d_attention = MatrixXd::Ones(m, 1) * (d_pooled.transpose() / static_cast<double>(m));
    const auto inputs = multi_head_attention_backward(t.attention, t.lstm.output, t.gcn.output, p.query, p.key,
                                                      p.value, p.output, attention_shape(config), d_attention,
                                                      g.query, g.key, g.value, g.output);
    bilstm_backward(t.lstm, f.embedding, p.lstm_forward, p.lstm_backward, inputs.d_query_input, g.lstm_forward,
                    g.lstm_backward);
    gcn_backward(t.gcn, t.norm_adjacency, p.gcn, inputs.d_kv_input, g.gcn);
}

} // namespace

ForwardTrace forward(const ArticleFeatures& features, const ModelParams& params, const ModelConfig& config,
                     ModelVariant variant, bool training, std::uint64_t dropout_seed) {
    if (features.pns.size() != params.pns_weights.cols()) {
        throw ArgumentError("forward: statistics width " + std::to_string(features.pns.size()) +
                            " does not match model (" + std::to_string(params.pns_weights.cols()) + ")");
    }
    const auto a = static_cast<Index>(config.attention_output_dim);
    const auto hp = params.pns_weights.rows();

    ForwardTrace t;
    t.variant = variant;
    t.social = VectorXd::Zero(2 * a);
    t.pns_preactivation = VectorXd::Zero(hp);
    t.pns = VectorXd::Zero(hp);

    if (variant != ModelVariant::pns_only) {
        t.tweet = branch_forward(features.tweet, params.tweet, config);
        t.retweet = branch_forward(features.retweet, params.retweet, config);
        t.social << t.tweet.pooled, t.retweet.pooled;
        t.computed_social = true;
    }
    if (variant != ModelVariant::sig_only) {
        t.pns_preactivation = params.pns_weights * features.pns + params.pns_bias.col(0);
        t.pns = t.pns_preactivation.cwiseMax(0.0);
        t.computed_pns = true;
    }

    t.fused.resize(2 * a + hp);
    t.fused << t.social, t.pns;
    t.dropout_mask = VectorXd::Ones(t.fused.size());
    if (training && config.dropout > 0.0) {
        Rng rng(dropout_seed);
        const double keep = 1.0 - config.dropout;
        for (Index i = 0; i < t.dropout_mask.size(); ++i) {
            t.dropout_mask[i] = rng.uniform() < config.dropout ? 0.0 : 1.0 / keep;
        }
    }
    const VectorXd dropped = t.fused.cwiseProduct(t.dropout_mask);
    t.logit = (params.classifier_weights * dropped)(0, 0) + params.classifier_bias(0, 0);
    t.probability = 1.0 / (1.0 + std::exp(-t.logit));
    return t;
}

ModelParams backward(const ForwardTrace& t, const ArticleFeatures& features, const ModelParams& params,
                     const ModelConfig& config, Label label) {
    ModelParams g = params;
    g.for_each([](const std::string&, MatrixXd& m) { m.setZero(); });

    const double d_logit = t.probability - static_cast<double>(to_int(label));
    const VectorXd dropped = t.fused.cwiseProduct(t.dropout_mask);
    g.classifier_weights = d_logit * dropped.transpose();
    g.classifier_bias(0, 0) = d_logit;
    const VectorXd d_fused = (d_logit * params.classifier_weights.transpose()).cwiseProduct(t.dropout_mask);

    const auto a = static_cast<Index>(config.attention_output_dim);
    if (t.computed_pns) {
        const VectorXd d_pns = d_fused.tail(d_fused.size() - 2 * a);
        const VectorXd d_pre = (t.pns_preactivation.array() > 0.0).select(d_pns, 0.0);
        g.pns_weights = d_pre * features.pns.transpose();
        g.pns_bias.col(0) = d_pre;
    }
    if (t.computed_social) {
        branch_backward(t.tweet, features.tweet, params.tweet, config, d_fused.head(a), g.tweet);
        branch_backward(t.retweet, features.retweet, params.retweet, config, d_fused.segment(a, a), g.retweet);
    }
    return g;
}

double bce_loss(double probability, int label) {
    const double p = std::clamp(probability, 1e-7, 1.0 - 1e-7);
    return -(label * std::log(p) + (1 - label) * std::log(1.0 - p));
}

double bce_loss(double probability, Label label) { return bce_loss(probability, to_int(label)); }

} // namespace somps
