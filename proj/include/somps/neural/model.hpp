#pragma once

#include "somps/featurize/article.hpp"
#include "somps/neural/layers.hpp"
#include "somps/neural/params.hpp"

#include <cstdint>

namespace somps {

/// Activations of one engagement branch.
struct BranchTrace {
    Eigen::MatrixXd norm_adjacency; ///< Ā
    GcnCache gcn;                   ///< graph embedding in gcn.output
    BilstmCache lstm;               ///< sequence encoding in lstm.output
    MultiHeadCache attention;       ///< cross attention, queries from text, keys/values from graph
    Eigen::VectorXd pooled;         ///< mean of attention output over query positions
};

/// Every intermediate of one forward pass; also the input to backward().
struct ForwardTrace {
    ModelVariant variant = ModelVariant::somps;
    bool computed_social = false;
    bool computed_pns = false;
    BranchTrace tweet;
    BranchTrace retweet;
    Eigen::VectorXd social;          ///< O^S = [pooled tweet; pooled retweet]
    Eigen::VectorXd pns_preactivation;
    Eigen::VectorXd pns;             ///< O^P
    Eigen::VectorXd fused;           ///< [O^S; O^P] with the variant's disabled slot zeroed
    Eigen::VectorXd dropout_mask;    ///< inverted-dropout scale per fused unit (all ones in inference)
    double logit = 0.0;
    double probability = 0.5;        ///< P(real)
};

FeatureDims feature_dims(const ArticleFeatures& features);

/// Runs the full model. Dropout on the fused vector is active only when
/// `training` is set and is driven by `dropout_seed`.
/// Throws ArgumentError when feature shapes do not match the parameters.
ForwardTrace forward(const ArticleFeatures& features, const ModelParams& params, const ModelConfig& config,
                     ModelVariant variant, bool training, std::uint64_t dropout_seed = 0);

/// Gradient of bce_loss(trace.probability, label) with respect to every parameter.
ModelParams backward(const ForwardTrace& trace, const ArticleFeatures& features, const ModelParams& params,
                     const ModelConfig& config, Label label);

/// Binary cross-entropy with the probability clamped to [1e-7, 1 - 1e-7].
double bce_loss(double probability, Label label);
double bce_loss(double probability, int label);

} // namespace somps
