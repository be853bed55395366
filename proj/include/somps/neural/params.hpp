#pragma once

#include "somps/neural/config.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace somps {

/// One LSTM direction. Gate blocks are stacked [input; forget; cell; output].
struct LstmParams {
    Eigen::MatrixXd input_weights;     ///< [4h x e]
    Eigen::MatrixXd recurrent_weights; ///< [4h x h]
    Eigen::MatrixXd bias;              ///< [4h x 1]
};

/// Parameters of one engagement branch (tweet or retweet).
struct BranchParams {
    std::vector<Eigen::MatrixXd> gcn; ///< layer weights, [d x g] then [g x g]
    LstmParams lstm_forward;
    LstmParams lstm_backward;
    /// Per-head projections stacked column-wise: head j owns columns [j*dk, (j+1)*dk).
    Eigen::MatrixXd query;  ///< [2h x n*dk]
    Eigen::MatrixXd key;    ///< [g x n*dk]
    Eigen::MatrixXd value;  ///< [g x n*dv]
    Eigen::MatrixXd output; ///< [n*dv x a]
};

struct ModelParams {
    BranchParams tweet;
    BranchParams retweet;
    Eigen::MatrixXd pns_weights;        ///< [p x f]
    Eigen::MatrixXd pns_bias;           ///< [p x 1]
    Eigen::MatrixXd classifier_weights; ///< [1 x (2a + p)]
    Eigen::MatrixXd classifier_bias;    ///< [1 x 1]

    /// All-zero parameters with the shapes implied by config and dims.
    static ModelParams zeros(const ModelConfig& config, const FeatureDims& dims);

    /// Fan-in scaled uniform initialization, U(-sqrt(3/fan_in), sqrt(3/fan_in)),
    /// zero biases except LSTM forget gates (1.0). Deterministic in `seed`.
    static ModelParams initialize(const ModelConfig& config, const FeatureDims& dims, std::uint64_t seed);

    /// Visits every tensor with a stable dotted name, in a fixed order.
    template <typename F>
    void for_each(F&& f) {
        visit(*this, f);
    }
    template <typename F>
    void for_each(F&& f) const {
        visit(*this, f);
    }

    std::size_t parameter_count() const;

private:
    template <typename Self, typename F>
    static void visit(Self& self, F& f) {
        auto branch = [&f](auto& b, const std::string& prefix) {
            for (std::size_t l = 0; l < b.gcn.size(); ++l) f(prefix + ".gcn." + std::to_string(l), b.gcn[l]);
            auto lstm = [&f](auto& p, const std::string& pre) {
                f(pre + ".input_weights", p.input_weights);
                f(pre + ".recurrent_weights", p.recurrent_weights);
                f(pre + ".bias", p.bias);
            };
            lstm(b.lstm_forward, prefix + ".lstm_forward");
            lstm(b.lstm_backward, prefix + ".lstm_backward");
            f(prefix + ".attention.query", b.query);
            f(prefix + ".attention.key", b.key);
            f(prefix + ".attention.value", b.value);
            f(prefix + ".attention.output", b.output);
        };
        branch(self.tweet, "tweet");
        branch(self.retweet, "retweet");
        f(std::string("pns.weights"), self.pns_weights);
        f(std::string("pns.bias"), self.pns_bias);
        f(std::string("classifier.weights"), self.classifier_weights);
        f(std::string("classifier.bias"), self.classifier_bias);
    }
};

} // namespace somps
