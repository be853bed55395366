#pragma once

#include "somps/neural/params.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace somps {

/// D^{-1/2} (A + I) D^{-1/2} with D the row degree of A + I. Self-loops keep
/// every degree positive for zero-padded graphs.
/// Throws ArgumentError for a non-square, asymmetric or negative matrix.
Eigen::MatrixXd normalize_adjacency(const Eigen::MatrixXd& adjacency);

enum class Activation { relu, identity };

/// Stacked graph convolution cache: per layer input H, propagated ĀH and pre-activation ĀHW.
struct GcnCache {
    std::vector<Eigen::MatrixXd> inputs;
    std::vector<Eigen::MatrixXd> propagated;
    std::vector<Eigen::MatrixXd> preactivations;
    Eigen::MatrixXd output;
};

/// H(l+1) = act(Ā H(l) W(l)) for each weight matrix in turn.
/// Throws ArgumentError when shapes do not chain.
Eigen::MatrixXd gcn_forward(const Eigen::MatrixXd& norm_adjacency, const Eigen::MatrixXd& features,
                            std::span<const Eigen::MatrixXd> weights, Activation activation = Activation::relu);
GcnCache gcn_forward_cached(const Eigen::MatrixXd& norm_adjacency, const Eigen::MatrixXd& features,
                            std::span<const Eigen::MatrixXd> weights, Activation activation = Activation::relu);

/// Accumulates weight gradients given d(output); input features are constants.
void gcn_backward(const GcnCache& cache, const Eigen::MatrixXd& norm_adjacency,
                  std::span<const Eigen::MatrixXd> weights, const Eigen::MatrixXd& d_output,
                  std::span<Eigen::MatrixXd> d_weights, Activation activation = Activation::relu);

/// Per-step activations of one LSTM direction, in processing order.
struct LstmCache {
    std::vector<Eigen::Index> positions;
    std::vector<Eigen::VectorXd> gates; ///< [i; f; g; o] after nonlinearity
    std::vector<Eigen::VectorXd> cells;
    std::vector<Eigen::VectorXd> cell_tanh;
    std::vector<Eigen::VectorXd> hidden;
};

struct BilstmCache {
    LstmCache forward;
    LstmCache backward;
    Eigen::MatrixXd output; ///< [m x 2h]: forward states then backward states
};

/// Bidirectional LSTM over the rows of `sequence` (m x e).
Eigen::MatrixXd bilstm_forward(const Eigen::MatrixXd& sequence, const LstmParams& forward, const LstmParams& backward);
BilstmCache bilstm_forward_cached(const Eigen::MatrixXd& sequence, const LstmParams& forward,
                                  const LstmParams& backward);
void bilstm_backward(const BilstmCache& cache, const Eigen::MatrixXd& sequence, const LstmParams& forward,
                     const LstmParams& backward, const Eigen::MatrixXd& d_output, LstmParams& d_forward,
                     LstmParams& d_backward);

struct AttentionResult {
    Eigen::MatrixXd output;  ///< [s_q x d_v]
    Eigen::MatrixXd weights; ///< [s_q x s_k], rows sum to one
};

/// Softmax(Q K^T / sqrt(d_k)) V with a numerically stable row softmax.
/// Throws ArgumentError when inner dimensions disagree.
AttentionResult scaled_dot_attention(const Eigen::MatrixXd& q, const Eigen::MatrixXd& k, const Eigen::MatrixXd& v);

struct MultiHeadCache {
    Eigen::MatrixXd queries; ///< [s_q x n*dk]
    Eigen::MatrixXd keys;    ///< [s_k x n*dk]
    Eigen::MatrixXd values;  ///< [s_k x n*dv]
    std::vector<Eigen::MatrixXd> weights; ///< per head, [s_q x valid_keys]
    Eigen::MatrixXd concat;  ///< [s_q x n*dv]
    Eigen::MatrixXd output;  ///< [s_q x a]
    std::size_t valid_keys = 0;
};

struct AttentionShape {
    std::size_t heads = 1;
    std::size_t dim_qk = 1;
    std::size_t dim_v = 1;
};

/// Concat(head_1..head_n) W_O with head_j = Attention(Q W_Q^j, K W_K^j, V W_V^j),
/// where queries come from `query_input` and keys/values from `kv_input`.
/// Only the first `valid_keys` rows of kv_input are attended (all rows when
/// unset); with zero valid keys every head outputs zeros.
MultiHeadCache multi_head_attention(const Eigen::MatrixXd& query_input, const Eigen::MatrixXd& kv_input,
                                    const Eigen::MatrixXd& w_query, const Eigen::MatrixXd& w_key,
                                    const Eigen::MatrixXd& w_value, const Eigen::MatrixXd& w_output,
                                    const AttentionShape& shape, std::optional<std::size_t> valid_keys = std::nullopt);

struct MultiHeadGradients {
    Eigen::MatrixXd d_query_input;
    Eigen::MatrixXd d_kv_input;
};

/// Accumulates into the four projection gradients and returns input gradients.
MultiHeadGradients multi_head_attention_backward(const MultiHeadCache& cache, const Eigen::MatrixXd& query_input,
                                                 const Eigen::MatrixXd& kv_input, const Eigen::MatrixXd& w_query,
                                                 const Eigen::MatrixXd& w_key, const Eigen::MatrixXd& w_value,
                                                 const Eigen::MatrixXd& w_output, const AttentionShape& shape,
                                                 const Eigen::MatrixXd& d_output, Eigen::MatrixXd& d_w_query,
                                                 Eigen::MatrixXd& d_w_key, Eigen::MatrixXd& d_w_value,
                                                 Eigen::MatrixXd& d_w_output);

} // namespace somps
