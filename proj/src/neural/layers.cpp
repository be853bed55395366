#include "somps/neural/layers.hpp"

#include "somps/error.hpp"

#include <cmath>

namespace somps {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::MatrixXd normalize_adjacency(const Eigen::MatrixXd& adjacency) {
    if (adjacency.rows() != adjacency.cols()) throw ArgumentError("normalize_adjacency: matrix is not square");
    const Index k = adjacency.rows();
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
            const double a = adjacency(i, j);
            if (!std::isfinite(a) || a < 0.0) throw ArgumentError("normalize_adjacency: negative or non-finite entry");
            if (std::abs(a - adjacency(j, i)) > 1e-12) throw ArgumentError("normalize_adjacency: matrix is not symmetric");
        }
    }
    MatrixXd looped = adjacency + MatrixXd::Identity(k, k);
    const VectorXd inv_sqrt_degree = looped.rowwise().sum().array().rsqrt();
    // Scale each pair by the product d_i * d_j and mirror it, so the result is
    // symmetric bit for bit.
    MatrixXd out(k, k);
    for (Index i = 0; i < k; ++i) {
        for (Index j = i; j < k; ++j) {
            out(i, j) = out(j, i) = looped(i, j) * (inv_sqrt_degree(i) * inv_sqrt_degree(j));
        }
    }
    return out;
}

namespace {

MatrixXd activate(const MatrixXd& z, Activation a) {
    return a == Activation::relu ? MatrixXd(z.cwiseMax(0.0)) : z;
}

VectorXd sigmoid(const VectorXd& x) { return (1.0 + (-x.array()).exp()).inverse().matrix(); }

} // namespace

GcnCache gcn_forward_cached(const MatrixXd& norm_adjacency, const MatrixXd& features,
                            std::span<const MatrixXd> weights, Activation activation) {
    if (norm_adjacency.rows() != norm_adjacency.cols() || norm_adjacency.rows() != features.rows()) {
        throw ArgumentError("gcn_forward: adjacency and feature rows disagree");
    }
    GcnCache cache;
    MatrixXd h = features;
    for (const auto& w : weights) {
        if (h.cols() != w.rows()) {
            throw ArgumentError("gcn_forward: layer expects " + std::to_string(w.rows()) + " inputs, got " +
                                std::to_string(h.cols()));
        }
        MatrixXd propagated = norm_adjacency * h;
        MatrixXd z = propagated * w;
        cache.inputs.push_back(std::move(h));
        h = activate(z, activation);
        cache.propagated.push_back(std::move(propagated));
        cache.preactivations.push_back(std::move(z));
    }
    cache.output = std::move(h);
    return cache;
}

MatrixXd gcn_forward(const MatrixXd& norm_adjacency, const MatrixXd& features, std::span<const MatrixXd> weights,
                     Activation activation) {
    return gcn_forward_cached(norm_adjacency, features, weights, activation).output;
}

void gcn_backward(const GcnCache& cache, const MatrixXd& norm_adjacency, std::span<const MatrixXd> weights,
                  const MatrixXd& d_output, std::span<MatrixXd> d_weights, Activation activation) {
    MatrixXd d_h = d_output;
    for (std::size_t l = weights.size(); l-- > 0;) {
        MatrixXd d_z = d_h;
        if (activation == Activation::relu) {
            d_z = (cache.preactivations[l].array() > 0.0).select(d_h, 0.0);
        }
        d_weights[l] += cache.propagated[l].transpose() * d_z;
        if (l > 0) d_h = norm_adjacency.transpose() * (d_z * weights[l].transpose());
    }
}

namespace {

LstmCache lstm_pass(const MatrixXd& sequence, const LstmParams& p, bool reverse) {
    const Index m = sequence.rows();
    const Index h = p.recurrent_weights.cols();
    const MatrixXd projected = p.input_weights * sequence.transpose(); // [4h x m]
    LstmCache cache;
    VectorXd h_prev = VectorXd::Zero(h);
    VectorXd c_prev = VectorXd::Zero(h);
    for (Index s = 0; s < m; ++s) {
        const Index t = reverse ? m - 1 - s : s;
        VectorXd a = projected.col(t) + p.recurrent_weights * h_prev + p.bias.col(0);
        VectorXd gates(4 * h);
        gates.segment(0, h) = sigmoid(a.segment(0, h));
        gates.segment(h, h) = sigmoid(a.segment(h, h));
        gates.segment(2 * h, h) = a.segment(2 * h, h).array().tanh().matrix();
        gates.segment(3 * h, h) = sigmoid(a.segment(3 * h, h));
        VectorXd c = gates.segment(h, h).cwiseProduct(c_prev) + gates.segment(0, h).cwiseProduct(gates.segment(2 * h, h));
        VectorXd tc = c.array().tanh().matrix();
        VectorXd hidden = gates.segment(3 * h, h).cwiseProduct(tc);
        cache.positions.push_back(t);
        cache.gates.push_back(std::move(gates));
        cache.cells.push_back(c);
        cache.cell_tanh.push_back(std::move(tc));
        cache.hidden.push_back(hidden);
        h_prev = std::move(hidden);
        c_prev = std::move(c);
    }
    return cache;
}

void lstm_pass_backward(const LstmCache& cache, const MatrixXd& sequence, const LstmParams& p,
                        const MatrixXd& d_hidden_by_position, LstmParams& grad) {
    const Index h = p.recurrent_weights.cols();
    const auto steps = cache.positions.size();
    VectorXd dh_next = VectorXd::Zero(h);
    VectorXd dc_next = VectorXd::Zero(h);
    MatrixXd d_pre(4 * h, static_cast<Index>(steps));
    for (std::size_t s = steps; s-- > 0;) {
        const Index t = cache.positions[s];
        const auto& g = cache.gates[s];
        const auto i = g.segment(0, h).array();
        const auto f = g.segment(h, h).array();
        const auto cand = g.segment(2 * h, h).array();
        const auto o = g.segment(3 * h, h).array();
        const auto tc = cache.cell_tanh[s].array();
        const VectorXd c_prev = s > 0 ? cache.cells[s - 1] : VectorXd::Zero(h);

        const VectorXd dh = d_hidden_by_position.row(t).transpose() + dh_next;
        const VectorXd dc = (dh.array() * o * (1.0 - tc.square())).matrix() + dc_next;

        VectorXd da(4 * h);
        da.segment(0, h) = (dc.array() * cand * i * (1.0 - i)).matrix();
        da.segment(h, h) = (dc.array() * c_prev.array() * f * (1.0 - f)).matrix();
        da.segment(2 * h, h) = (dc.array() * i * (1.0 - cand.square())).matrix();
        da.segment(3 * h, h) = (dh.array() * tc * o * (1.0 - o)).matrix();

        if (s > 0) grad.recurrent_weights += da * cache.hidden[s - 1].transpose();
        grad.bias.col(0) += da;
        d_pre.col(static_cast<Index>(s)) = da;
        dh_next = p.recurrent_weights.transpose() * da;
        dc_next = (dc.array() * f).matrix();
    }
    MatrixXd inputs(static_cast<Index>(steps), sequence.cols());
    for (std::size_t s = 0; s < steps; ++s) inputs.row(static_cast<Index>(s)) = sequence.row(cache.positions[s]);
    grad.input_weights += d_pre * inputs;
}

} // namespace

BilstmCache bilstm_forward_cached(const MatrixXd& sequence, const LstmParams& forward, const LstmParams& backward) {
    if (sequence.rows() < 1) throw ArgumentError("bilstm_forward: empty sequence");
    if (sequence.cols() != forward.input_weights.cols() || sequence.cols() != backward.input_weights.cols()) {
        throw ArgumentError("bilstm_forward: embedding width does not match input weights");
    }
    BilstmCache cache;
    cache.forward = lstm_pass(sequence, forward, false);
    cache.backward = lstm_pass(sequence, backward, true);
    const Index h = forward.recurrent_weights.cols();
    const Index hb = backward.recurrent_weights.cols();
    cache.output.resize(sequence.rows(), h + hb);
    for (std::size_t s = 0; s < cache.forward.positions.size(); ++s) {
        cache.output.row(cache.forward.positions[s]).head(h) = cache.forward.hidden[s].transpose();
        cache.output.row(cache.backward.positions[s]).tail(hb) = cache.backward.hidden[s].transpose();
    }
    return cache;
}

MatrixXd bilstm_forward(const MatrixXd& sequence, const LstmParams& forward, const LstmParams& backward) {
    return bilstm_forward_cached(sequence, forward, backward).output;
}

void bilstm_backward(const BilstmCache& cache, const MatrixXd& sequence, const LstmParams& forward,
                     const LstmParams& backward, const MatrixXd& d_output, LstmParams& d_forward,
                     LstmParams& d_backward) {
    const Index h = forward.recurrent_weights.cols();
    const Index hb = backward.recurrent_weights.cols();
    lstm_pass_backward(cache.forward, sequence, forward, d_output.leftCols(h), d_forward);
    lstm_pass_backward(cache.backward, sequence, backward, d_output.rightCols(hb), d_backward);
}

namespace {

MatrixXd row_softmax(const MatrixXd& scores) {
    MatrixXd p(scores.rows(), scores.cols());
    for (Index r = 0; r < scores.rows(); ++r) {
        const double mx = scores.row(r).maxCoeff();
        p.row(r) = (scores.row(r).array() - mx).exp().matrix();
        p.row(r) /= p.row(r).sum();
    }
    return p;
}

} // namespace

AttentionResult scaled_dot_attention(const MatrixXd& q, const MatrixXd& k, const MatrixXd& v) {
    if (q.cols() != k.cols()) throw ArgumentError("scaled_dot_attention: query/key widths differ");
    if (k.rows() != v.rows()) throw ArgumentError("scaled_dot_attention: key/value counts differ");
    if (k.rows() == 0) throw ArgumentError("scaled_dot_attention: no keys");
    AttentionResult r;
    r.weights = row_softmax(q * k.transpose() / std::sqrt(static_cast<double>(q.cols())));
    r.output = r.weights * v;
    return r;
}

MultiHeadCache multi_head_attention(const MatrixXd& query_input, const MatrixXd& kv_input, const MatrixXd& w_query,
                                    const MatrixXd& w_key, const MatrixXd& w_value, const MatrixXd& w_output,
                                    const AttentionShape& shape, std::optional<std::size_t> valid_keys) {
    const auto n = static_cast<Index>(shape.heads);
    const auto dk = static_cast<Index>(shape.dim_qk);
    const auto dv = static_cast<Index>(shape.dim_v);
    if (query_input.cols() != w_query.rows() || kv_input.cols() != w_key.rows() || kv_input.cols() != w_value.rows() ||
        w_query.cols() != n * dk || w_key.cols() != n * dk || w_value.cols() != n * dv || w_output.rows() != n * dv) {
        throw ArgumentError("multi_head_attention: projection shapes do not match inputs");
    }
    MultiHeadCache c;
    c.valid_keys = valid_keys ? std::min<std::size_t>(*valid_keys, static_cast<std::size_t>(kv_input.rows()))
                              : static_cast<std::size_t>(kv_input.rows());
    const auto nv = static_cast<Index>(c.valid_keys);
    c.queries = query_input * w_query;
    c.keys = kv_input * w_key;
    c.values = kv_input * w_value;
    c.concat = MatrixXd::Zero(query_input.rows(), n * dv);
    if (nv > 0) {
        for (Index j = 0; j < n; ++j) {
            auto head = scaled_dot_attention(c.queries.middleCols(j * dk, dk), c.keys.block(0, j * dk, nv, dk),
                                             c.values.block(0, j * dv, nv, dv));
            c.concat.middleCols(j * dv, dv) = head.output;
            c.weights.push_back(std::move(head.weights));
        }
    }
    c.output = c.concat * w_output;
    return c;
}

MultiHeadGradients multi_head_attention_backward(const MultiHeadCache& c, const MatrixXd& query_input,
                                                 const MatrixXd& kv_input, const MatrixXd& w_query,
                                                 const MatrixXd& w_key, const MatrixXd& w_value,
                                                 const MatrixXd& w_output, const AttentionShape& shape,
                                                 const MatrixXd& d_output, MatrixXd& d_w_query, MatrixXd& d_w_key,
                                                 MatrixXd& d_w_value, MatrixXd& d_w_output) {
    const auto n = static_cast<Index>(shape.heads);
    const auto dk = static_cast<Index>(shape.dim_qk);
    const auto dv = static_cast<Index>(shape.dim_v);
    const auto nv = static_cast<Index>(c.valid_keys);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

    d_w_output += c.concat.transpose() * d_output;
    const MatrixXd d_concat = d_output * w_output.transpose();

    MatrixXd d_queries = MatrixXd::Zero(c.queries.rows(), c.queries.cols());
    MatrixXd d_keys = MatrixXd::Zero(c.keys.rows(), c.keys.cols());
    MatrixXd d_values = MatrixXd::Zero(c.values.rows(), c.values.cols());
    if (nv > 0) {
        for (Index j = 0; j < n; ++j) {
            const auto& p = c.weights[static_cast<std::size_t>(j)];
            const auto d_head = d_concat.middleCols(j * dv, dv);
            const auto v = c.values.block(0, j * dv, nv, dv);
            const MatrixXd d_p = d_head * v.transpose();
            d_values.block(0, j * dv, nv, dv) = p.transpose() * d_head;
            const Eigen::VectorXd row_dot = (p.array() * d_p.array()).rowwise().sum();
            const MatrixXd d_scores = (p.array() * (d_p.colwise() - row_dot).array()).matrix() * scale;
            d_queries.middleCols(j * dk, dk) = d_scores * c.keys.block(0, j * dk, nv, dk);
            d_keys.block(0, j * dk, nv, dk) = d_scores.transpose() * c.queries.middleCols(j * dk, dk);
        }
    }
    d_w_query += query_input.transpose() * d_queries;
    d_w_key += kv_input.transpose() * d_keys;
    d_w_value += kv_input.transpose() * d_values;
    return {d_queries * w_query.transpose(), d_keys * w_key.transpose() + d_values * w_value.transpose()};
}

} // namespace somps
