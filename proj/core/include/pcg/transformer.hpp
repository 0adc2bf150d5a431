#pragma once

#include <string>
#include <vector>

#include "pcg/layers.hpp"

namespace pcg::model {

// Encoder layer without intra-layer normalization:
//   h = x + Dropout(MultiHead(x))
//   y = h + Dropout(W2 relu(W1 h + b1) + b2)
// MultiHead uses per-head softmax(Q K^T / sqrt(d_k)) V with d_k = d / heads
// and the concatenated heads projected by W_O. All projections act on
// channel-major columns (q = W_Q x), so W_Q here is the transpose of the
// row-vector convention.
class TransformerLayer {
public:
    TransformerLayer() = default;
    TransformerLayer(const std::string& name, int d_model, int heads, int ffn, double dropout);

    Matrix forward(const Matrix& x, int batch, Mode mode, Rng* rng);
    Matrix backward(const Matrix& dy);
    void collect(std::vector<Parameter*>& out);
    void init(Rng& rng);

    // Attention weights of the last forward, indexed [b * heads + h]
    // (time x time, rows are queries). Each row sums to 1.
    const std::vector<Matrix>& attention() const { return attn_; }

    int heads() const { return heads_; }

    Parameter wq, wk, wv, wo;
    Parameter w1, b1, w2, b2;

private:
    int d_ = 0, heads_ = 1, dk_ = 0, ffn_ = 0;
    int batch_ = 0, time_ = 0;
    Dropout drop_attn_, drop_ffn_;
    Matrix x_, q_, k_, v_, o_, h_, pre_, act_;
    std::vector<Matrix> attn_;
};

}  // namespace pcg::model
