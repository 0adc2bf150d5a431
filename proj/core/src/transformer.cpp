#include "pcg/transformer.hpp"

#include <cmath>

#include "pcg/error.hpp"

namespace pcg::model {

TransformerLayer::TransformerLayer(const std::string& name, int d_model, int heads, int ffn, double dropout)
    : wq(name + ".wq", {d_model, d_model}, d_model, d_model),
      wk(name + ".wk", {d_model, d_model}, d_model, d_model),
      wv(name + ".wv", {d_model, d_model}, d_model, d_model),
      wo(name + ".wo", {d_model, d_model}, d_model, d_model),
      w1(name + ".w1", {ffn, d_model}, ffn, d_model),
      b1(name + ".b1", {ffn}, ffn, 1),
      w2(name + ".w2", {d_model, ffn}, d_model, ffn),
      b2(name + ".b2", {d_model}, d_model, 1),
      d_(d_model),
      heads_(heads),
      dk_(heads > 0 ? d_model / heads : 0),
      ffn_(ffn),
      drop_attn_(dropout),
      drop_ffn_(dropout) {
    if (heads <= 0 || d_model % heads != 0) fail(Errc::InvalidSpec, "attention heads must divide d_model");
}

void TransformerLayer::init(Rng& rng) {
    auto fill = [&](Matrix& m, double stddev) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = stddev * rng.normal();
        }
    };
    const double s = 1.0 / std::sqrt(static_cast<double>(d_));
    fill(wq.value, s);
    fill(wk.value, s);
    fill(wv.value, s);
    fill(wo.value, s);
    fill(w1.value, std::sqrt(2.0 / d_));
    fill(w2.value, 1.0 / std::sqrt(static_cast<double>(ffn_)));
    b1.value.setZero();
    b2.value.setZero();
}

Matrix TransformerLayer::forward(const Matrix& x, int batch, Mode mode, Rng* rng) {
    if (x.rows() != d_) fail(Errc::ShapeMismatch, "transformer input width != d_model");
    if (batch <= 0 || x.cols() % batch != 0) fail(Errc::ShapeMismatch, "transformer batch/column mismatch");
    batch_ = batch;
    time_ = static_cast<int>(x.cols()) / batch;
    x_ = x;

    q_.noalias() = wq.value * x;
    k_.noalias() = wk.value * x;
    v_.noalias() = wv.value * x;
    o_.resize(d_, x.cols());
    attn_.resize(static_cast<std::size_t>(batch_ * heads_));

    const double scale = 1.0 / std::sqrt(static_cast<double>(dk_));
    for (int b = 0; b < batch_; ++b) {
        for (int h = 0; h < heads_; ++h) {
            const auto qh = q_.block(h * dk_, b * time_, dk_, time_);
            const auto kh = k_.block(h * dk_, b * time_, dk_, time_);
            const auto vh = v_.block(h * dk_, b * time_, dk_, time_);
            Matrix scores = scale * (qh.transpose() * kh);  // query x key
            scores.colwise() -= scores.rowwise().maxCoeff();
            scores = scores.array().exp().matrix();
            scores.array().colwise() /= scores.rowwise().sum().array();
            o_.block(h * dk_, b * time_, dk_, time_).noalias() = vh * scores.transpose();
            attn_[static_cast<std::size_t>(b * heads_ + h)] = std::move(scores);
        }
    }

    h_ = x + drop_attn_.forward(wo.value * o_, mode, rng);
    pre_ = w1.value * h_;
    pre_.colwise() += b1.value.col(0);
    act_ = pre_.cwiseMax(0.0);
    Matrix f = w2.value * act_;
    f.colwise() += b2.value.col(0);
    return h_ + drop_ffn_.forward(f, mode, rng);
}

Matrix TransformerLayer::backward(const Matrix& dy) {
    // feed-forward sublayer
    const Matrix df = drop_ffn_.backward(dy);
    w2.grad.noalias() += df * act_.transpose();
    b2.grad.col(0) += df.rowwise().sum();
    Matrix dpre = w2.value.transpose() * df;
    dpre.array() *= (pre_.array() > 0.0).cast<double>();
    w1.grad.noalias() += dpre * h_.transpose();
    b1.grad.col(0) += dpre.rowwise().sum();
    Matrix dh = dy;
    dh.noalias() += w1.value.transpose() * dpre;

    // attention sublayer
    const Matrix dattn = drop_attn_.backward(dh);
    wo.grad.noalias() += dattn * o_.transpose();
    const Matrix d_o = wo.value.transpose() * dattn;

    Matrix dq(d_, x_.cols()), dk(d_, x_.cols()), dv(d_, x_.cols());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dk_));
    for (int b = 0; b < batch_; ++b) {
        for (int h = 0; h < heads_; ++h) {
            const Matrix& a = attn_[static_cast<std::size_t>(b * heads_ + h)];
            const auto doh = d_o.block(h * dk_, b * time_, dk_, time_);
            const auto qh = q_.block(h * dk_, b * time_, dk_, time_);
            const auto kh = k_.block(h * dk_, b * time_, dk_, time_);
            const auto vh = v_.block(h * dk_, b * time_, dk_, time_);

            dv.block(h * dk_, b * time_, dk_, time_).noalias() = doh * a;
            const Matrix da = doh.transpose() * vh;
            const Eigen::VectorXd row_dot = (da.array() * a.array()).rowwise().sum();
            Matrix ds = a.array() * (da.colwise() - row_dot).array();
            ds *= scale;
            dq.block(h * dk_, b * time_, dk_, time_).noalias() = kh * ds.transpose();
            dk.block(h * dk_, b * time_, dk_, time_).noalias() = qh * ds;
        }
    }
    wq.grad.noalias() += dq * x_.transpose();
    wk.grad.noalias() += dk * x_.transpose();
    wv.grad.noalias() += dv * x_.transpose();

    Matrix dx = dh;
    dx.noalias() += wq.value.transpose() * dq;
    dx.noalias() += wk.value.transpose() * dk;
    dx.noalias() += wv.value.transpose() * dv;
    return dx;
}

void TransformerLayer::collect(std::vector<Parameter*>& out) {
    for (Parameter* p : {&wq, &wk, &wv, &wo, &w1, &b1, &w2, &b2}) out.push_back(p);
}

}  // namespace pcg::model
