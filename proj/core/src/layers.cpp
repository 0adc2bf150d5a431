#include "pcg/layers.hpp"

#include <algorithm>
#include <cmath>

#include "pcg/error.hpp"

namespace pcg::model {

Parameter::Parameter(std::string name_, std::vector<int> shape_, int rows, int cols, bool trainable_)
    : name(std::move(name_)),
      shape(std::move(shape_)),
      value(Matrix::Zero(rows, cols)),
      grad(trainable_ ? Matrix::Zero(rows, cols) : Matrix()),
      trainable(trainable_) {}

namespace {

void fill_normal(Matrix& m, Rng& rng, double stddev) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = stddev * rng.normal();
    }
}

void check_batch(const Matrix& x, int batch, const char* who) {
    if (batch <= 0 || x.cols() % batch != 0) {
        fail(Errc::ShapeMismatch, std::string(who) + ": column count is not a multiple of the batch size");
    }
}

}  // namespace

// ---------------------------------------------------------------- Conv1d

Conv1d::Conv1d(const std::string& name, int in_channels, int out_channels, int kernel)
    : weight(name + ".weight", {out_channels, in_channels, kernel}, out_channels, in_channels * kernel),
      bias(name + ".bias", {out_channels}, out_channels, 1),
      in_(in_channels),
      out_(out_channels),
      kernel_(kernel) {
    if (kernel % 2 != 1) fail(Errc::InvalidSpec, "conv kernel size must be odd");
}

void Conv1d::init(Rng& rng) {
    fill_normal(weight.value, rng, std::sqrt(2.0 / (in_ * kernel_)));
    bias.value.setZero();
}

Matrix Conv1d::forward(const Matrix& x, int batch) {
    check_batch(x, batch, "conv1d");
    if (x.rows() != in_) {
        fail(Errc::ShapeMismatch, "conv1d expects " + std::to_string(in_) + " input channels, got " +
                                      std::to_string(x.rows()));
    }
    batch_ = batch;
    time_ = static_cast<int>(x.cols()) / batch;
    const int pad = (kernel_ - 1) / 2;

    col_.setZero(static_cast<Eigen::Index>(in_) * kernel_, x.cols());
    for (int b = 0; b < batch_; ++b) {
        const int base = b * time_;
        for (int j = 0; j < kernel_; ++j) {
            const int shift = j - pad;
            const int t_lo = std::max(0, -shift);
            const int t_hi = std::min(time_, time_ - shift);
            if (t_hi <= t_lo) continue;
            for (int c = 0; c < in_; ++c) {
                col_.row(c * kernel_ + j).segment(base + t_lo, t_hi - t_lo) =
                    x.row(c).segment(base + t_lo + shift, t_hi - t_lo);
            }
        }
    }
    Matrix y = weight.value * col_;
    y.colwise() += bias.value.col(0);
    return y;
}

Matrix Conv1d::backward(const Matrix& dy) {
    weight.grad.noalias() += dy * col_.transpose();
    bias.grad.col(0) += dy.rowwise().sum();
    const Matrix dcol = weight.value.transpose() * dy;

    const int pad = (kernel_ - 1) / 2;
    Matrix dx = Matrix::Zero(in_, dy.cols());
    for (int b = 0; b < batch_; ++b) {
        const int base = b * time_;
        for (int j = 0; j < kernel_; ++j) {
            const int shift = j - pad;
            const int t_lo = std::max(0, -shift);
            const int t_hi = std::min(time_, time_ - shift);
            if (t_hi <= t_lo) continue;
            for (int c = 0; c < in_; ++c) {
                dx.row(c).segment(base + t_lo + shift, t_hi - t_lo) +=
                    dcol.row(c * kernel_ + j).segment(base + t_lo, t_hi - t_lo);
            }
        }
    }
    return dx;
}

void Conv1d::collect(std::vector<Parameter*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

// ----------------------------------------------------------- BatchNorm1d

BatchNorm1d::BatchNorm1d(const std::string& name, int channels, double eps, double momentum)
    : gamma(name + ".gamma", {channels}, channels, 1),
      beta(name + ".beta", {channels}, channels, 1),
      running_mean(name + ".running_mean", {channels}, channels, 1, false),
      running_var(name + ".running_var", {channels}, channels, 1, false),
      eps_(eps),
      momentum_(momentum) {
    gamma.value.setOnes();
    running_var.value.setOnes();
}

Matrix BatchNorm1d::forward(const Matrix& x, int batch, Mode mode) {
    check_batch(x, batch, "batch_norm");
    if (x.rows() != gamma.value.rows()) fail(Errc::ShapeMismatch, "batch_norm channel count mismatch");
    mode_ = mode;
    const auto n = static_cast<double>(x.cols());

    if (mode == Mode::Eval) {
        inv_std_ = (running_var.value.col(0).array() + eps_).rsqrt().matrix();
        xhat_ = (x.colwise() - running_mean.value.col(0));
        xhat_.array().colwise() *= inv_std_.array();
    } else {
        if (batch < 2) fail(Errc::DegenerateBatch, "batch normalization needs >= 2 samples in train mode");
        const Eigen::VectorXd mean = x.rowwise().mean();
        xhat_ = x.colwise() - mean;
        const Eigen::VectorXd var = xhat_.array().square().rowwise().sum() / n;
        inv_std_ = (var.array() + eps_).rsqrt().matrix();
        xhat_.array().colwise() *= inv_std_.array();
        if (update_running_stats) {
            running_mean.value.col(0) = (1.0 - momentum_) * running_mean.value.col(0) + momentum_ * mean;
            running_var.value.col(0) = (1.0 - momentum_) * running_var.value.col(0) + momentum_ * var * (n / (n - 1.0));
        }
    }
    Matrix y = xhat_;
    y.array().colwise() *= gamma.value.col(0).array();
    y.colwise() += beta.value.col(0);
    return y;
}

Matrix BatchNorm1d::backward(const Matrix& dy) {
    gamma.grad.col(0) += (dy.array() * xhat_.array()).rowwise().sum().matrix();
    beta.grad.col(0) += dy.rowwise().sum();

    Matrix dxhat = dy;
    dxhat.array().colwise() *= gamma.value.col(0).array();
    if (mode_ == Mode::Eval) {
        dxhat.array().colwise() *= inv_std_.array();
        return dxhat;
    }
    const auto n = static_cast<double>(dy.cols());
    const Eigen::VectorXd sum_d = dxhat.rowwise().sum();
    const Eigen::VectorXd sum_dx = (dxhat.array() * xhat_.array()).rowwise().sum();
    Matrix dx = n * dxhat;
    dx.colwise() -= sum_d;
    dx.array() -= xhat_.array().colwise() * sum_dx.array();
    dx.array().colwise() *= (inv_std_.array() / n);
    return dx;
}

void BatchNorm1d::collect(std::vector<Parameter*>& out) {
    out.push_back(&gamma);
    out.push_back(&beta);
    out.push_back(&running_mean);
    out.push_back(&running_var);
}

// --------------------------------------------------------- elementwise

Matrix Relu::forward(const Matrix& x) {
    mask_ = (x.array() > 0.0).cast<double>().matrix();
    return x.cwiseMax(0.0);
}

Matrix Relu::backward(const Matrix& dy) const { return dy.cwiseProduct(mask_); }

Matrix Dropout::forward(const Matrix& x, Mode mode, Rng* rng) {
    active_ = mode == Mode::Train && rate_ > 0.0;
    if (!active_) return x;
    if (rng == nullptr) fail(Errc::InvalidSpec, "train-mode dropout needs a random stream");
    const double keep = 1.0 - rate_;
    mask_.resize(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) mask_(r, c) = rng->uniform() < keep ? 1.0 / keep : 0.0;
    }
    return x.cwiseProduct(mask_);
}

Matrix Dropout::backward(const Matrix& dy) const { return active_ ? dy.cwiseProduct(mask_) : dy; }

// ------------------------------------------------------------- pooling

Matrix MaxPool1d::forward(const Matrix& x, int batch) {
    check_batch(x, batch, "max_pool");
    batch_ = batch;
    time_in_ = static_cast<int>(x.cols()) / batch;
    time_out_ = time_in_ / 2;
    if (time_out_ == 0) fail(Errc::ShapeMismatch, "max_pool needs at least 2 time steps");
    Matrix y(x.rows(), static_cast<Eigen::Index>(batch_) * time_out_);
    argmax_.resize(x.rows(), y.cols());
    for (int b = 0; b < batch_; ++b) {
        for (int t = 0; t < time_out_; ++t) {
            const int src = b * time_in_ + 2 * t;
            const int dst = b * time_out_ + t;
            for (Eigen::Index c = 0; c < x.rows(); ++c) {
                const bool second = x(c, src + 1) > x(c, src);
                y(c, dst) = second ? x(c, src + 1) : x(c, src);
                argmax_(c, dst) = second ? src + 1 : src;
            }
        }
    }
    return y;
}

Matrix MaxPool1d::backward(const Matrix& dy) const {
    Matrix dx = Matrix::Zero(dy.rows(), static_cast<Eigen::Index>(batch_) * time_in_);
    for (Eigen::Index j = 0; j < dy.cols(); ++j) {
        for (Eigen::Index c = 0; c < dy.rows(); ++c) dx(c, argmax_(c, j)) += dy(c, j);
    }
    return dx;
}

Matrix GlobalAvgPool::forward(const Matrix& x, int batch) {
    check_batch(x, batch, "global_avg_pool");
    batch_ = batch;
    time_ = static_cast<int>(x.cols()) / batch;
    Matrix y(x.rows(), batch);
    for (int b = 0; b < batch; ++b) y.col(b) = x.middleCols(b * time_, time_).rowwise().mean();
    return y;
}

Matrix GlobalAvgPool::backward(const Matrix& dy) const {
    Matrix dx(dy.rows(), static_cast<Eigen::Index>(batch_) * time_);
    for (int b = 0; b < batch_; ++b) {
        dx.middleCols(b * time_, time_) = (dy.col(b) / time_).replicate(1, time_);
    }
    return dx;
}

// --------------------------------------------------------------- Dense

Dense::Dense(const std::string& name, int in, int out)
    : weight(name + ".weight", {out, in}, out, in), bias(name + ".bias", {out}, out, 1) {}

void Dense::init(Rng& rng, double gain) {
    fill_normal(weight.value, rng, std::sqrt(gain / static_cast<double>(weight.value.cols())));
    bias.value.setZero();
}

Matrix Dense::forward(const Matrix& x) {
    if (x.rows() != weight.value.cols()) fail(Errc::ShapeMismatch, "dense input width mismatch");
    x_ = x;
    Matrix y = weight.value * x;
    y.colwise() += bias.value.col(0);
    return y;
}

Matrix Dense::backward(const Matrix& dy) {
    weight.grad.noalias() += dy * x_.transpose();
    bias.grad.col(0) += dy.rowwise().sum();
    return weight.value.transpose() * dy;
}

void Dense::collect(std::vector<Parameter*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
}

// -------------------------------------------------- positional encoding

Matrix positional_encoding(int time, int d_model, double omega) {
    if (d_model % 2 != 0) fail(Errc::InvalidSpec, "positional encoding needs an even d_model");
    Matrix pe(time, d_model);
    for (int i = 0; i < d_model / 2; ++i) {
        const double div = std::pow(omega, 2.0 * i / d_model);
        for (int pos = 0; pos < time; ++pos) {
            const double angle = pos / div;
            pe(pos, 2 * i) = std::sin(angle);
            pe(pos, 2 * i + 1) = std::cos(angle);
        }
    }
    return pe;
}

Matrix add_positional_encoding(const Matrix& x, int batch, double omega) {
    check_batch(x, batch, "positional_encoding");
    const int time = static_cast<int>(x.cols()) / batch;
    const Matrix pe_t = positional_encoding(time, static_cast<int>(x.rows()), omega).transpose();
    Matrix y = x;
    for (int b = 0; b < batch; ++b) y.middleCols(b * time, time) += pe_t;
    return y;
}

// ---------------------------------------------------------------- loss

Matrix softmax_columns(const Matrix& logits) {
    Matrix p = logits.rowwise() - logits.colwise().maxCoeff();
    p = p.array().exp().matrix();
    p.array().rowwise() /= p.colwise().sum().array();
    return p;
}

double weighted_cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                              const std::vector<double>& class_weights, Matrix* dlogits) {
    const auto batch = logits.cols();
    if (static_cast<Eigen::Index>(labels.size()) != batch) fail(Errc::ShapeMismatch, "label count != batch size");
    if (static_cast<Eigen::Index>(class_weights.size()) != logits.rows()) {
        fail(Errc::ShapeMismatch, "class weight count != class count");
    }
    const Matrix shifted = logits.rowwise() - logits.colwise().maxCoeff();
    const Eigen::RowVectorXd log_z = shifted.array().exp().colwise().sum().log().matrix();
    double loss = 0.0;
    if (dlogits) *dlogits = softmax_columns(logits);
    for (Eigen::Index b = 0; b < batch; ++b) {
        const int y = labels[static_cast<std::size_t>(b)];
        const double w = class_weights[static_cast<std::size_t>(y)];
        loss += w * (log_z(b) - shifted(y, b));
        if (dlogits) {
            dlogits->col(b) *= w;
            (*dlogits)(y, b) -= w;
        }
    }
    if (dlogits) *dlogits /= static_cast<double>(batch);
    return loss / static_cast<double>(batch);
}

}  // namespace pcg::model
