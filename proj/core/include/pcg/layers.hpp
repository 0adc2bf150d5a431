#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcg/rng.hpp"

namespace pcg::model {

using Matrix = Eigen::MatrixXd;

// Batched activations are stored channel-major: C rows, batch * time
// columns, with sample b occupying columns [b * time, (b + 1) * time).

enum class Mode { Train, Eval };

struct Parameter {
    std::string name;
    std::vector<int> shape;  // logical shape; row-major flattening of `value`
    Matrix value;
    Matrix grad;
    bool trainable = true;

    Parameter() = default;
    Parameter(std::string name, std::vector<int> shape, int rows, int cols, bool trainable = true);
};

// Kernel-k cross-correlation with zero padding (k - 1) / 2 on each side, so
// the time length is preserved. weight is [out, in, k], stored as an
// out x (in * k) matrix with column c * k + j.
class Conv1d {
public:
    Conv1d() = default;
    Conv1d(const std::string& name, int in_channels, int out_channels, int kernel);

    Matrix forward(const Matrix& x, int batch);
    Matrix backward(const Matrix& dy);
    void collect(std::vector<Parameter*>& out);
    void init(Rng& rng);

    Parameter weight;
    Parameter bias;

private:
    int in_ = 0, out_ = 0, kernel_ = 3;
    int batch_ = 0, time_ = 0;
    Matrix col_;
};

// Per-channel normalization over batch x time (train) or running statistics
// (eval). Running variance is updated with the unbiased batch variance.
class BatchNorm1d {
public:
    BatchNorm1d() = default;
    BatchNorm1d(const std::string& name, int channels, double eps = 1e-5, double momentum = 0.1);

    // Throws Errc::DegenerateBatch in train mode with fewer than 2 samples.
    Matrix forward(const Matrix& x, int batch, Mode mode);
    Matrix backward(const Matrix& dy);
    void collect(std::vector<Parameter*>& out);

    Parameter gamma;
    Parameter beta;
    Parameter running_mean;
    Parameter running_var;

    // Tests freeze running statistics while probing a train-mode forward.
    bool update_running_stats = true;

private:
    double eps_ = 1e-5, momentum_ = 0.1;
    Mode mode_ = Mode::Eval;
    Matrix xhat_;
    Eigen::VectorXd inv_std_;
};

class Relu {
public:
    Matrix forward(const Matrix& x);
    Matrix backward(const Matrix& dy) const;

private:
    Matrix mask_;
};

// Inverted dropout: kept units are scaled by 1 / (1 - rate) at train time so
// eval is a pass-through.
class Dropout {
public:
    explicit Dropout(double rate = 0.0) : rate_(rate) {}

    Matrix forward(const Matrix& x, Mode mode, Rng* rng);
    Matrix backward(const Matrix& dy) const;
    double rate() const { return rate_; }

private:
    double rate_;
    bool active_ = false;
    Matrix mask_;
};

// Pool size 2, stride 2 over time; T -> floor(T / 2).
class MaxPool1d {
public:
    Matrix forward(const Matrix& x, int batch);
    Matrix backward(const Matrix& dy) const;

private:
    int batch_ = 0, time_in_ = 0, time_out_ = 0;
    Eigen::MatrixXi argmax_;
};

class GlobalAvgPool {
public:
    Matrix forward(const Matrix& x, int batch);  // -> C x batch
    Matrix backward(const Matrix& dy) const;

private:
    int batch_ = 0, time_ = 0;
};

// y = W x + b with W [out, in].
class Dense {
public:
    Dense() = default;
    Dense(const std::string& name, int in, int out);

    Matrix forward(const Matrix& x);
    Matrix backward(const Matrix& dy);
    void collect(std::vector<Parameter*>& out);
    void init(Rng& rng, double gain = 2.0);

    Parameter weight;
    Parameter bias;

private:
    Matrix x_;
};

// PE[pos, 2i] = sin(pos / omega^(2i / d)), PE[pos, 2i + 1] = cos(same angle).
// Returned as time x d_model.
Matrix positional_encoding(int time, int d_model, double omega);

// Adds the (transposed) encoding to every sample of a channel-major batch.
Matrix add_positional_encoding(const Matrix& x, int batch, double omega);

// Column-wise softmax.
Matrix softmax_columns(const Matrix& logits);

// Mean over the batch of w[y] * -log p_y. Writes d(loss)/d(logits) when
// `dlogits` is non-null. logits is classes x batch.
double weighted_cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                              const std::vector<double>& class_weights, Matrix* dlogits);

}  // namespace pcg::model
