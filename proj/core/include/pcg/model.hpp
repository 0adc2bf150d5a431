#pragma once

#include <span>
#include <string>
#include <vector>

#include "pcg/config.hpp"
#include "pcg/layers.hpp"
#include "pcg/mfcc.hpp"
#include "pcg/transformer.hpp"

namespace pcg::model {

// conv(k=3) -> positional encoding -> transformer -> BN, plus a residual
// path conv(k=1) -> BN from the block input, summed before ReLU. Pooling
// blocks (Block-1) then apply dropout and max-pool; Block-2 stops at ReLU.
class ResidualBlock {
public:
    ResidualBlock() = default;
    ResidualBlock(const std::string& name, const ModelConfig& cfg, bool pooling);

    Matrix forward(const Matrix& x, int batch, Mode mode, Rng* rng, Matrix* transformer_out = nullptr);
    Matrix backward(const Matrix& dy);
    void collect(std::vector<Parameter*>& out);
    void init(Rng& rng);

    bool pooling() const { return pooling_; }

    Conv1d conv;
    TransformerLayer transformer;
    BatchNorm1d bn;
    Conv1d res_conv;
    BatchNorm1d res_bn;

private:
    bool pooling_ = true;
    double omega_ = 10000.0;
    Relu relu_;
    Dropout drop_;
    MaxPool1d pool_;
};

// Per-input activations for external embedding / plotting: the output of
// every transformer layer (time x d_model) and the global-average-pool vector.
struct Activations {
    std::vector<Matrix> transformer;
    Eigen::VectorXd pooled;
};

class Model {
public:
    explicit Model(const ModelConfig& cfg = {});

    Model(const Model& other);
    Model& operator=(const Model& other);
    Model(Model&&) noexcept = default;
    Model& operator=(Model&&) noexcept = default;

    // Deterministic initialization from the stream.
    void init(Rng rng);

    // Class probabilities (classes x batch), columns sum to 1. `rng` drives
    // dropout masks and is required in train mode. Throws
    // Errc::ShapeMismatch for inputs that are not in_channels x T or whose T
    // cannot survive the pooling blocks.
    Matrix forward(const Matrix& input, int batch, Mode mode, Rng* rng = nullptr);

    // Logits of the last forward (classes x batch).
    const Matrix& logits() const { return logits_; }

    // Back-propagates d(loss)/d(logits) from the last forward, accumulating
    // into every trainable parameter's grad.
    void backward(const Matrix& dlogits);

    // Forward + weighted cross-entropy + backward. Returns the loss.
    double loss_and_gradients(const Matrix& input, int batch, const std::vector<int>& labels,
                              const std::vector<double>& class_weights, Rng* rng);

    void zero_grad();
    std::vector<Parameter*> parameters();
    std::vector<const Parameter*> parameters() const;
    Parameter* find(const std::string& name);

    // Eval-mode activations for each sample of the batch.
    std::vector<Activations> activations(const Matrix& input, int batch);

    const ModelConfig& config() const { return cfg_; }
    std::vector<ResidualBlock>& blocks() { return blocks_; }

    // Time length after the pooling blocks for an input of length T.
    int output_time(int time) const;

    // FNV-1a over the bit patterns of all parameter values.
    std::uint64_t checksum() const;

    Conv1d enc_conv;
    BatchNorm1d enc_bn;
    Dense fc1;
    Dense fc2;

private:
    Matrix forward_impl(const Matrix& input, int batch, Mode mode, Rng* rng, std::vector<Matrix>* trace,
                        Matrix* pooled);

    ModelConfig cfg_;
    Relu enc_relu_;
    std::vector<ResidualBlock> blocks_;
    GlobalAvgPool gap_;
    Dropout dec_drop_;
    Relu fc_relu_;
    Matrix logits_;
};

// Stacks feature matrices (all in_channels x T) into one channel-major batch.
Matrix make_batch(std::span<const features::FeatureMatrix* const> items);

}  // namespace pcg::model
