#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pcg/config.hpp"
#include "pcg/mfcc.hpp"
#include "pcg/model.hpp"

namespace pcg::model {

struct Example {
    std::string segment_id;
    std::string patient_id;
    int label = 0;  // class index, CHD = 1
    features::FeatureMatrix features;
};

using Dataset = std::vector<Example>;

// Inverse-frequency weights W_i = N / (K * n_i). Throws Errc::EmptyClass if
// any of the K classes has no sample.
std::vector<double> class_weights(const std::vector<int>& labels, int classes = 2);

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
};

struct TrainResult {
    std::vector<EpochLog> log;
    int best_epoch = 0;
    double best_val_acc = 0.0;
    std::vector<double> class_weights;
};

class Adam {
public:
    Adam(double lr, double beta1, double beta2, double eps) : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(const std::vector<Parameter*>& params);

private:
    double lr_, beta1_, beta2_, eps_;
    long steps_ = 0;
    std::vector<Matrix> m_, v_;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Mini-batch training with Adam on the class-weighted cross-entropy
// (weights from the training labels). Batch order and dropout masks derive
// from `seed` only. Stops after `patience` epochs without a validation
// accuracy improvement and restores the best-validation parameters.
TrainResult train(Model& model, const Dataset& train_set, const Dataset& val_set, const TrainConfig& cfg,
                  std::uint64_t seed, const EpochCallback& on_epoch = {});

struct Evaluation {
    std::vector<double> prob_chd;
    std::vector<int> predicted;
    double loss = 0.0;
    double accuracy = 0.0;
};

// Eval-mode forward in chunks of `chunk` samples.
Evaluation evaluate(Model& model, const Dataset& data, const std::vector<double>& class_weights, int chunk = 64);

void write_training_log(const std::string& path, const std::vector<EpochLog>& log);

}  // namespace pcg::model
