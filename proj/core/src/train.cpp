#include "pcg/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "pcg/error.hpp"

namespace pcg::model {

std::vector<double> class_weights(const std::vector<int>& labels, int classes) {
    std::vector<double> counts(static_cast<std::size_t>(classes), 0.0);
    for (int y : labels) {
        if (y < 0 || y >= classes) fail(Errc::ShapeMismatch, "label outside class range");
        counts[static_cast<std::size_t>(y)] += 1.0;
    }
    const auto n = static_cast<double>(labels.size());
    std::vector<double> w(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0.0) fail(Errc::EmptyClass, "class " + std::to_string(i) + " has no samples");
        w[i] = n / (classes * counts[i]);
    }
    return w;
}

void Adam::step(const std::vector<Parameter*>& params) {
    if (m_.empty()) {
        for (const Parameter* p : params) {
            m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
            v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
        }
    }
    ++steps_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Parameter& p = *params[i];
        if (!p.trainable) continue;
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseAbs2();
        p.value.array() -= lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
    }
}

Evaluation evaluate(Model& model, const Dataset& data, const std::vector<double>& weights, int chunk) {
    Evaluation ev;
    ev.prob_chd.reserve(data.size());
    ev.predicted.reserve(data.size());
    if (data.empty()) return ev;
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t lo = 0; lo < data.size(); lo += static_cast<std::size_t>(chunk)) {
        const std::size_t hi = std::min(data.size(), lo + static_cast<std::size_t>(chunk));
        std::vector<const features::FeatureMatrix*> items;
        std::vector<int> labels;
        for (std::size_t i = lo; i < hi; ++i) {
            items.push_back(&data[i].features);
            labels.push_back(data[i].label);
        }
        const int batch = static_cast<int>(items.size());
        const Matrix probs = model.forward(make_batch(items), batch, Mode::Eval);
        loss_sum += weighted_cross_entropy(model.logits(), labels, weights, nullptr) * batch;
        for (int b = 0; b < batch; ++b) {
            const double p1 = probs(1, b);
            const int pred = probs(1, b) > probs(0, b) ? 1 : 0;
            ev.prob_chd.push_back(p1);
            ev.predicted.push_back(pred);
            if (pred == labels[static_cast<std::size_t>(b)]) ++correct;
        }
    }
    ev.loss = loss_sum / static_cast<double>(data.size());
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return ev;
}

TrainResult train(Model& model, const Dataset& train_set, const Dataset& val_set, const TrainConfig& cfg,
                  std::uint64_t seed, const EpochCallback& on_epoch) {
    if (train_set.size() < 2) fail(Errc::DegenerateBatch, "need at least 2 training examples");
    std::vector<int> labels;
    for (const auto& e : train_set) labels.push_back(e.label);

    TrainResult result;
    result.class_weights = class_weights(labels, model.config().classes);
    const Rng root(seed);
    const Rng shuffle_root = root.split("shuffle");
    const Rng dropout_root = root.split("dropout");

    Adam adam(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_eps);
    const auto params = model.parameters();
    Model best = model;
    bool have_best = false;
    double best_val_loss = 0.0;

    std::vector<std::size_t> order(train_set.size());
    const auto bs = static_cast<std::size_t>(cfg.batch_size);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng shuffler = shuffle_root.split(static_cast<std::uint64_t>(epoch));
        shuffler.shuffle(std::span<std::size_t>(order));

        double loss_sum = 0.0;
        std::size_t correct = 0;
        std::size_t step = 0;
        for (std::size_t lo = 0; lo < order.size(); lo += bs, ++step) {
            std::size_t hi = std::min(order.size(), lo + bs);
            // a trailing single example joins this batch (batch norm needs 2)
            if (order.size() - hi == 1) hi = order.size();
            std::vector<const features::FeatureMatrix*> items;
            std::vector<int> batch_labels;
            for (std::size_t i = lo; i < hi; ++i) {
                items.push_back(&train_set[order[i]].features);
                batch_labels.push_back(train_set[order[i]].label);
            }
            const int batch = static_cast<int>(items.size());
            Rng dropout = dropout_root.split(static_cast<std::uint64_t>(epoch) * 1000003ULL + step);
            model.zero_grad();
            const double loss =
                model.loss_and_gradients(make_batch(items), batch, batch_labels, result.class_weights, &dropout);
            adam.step(params);

            loss_sum += loss * batch;
            const Matrix& logits = model.logits();
            for (int b = 0; b < batch; ++b) {
                const int pred = logits(1, b) > logits(0, b) ? 1 : 0;
                if (pred == batch_labels[static_cast<std::size_t>(b)]) ++correct;
            }
            if (hi == order.size()) break;
        }

        EpochLog entry;
        entry.epoch = epoch;
        entry.train_loss = loss_sum / static_cast<double>(train_set.size());
        entry.train_acc = static_cast<double>(correct) / static_cast<double>(train_set.size());
        if (!val_set.empty()) {
            const auto ev = evaluate(model, val_set, result.class_weights);
            entry.val_loss = ev.loss;
            entry.val_acc = ev.accuracy;
        } else {
            entry.val_loss = entry.train_loss;
            entry.val_acc = entry.train_acc;
        }
        result.log.push_back(entry);
        if (on_epoch) on_epoch(entry);

        const bool better = !have_best || entry.val_acc > result.best_val_acc ||
                            (entry.val_acc == result.best_val_acc && entry.val_loss < best_val_loss);
        if (better) {
            best = model;
            have_best = true;
            result.best_epoch = epoch;
            result.best_val_acc = entry.val_acc;
            best_val_loss = entry.val_loss;
        } else if (epoch - result.best_epoch >= cfg.patience) {
            break;
        }
    }
    model = best;
    return result;
}

void write_training_log(const std::string& path, const std::vector<EpochLog>& log) {
    std::ofstream out(path);
    if (!out) fail(Errc::Io, "cannot write " + path);
    out.precision(10);
    out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (const auto& e : log) {
        out << e.epoch << ',' << e.train_loss << ',' << e.train_acc << ',' << e.val_loss << ',' << e.val_acc << "\n";
    }
}

}  // namespace pcg::model
