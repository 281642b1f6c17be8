#pragma once

#include <map>
#include <memory>
#include <vector>

#include "amgtune/dataset.hpp"
#include "amgtune/nn.hpp"

namespace amgtune {

struct TrainConfig {
    double learning_rate = 1e-3;
    double weight_decay = 1e-4;   // decoupled
    double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;
    int minibatch = 32;
    int max_epochs = 200;
    int patience = 10;            // epochs without validation improvement
    double lr_factor = 0.5;       // halving schedule
    double min_learning_rate = 1e-6;
    double target_train_mse = 0.0;  // > 0: stop early once the train MSE drops below
    std::uint64_t seed = 0;

    void validate() const {
        if (learning_rate < 0 || weight_decay < 0 || minibatch < 1 || max_epochs < 0 ||
            patience < 0 || min_learning_rate <= 0)
            throw std::invalid_argument("train config: values must be positive");
        if (!(lr_factor > 0.0 && lr_factor < 1.0))
            throw std::invalid_argument("train config: lr factor must lie in (0, 1)");
    }
};

/// One supervised pair; the image is shared between the samples of a problem.
struct TrainSample {
    std::shared_ptr<const PooledTensor> image;  // normalized
    double log_n = 0.0;
    double p = 0.0;
    double theta = 0.0;
    std::array<double, 4> b{1, 0, 0, 0};
    double target = 0.0;
    std::string split = "train";
};

struct EpochStats {
    int epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
    double learning_rate = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
    double best_val_mse = std::numeric_limits<double>::infinity();
    int best_epoch = -1;
};

/// Pairs dataset records with their problems' normalized pooled images.
/// Missing split tags default to the training split.
inline std::vector<TrainSample> build_training_set(
    const std::vector<CostSample>& samples,
    const std::map<std::string, std::shared_ptr<const PooledTensor>>& images) {
    std::vector<TrainSample> out;
    out.reserve(samples.size());
    for (const CostSample& s : samples) {
        auto it = images.find(s.problem_id);
        if (it == images.end())
            throw std::invalid_argument("no pooled image for problem " + s.problem_id);
        TrainSample t;
        t.image = it->second;
        t.log_n = std::log(static_cast<double>(s.n));
        t.p = static_cast<double>(s.p);
        t.theta = s.theta;
        t.b = smoother_one_hot(s.smoother);
        t.target = s.cost;
        t.split = s.split.empty() ? "train" : s.split;
        out.push_back(std::move(t));
    }
    return out;
}

/// Mean squared error of the model over a sample range (no gradient).
inline double evaluate_mse(const SurrogateModel& model, const std::vector<const TrainSample*>& set) {
    if (set.empty()) return 0.0;
    double s = 0.0;
    for (const TrainSample* t : set) {
        double out = forward(model, *t->image, t->log_n, t->p, t->theta, t->b);
        s += (out - t->target) * (out - t->target);
    }
    return s / static_cast<double>(set.size());
}

/// Gradients of the batch-mean squared error; returns the batch MSE.
inline double batch_backward(const SurrogateModel& model,
                             const std::vector<const TrainSample*>& batch, Gradients& grads) {
    grads.clear();
    double mse = 0.0;
    ForwardContext ctx;
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (const TrainSample* t : batch) {
        double out = forward(model, *t->image, t->log_n, t->p, t->theta, t->b, &ctx);
        double err = out - t->target;
        mse += err * err;
        backward(model, ctx, 2.0 * err * inv, grads);
    }
    return mse * inv;
}

/// Adam with decoupled weight decay.
class AdamW {
public:
    AdamW(const SurrogateModel& model, const TrainConfig& cfg) : cfg_(cfg) {
        m_.resize(model.params.size());
        v_.resize(model.params.size());
        for (std::size_t i = 0; i < model.params.size(); ++i) {
            m_[i].assign(model.params[i].size(), 0.0);
            v_[i].assign(model.params[i].size(), 0.0);
        }
    }

    void step(SurrogateModel& model, const Gradients& grads, double lr) {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
        const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
        for (std::size_t a = 0; a < model.params.size(); ++a) {
            std::vector<double>& w = model.params[a].value;
            const std::vector<double>& g = grads.g[a];
            for (std::size_t i = 0; i < w.size(); ++i) {
                m_[a][i] = cfg_.beta1 * m_[a][i] + (1.0 - cfg_.beta1) * g[i];
                v_[a][i] = cfg_.beta2 * v_[a][i] + (1.0 - cfg_.beta2) * g[i] * g[i];
                double mhat = m_[a][i] / bc1;
                double vhat = v_[a][i] / bc2;
                w[i] -= lr * (mhat / (std::sqrt(vhat) + cfg_.epsilon) + cfg_.weight_decay * w[i]);
            }
        }
    }

private:
    TrainConfig cfg_;
    std::vector<std::vector<double>> m_, v_;
    long t_ = 0;
};

/// Minibatch training with the reduce-on-plateau halving schedule. The best
/// validation parameters are kept; when the dataset has no validation split
/// the training loss doubles as the schedule signal. Stops at max_epochs or
/// once the learning rate falls below its floor.
inline TrainHistory train(SurrogateModel& model, const std::vector<TrainSample>& dataset,
                          const TrainConfig& cfg) {
    cfg.validate();
    std::vector<const TrainSample*> train_set, val_set;
    for (const TrainSample& t : dataset) {
        if (t.split == "train") train_set.push_back(&t);
        else if (t.split == "val") val_set.push_back(&t);
    }
    if (train_set.empty()) throw std::invalid_argument("train: empty training split");

    TrainHistory history;
    AdamW opt(model, cfg);
    Gradients grads(model);
    Rng shuffle_rng(derive_seed(cfg.seed, "epoch-shuffle"));
    double lr = cfg.learning_rate;
    int stall = 0;
    std::vector<ParamArray> best_params = model.params;

    std::vector<const TrainSample*> order = train_set;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        shuffle(order, shuffle_rng);
        double train_mse = 0.0;
        std::size_t nbatches = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.minibatch) {
            std::size_t stop = std::min(order.size(), start + cfg.minibatch);
            std::vector<const TrainSample*> batch(order.begin() + start, order.begin() + stop);
            train_mse += batch_backward(model, batch, grads);
            opt.step(model, grads, lr);
            ++nbatches;
        }
        train_mse /= static_cast<double>(nbatches);

        double val_mse = val_set.empty() ? evaluate_mse(model, train_set)
                                         : evaluate_mse(model, val_set);
        history.epochs.push_back({epoch, train_mse, val_mse, lr});

        if (val_mse < history.best_val_mse) {
            history.best_val_mse = val_mse;
            history.best_epoch = epoch;
            best_params = model.params;
            stall = 0;
        } else if (++stall > cfg.patience) {
            lr *= cfg.lr_factor;
            stall = 0;
            if (lr < cfg.min_learning_rate) break;
        }
        if (cfg.target_train_mse > 0.0 && train_mse < cfg.target_train_mse) break;
    }

    model.params = std::move(best_params);
    model.trained_epochs = static_cast<int>(history.epochs.size());
    model.best_val_mse = history.best_val_mse;
    return history;
}

} // namespace amgtune
