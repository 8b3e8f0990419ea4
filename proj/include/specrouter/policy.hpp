#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specrouter/dataset.hpp"

namespace specrouter {

// L2-normalized (or zero, for an empty query) feature vector.
struct FeatureVector {
    std::vector<double> values;
};

// Hashed character n-gram (n in {1,2,3}) term frequencies, FNV-1a 64-bit,
// index = hash mod dim, then L2 normalization. A stand-in for the sentence
// embedding a neural target would provide; anything producing a fixed-dim
// vector can be slotted in where this is called.
FeatureVector featurize(std::string_view query_text, int dim);

std::vector<FeatureVector> featurize_batch(std::span<const std::string> texts, int dim);
std::vector<FeatureVector> featurize_batch_serial(std::span<const std::string> texts, int dim);

// Three linear layers: two tanh hidden layers of width H, then a softmax
// projection onto the arms. Doubles throughout so training is reproducible
// bit-for-bit.
struct PolicyParams {
    int input_dim = 0;   // D
    int hidden_dim = 0;  // H
    int num_arms = 0;    // k
    std::vector<double> w1, b1;  // D x H, H
    std::vector<double> w2, b2;  // H x H, H
    std::vector<double> w3, b3;  // H x k, k

    static PolicyParams zeros(int input_dim, int hidden_dim, int num_arms);
    bool shape_matches(const PolicyParams& other) const;
};

std::vector<double> policy_forward(const PolicyParams& params, const FeatureVector& x);

struct TrainSample {
    FeatureVector x;
    int arm_index = 0;
    double reward = 0.0;
};

// -(1/B) sum_b r_b * log pi(a_b | x_b)
double reinforce_loss(const PolicyParams& params, std::span<const TrainSample> batch);

// Exact analytic gradient of reinforce_loss. Accumulation order is pinned
// (fixed 16-sample chunks, chunk partials summed in index order) so the
// OpenMP kernel and the serial reference agree bit-for-bit on any thread
// count.
PolicyParams reinforce_grad(const PolicyParams& params, std::span<const TrainSample> batch);
PolicyParams reinforce_grad_serial(const PolicyParams& params, std::span<const TrainSample> batch);

enum class OptimizerKind { adamw, sgd };

struct TrainConfig {
    int epochs = 3;
    int batch_size = 64;
    double learning_rate = 1e-3;
    double weight_decay = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.99;
    double epsilon = 1e-8;
    uint64_t seed = 0;
    // sgd mode (plain descent, no decay) exists for scale-invariance checks
    OptimizerKind optimizer = OptimizerKind::adamw;
    // optional batch-mean baseline; off by default, raw rewards are the signal
    bool mean_baseline = false;

    void validate() const;
};

// Adaptive-moment optimizer with decoupled weight decay: weights are scaled
// by (1 - lr*wd) before the moment update is applied.
class AdamW {
  public:
    AdamW(const PolicyParams& like, const TrainConfig& cfg);
    void step(PolicyParams& params, const PolicyParams& grad);

  private:
    TrainConfig cfg_;
    PolicyParams m_, v_;
    int64_t t_ = 0;
};

struct TrainReport {
    // full-dataset loss before training, then after each epoch
    std::vector<double> epoch_loss;
};

// Symmetric uniform fan-in init, shuffled minibatches, one optimizer step per
// batch. Every record in the dataset is one (x, a, r) tuple. Deterministic
// given cfg.seed.
PolicyParams train_policy(const RewardDataset& dataset, const TrainConfig& cfg,
                          int feature_dim, int hidden_dim, TrainReport* report = nullptr);

// Full-precision text serialization; round-trips bit-exactly.
void save_policy(const std::filesystem::path& path, const PolicyParams& params);
PolicyParams load_policy(const std::filesystem::path& path);

}  // namespace specrouter
