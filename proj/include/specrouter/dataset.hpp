#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "specrouter/corpus.hpp"
#include "specrouter/ngram.hpp"
#include "specrouter/scoring.hpp"

namespace specrouter {

// One offline training tuple: (query, arm, alignment, cost, reward).
struct RewardRecord {
    std::string query_id;
    std::string query_text;
    std::string arm_id;
    int arm_index = 0;
    double alignment = 0.0;
    double cost = 0.0;
    double alpha = 1.0;
    double reward = 0.0;
    std::map<std::string, std::string> meta;  // analysis only (e.g. true_domain)
};

enum class ArmKind { drafter, autoregressive };

struct ArmSpec {
    std::string arm_id;
    ArmKind kind = ArmKind::drafter;
    std::shared_ptr<const NGramModel> model;  // null for the autoregressive arm
    double param_count = 1.0;
};

struct RolloutConfig {
    int max_len = 48;
    uint64_t seed = 0;
};

struct RewardDataset {
    int num_arms = 0;
    std::vector<RewardRecord> records;
};

// Cheapness bonus per arm; the target's declared size always participates in
// the max, so a drafter's cost reflects its gap to the target even when no
// autoregressive arm is present.
std::vector<double> arm_costs(const std::vector<ArmSpec>& arms, double target_param_count);

// Greedy rollout of the target and of every drafter per query, ROUGE-L
// alignment against the target's greedy output, reward = alpha*f + (1-alpha)*c.
// The autoregressive arm (at most one) is scored with a temperature-1 sample
// from the target instead, so matching is not trivially perfect. Emits
// exactly arms.size() records per query in query-major order. Deterministic
// given cfg.seed; each query derives an independent stream from its id.
RewardDataset collect(const std::vector<LabeledQuery>& queries, const NGramModel& target,
                      const std::vector<ArmSpec>& arms, double alpha,
                      const RolloutConfig& cfg);

// Reference loop with identical output, kept for kernel testing.
RewardDataset collect_serial(const std::vector<LabeledQuery>& queries,
                             const NGramModel& target, const std::vector<ArmSpec>& arms,
                             double alpha, const RolloutConfig& cfg);

// Tab-separated line format with a versioned header; reals round-trip
// bit-exactly.
void save_dataset(const std::filesystem::path& path, const RewardDataset& dataset);
RewardDataset load_dataset(const std::filesystem::path& path);

}  // namespace specrouter
