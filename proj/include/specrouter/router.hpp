#pragma once

#include <string>
#include <vector>

#include "specrouter/policy.hpp"
#include "specrouter/specdec.hpp"

namespace specrouter {

enum class RouteMode { greedy, dynamic };

RouteMode route_mode_from_string(const std::string& name);
std::string route_mode_to_string(RouteMode mode);

struct RoutedResult {
    std::string arm_id;
    int arm_index = 0;
    GenerationOutput output;
    DecodeStats stats;
    std::vector<double> policy_probs;
};

// Greedy: argmax of the policy (lowest index on ties). Dynamic: one
// categorical draw from the policy output. rng may be null in greedy mode.
std::pair<int, std::vector<double>> select_arm(const PolicyParams& params,
                                               const std::string& query_text,
                                               RouteMode mode, RandomSource* rng);

// Featurize, run the policy, decode with the chosen arm. Drafter arms use
// greedy assisted decoding at T=0 and speculative decoding otherwise; the
// autoregressive arm generates directly from the target (one target call per
// emitted token, nothing drafted). Greedy routing consumes no randomness, so
// the decode stream is identical to running the chosen arm directly.
RoutedResult route_and_decode(const PolicyParams& params, const std::vector<ArmSpec>& arms,
                              const NGramModel& target, const std::string& query_text,
                              const DecodeConfig& cfg, RouteMode mode, RandomSource* rng);

// Per-query time as reported everywhere: decode plus policy inference,
// featurization excluded (a served system folds that pass into the first
// verification call's cache warm-up).
int64_t reported_wall_ns(const DecodeStats& stats);

}  // namespace specrouter
