#pragma once

#include <vector>

#include "specrouter/vocab.hpp"

namespace specrouter {

struct RewardComponents {
    double alignment = 0.0;  // in [0,1]
    double cost = 0.0;       // in [0,1]
    double alpha = 1.0;      // in [0,1]
    double reward = 0.0;     // alpha*alignment + (1-alpha)*cost, exactly
};

// LCS-based F1 over token ids: P = LCS/|candidate|, R = LCS/|reference|,
// F = 2PR/(P+R). 0 when either side is empty or the LCS is empty.
double rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

// c_i = 1 - exp(p_i - p_max): a cheapness bonus that is 0 for the largest
// model and grows toward 1 as models shrink. Sizes are normalized units;
// see fit_ngram's declared param_count.
std::vector<double> size_costs(const std::vector<double>& param_counts);

double compose_reward(double alignment, double cost, double alpha);

RewardComponents make_reward(double alignment, double cost, double alpha);

}  // namespace specrouter
