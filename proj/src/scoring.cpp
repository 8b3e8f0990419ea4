#include "specrouter/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specrouter {

namespace {

// two-row LCS length
size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

double rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
    if (candidate.empty() || reference.empty()) return 0.0;
    const size_t lcs = lcs_length(candidate, reference);
    if (lcs == 0) return 0.0;
    const double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
    const double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
    return 2.0 * p * r / (p + r);
}

std::vector<double> size_costs(const std::vector<double>& param_counts) {
    if (param_counts.empty())
        throw std::invalid_argument("size_costs: need at least one model");
    double p_max = param_counts.front();
    for (double p : param_counts) {
        if (!(p > 0.0)) throw std::invalid_argument("size_costs: param counts must be > 0");
        p_max = std::max(p_max, p);
    }
    std::vector<double> costs(param_counts.size());
    for (size_t i = 0; i < param_counts.size(); ++i)
        costs[i] = 1.0 - std::exp(param_counts[i] - p_max);
    return costs;
}

double compose_reward(double alignment, double cost, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must be in [0,1]");
    return alpha * alignment + (1.0 - alpha) * cost;
}

RewardComponents make_reward(double alignment, double cost, double alpha) {
    RewardComponents rc;
    rc.alignment = alignment;
    rc.cost = cost;
    rc.alpha = alpha;
    rc.reward = compose_reward(alignment, cost, alpha);
    return rc;
}

}  // namespace specrouter
