#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "specrouter/ngram.hpp"

namespace specrouter {

struct DecodeConfig {
    int gamma = 7;             // draft tokens per verification round
    double temperature = 1.0;  // applied to both draft and target
    int max_len = 48;
    uint64_t seed = 0;

    void validate() const;
};

// Exact per-run accounting. Wall clock is split so the reporting rule
// (include policy inference, exclude featurization) stays an arithmetic
// identity: wall_ns_total covers the decode phase only, the router fills in
// the other two.
struct DecodeStats {
    int64_t target_calls = 0;
    int64_t draft_calls = 0;
    int64_t tokens_emitted = 0;
    int64_t draft_tokens_generated = 0;
    int64_t draft_tokens_accepted = 0;
    int64_t wall_ns_total = 0;
    int64_t wall_ns_policy = 0;
    int64_t wall_ns_featurize = 0;
};

// min(1, q[x]/p[x]) for a token the draft proposed (p[x] > 0 by smoothing)
double accept_probability(const TokenDistribution& draft_probs,
                          const TokenDistribution& target_probs, TokenId proposed);

// norm(max(0, q - p)); if the residual mass is numerically zero the target
// distribution itself is returned.
TokenDistribution residual_distribution(const TokenDistribution& draft_probs,
                                        const TokenDistribution& target_probs);

// Lossless accept-reject speculative sampling. Per round the draft proposes
// up to gamma tokens, the target verifies all of them in one parallel pass
// (one target_call), a rejection emits one token from the residual
// distribution and discards the suffix, and a fully accepted round emits a
// bonus token sampled from the target. Every emitted token is marginally
// distributed as the temperature-adjusted target.
//
// Draw order per round is part of the contract: gamma' draft draws, one
// accept draw per verified position, then one residual draw (on rejection)
// or one bonus draw (on full acceptance).
std::pair<GenerationOutput, DecodeStats> speculative_decode(const NGramModel& target,
                                                            const NGramModel& draft,
                                                            const TokenSeq& prompt,
                                                            const DecodeConfig& cfg,
                                                            RandomSource& rng);

// Exact-match variant: a draft token is accepted iff it equals the target's
// argmax, so the output is bit-identical to target-only greedy generation.
// cfg.temperature must be 0; no randomness is consumed.
std::pair<GenerationOutput, DecodeStats> greedy_assisted_decode(const NGramModel& target,
                                                                const NGramModel& draft,
                                                                const TokenSeq& prompt,
                                                                const DecodeConfig& cfg);

// accepted / generated per the run's totals; empty for runs that drafted
// nothing (autoregressive arm).
std::optional<double> accept_rate(const DecodeStats& stats);

// Throws unless the run satisfies the accounting invariants
// (acceptance-rate range, accepted <= generated, target-call bounds).
void validate_stats(const DecodeStats& stats, int gamma);

}  // namespace specrouter
