#pragma once

#include <vector>

#include "specrouter/rng.hpp"
#include "specrouter/vocab.hpp"

namespace specrouter {

// Probability vector over the vocabulary. Everything downstream (speculative
// verification, temperature shaping, sampling) operates on these.
struct TokenDistribution {
    std::vector<double> probs;

    int size() const { return static_cast<int>(probs.size()); }
    // true when entries are non-negative and sum to 1 within 1e-9
    bool valid() const;
    TokenId argmax() const;  // lowest-id tie-break
};

// T == 1 returns the input unchanged. T == 0 collapses to a one-hot at the
// argmax (lowest id on ties). Otherwise entries are raised to 1/T and
// renormalized; if every entry underflows, falls back to the argmax one-hot.
TokenDistribution apply_temperature(const TokenDistribution& dist, double temperature);

// Inverse-CDF sample in ascending id order (one draw from rng).
TokenId sample_token(const TokenDistribution& dist, RandomSource& rng);

}  // namespace specrouter
