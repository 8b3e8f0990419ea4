#include "specrouter/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace specrouter {

bool TokenDistribution::valid() const {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) return false;
        sum += p;
    }
    return std::abs(sum - 1.0) <= 1e-9;
}

TokenId TokenDistribution::argmax() const {
    if (probs.empty())
        throw std::invalid_argument("argmax of empty distribution");
    int best = 0;
    for (int i = 1; i < size(); ++i)
        if (probs[static_cast<size_t>(i)] > probs[static_cast<size_t>(best)]) best = i;
    return best;
}

TokenDistribution apply_temperature(const TokenDistribution& dist, double temperature) {
    if (temperature < 0.0)
        throw std::invalid_argument("temperature must be >= 0");
    if (temperature == 1.0) return dist;

    TokenDistribution out;
    out.probs.assign(dist.probs.size(), 0.0);
    if (temperature == 0.0) {
        out.probs[static_cast<size_t>(dist.argmax())] = 1.0;
        return out;
    }

    const double inv_t = 1.0 / temperature;
    double sum = 0.0;
    for (size_t i = 0; i < dist.probs.size(); ++i) {
        const double p = dist.probs[i];
        out.probs[i] = p > 0.0 ? std::pow(p, inv_t) : 0.0;
        sum += out.probs[i];
    }
    if (sum <= 0.0 || !std::isfinite(sum)) {
        // sharpening underflowed every entry; the limit is the argmax one-hot
        out.probs.assign(dist.probs.size(), 0.0);
        out.probs[static_cast<size_t>(dist.argmax())] = 1.0;
        return out;
    }
    for (double& p : out.probs) p /= sum;
    return out;
}

TokenId sample_token(const TokenDistribution& dist, RandomSource& rng) {
    return sample_categorical(dist.probs, rng);
}

}  // namespace specrouter
