#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace specrouter {

// 64-bit FNV-1a. Fixed constants so hashed features and derived seeds are
// stable across platforms and runs.
inline uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seed for an independent stream keyed by a string id (query id, split name).
// Collection and benchmark workers use this so results do not depend on the
// order in which queries are processed.
inline uint64_t derive_seed(uint64_t base_seed, std::string_view stream_id) {
    return splitmix64(base_seed ^ splitmix64(fnv1a64(stream_id)));
}

// Uniform draws for all sampling in the library. The engine's draw order is a
// fixed contract; tests enumerate decode outcomes by scripting this interface.
class RandomSource {
  public:
    virtual ~RandomSource() = default;
    // uniform in [0, 1)
    virtual double next_unit() = 0;
};

class MtRandomSource final : public RandomSource {
  public:
    explicit MtRandomSource(uint64_t seed) : engine_(seed) {}

    double next_unit() override {
        // 53 mantissa bits, uniform in [0,1); identical on every platform
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

// Replays a fixed list of unit draws; throws when exhausted so a test that
// mis-models the engine's draw order fails loudly.
class ScriptedRandomSource final : public RandomSource {
  public:
    explicit ScriptedRandomSource(std::vector<double> draws)
        : draws_(std::move(draws)) {}

    double next_unit() override {
        if (next_ >= draws_.size())
            throw std::logic_error("scripted random source exhausted");
        return draws_[next_++];
    }

    bool exhausted() const { return next_ == draws_.size(); }

  private:
    std::vector<double> draws_;
    size_t next_ = 0;
};

// Inverse-CDF draw in ascending index order. Guards against the draw landing
// past the accumulated mass from rounding by returning the last index with
// nonzero probability.
inline int sample_categorical(std::span<const double> probs, RandomSource& rng) {
    const double u = rng.next_unit();
    double cum = 0.0;
    int last_positive = -1;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = static_cast<int>(i);
        cum += probs[i];
        if (u < cum) return static_cast<int>(i);
    }
    if (last_positive < 0)
        throw std::invalid_argument("sample_categorical: no positive mass");
    return last_positive;
}

// Fisher-Yates with an explicit bounded-draw rule so shuffles are identical
// across standard library implementations.
inline void deterministic_shuffle(std::vector<size_t>& items, std::mt19937_64& engine) {
    for (size_t i = items.size(); i > 1; --i) {
        const uint64_t j = engine() % i;
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace specrouter
