#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "specrouter/distribution.hpp"
#include "specrouter/vocab.hpp"

namespace specrouter {

struct GenerationOutput {
    TokenSeq tokens;   // generated continuation; eos appears at most once, last
    std::string text;  // detokenized continuation (bos/eos stripped)

    // tokens without a trailing eos; what alignment scoring compares
    TokenSeq content() const;
};

// Additively smoothed n-gram language model. Smoothing keeps every token in
// the support, which the speculative accept-reject ratio q/p relies on.
class NGramModel {
  public:
    struct ContextCounts {
        std::vector<uint64_t> counts;  // per next-token
        uint64_t total = 0;
    };

    int order() const { return order_; }
    double smoothing() const { return smoothing_; }
    // declared size in normalized units, not a derived entry count
    double param_count() const { return param_count_; }
    const std::string& model_id() const { return model_id_; }
    const Vocabulary& vocab() const { return vocab_; }

    uint64_t count(const TokenSeq& context, TokenId next) const;
    size_t context_entries() const { return counts_.size(); }

    friend NGramModel fit_ngram(const Vocabulary& vocab,
                                const std::vector<TokenSeq>& corpus, int order,
                                double smoothing, double param_count,
                                const std::string& model_id);
    friend TokenDistribution next_distribution(const NGramModel& model,
                                               const TokenSeq& context);
    friend void save_ngram(const NGramModel& model, const std::filesystem::path& path);
    friend NGramModel load_ngram(const std::filesystem::path& path, const Vocabulary& vocab);

  private:
    struct SeqHash {
        size_t operator()(const TokenSeq& s) const {
            uint64_t h = 14695981039346656037ull;
            for (TokenId t : s) {
                for (int b = 0; b < 4; ++b) {
                    h ^= static_cast<unsigned char>(t >> (8 * b));
                    h *= 1099511628211ull;
                }
            }
            return static_cast<size_t>(h);
        }
    };

    Vocabulary vocab_;
    int order_ = 1;
    double smoothing_ = 0.1;
    double param_count_ = 1.0;
    std::string model_id_;
    std::unordered_map<TokenSeq, ContextCounts, SeqHash> counts_;

    // last (order-1) tokens of `context`, left-padded with bos
    TokenSeq context_suffix(const TokenSeq& context) const;
};

// Aggregates every length-`order` window over each sequence, left-padded with
// (order-1) bos tokens. Sequences are used verbatim: callers decide whether
// they carry explicit eos markers.
NGramModel fit_ngram(const Vocabulary& vocab, const std::vector<TokenSeq>& corpus,
                     int order, double smoothing, double param_count,
                     const std::string& model_id);

// (count + d) / (total + d*V) over the padded context suffix; an unseen
// context yields the uniform distribution.
TokenDistribution next_distribution(const NGramModel& model, const TokenSeq& context);

// Autoregressive rollout: temperature-shaped sampling, argmax at T=0 (lowest
// id tie-break). Stops at eos or after max_len generated tokens. rng may be
// null only when temperature is 0.
GenerationOutput generate(const NGramModel& model, const TokenSeq& prompt,
                          int max_len, double temperature, RandomSource* rng);

// Line-oriented versioned text format; counts round-trip bit-exactly.
void save_ngram(const NGramModel& model, const std::filesystem::path& path);
NGramModel load_ngram(const std::filesystem::path& path, const Vocabulary& vocab);

}  // namespace specrouter
