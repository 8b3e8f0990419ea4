#include "specrouter/specdec.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace specrouter {

namespace {

int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void check_pair(const NGramModel& target, const NGramModel& draft) {
    if (!(target.vocab() == draft.vocab()))
        throw std::invalid_argument("target and draft must share a vocabulary");
}

}  // namespace

void DecodeConfig::validate() const {
    if (gamma < 1) throw std::invalid_argument("gamma must be >= 1");
    if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
    if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
}

double accept_probability(const TokenDistribution& draft_probs,
                          const TokenDistribution& target_probs, TokenId proposed) {
    const double p = draft_probs.probs.at(static_cast<size_t>(proposed));
    const double q = target_probs.probs.at(static_cast<size_t>(proposed));
    if (p <= 0.0)
        throw std::invalid_argument("proposed token has zero draft probability");
    return std::min(1.0, q / p);
}

TokenDistribution residual_distribution(const TokenDistribution& draft_probs,
                                        const TokenDistribution& target_probs) {
    if (draft_probs.size() != target_probs.size())
        throw std::invalid_argument("distribution size mismatch");
    TokenDistribution res;
    res.probs.resize(target_probs.probs.size());
    double mass = 0.0;
    for (size_t i = 0; i < res.probs.size(); ++i) {
        res.probs[i] = std::max(0.0, target_probs.probs[i] - draft_probs.probs[i]);
        mass += res.probs[i];
    }
    if (mass < 1e-15) return target_probs;  // p == q numerically
    for (double& p : res.probs) p /= mass;
    return res;
}

std::pair<GenerationOutput, DecodeStats> speculative_decode(const NGramModel& target,
                                                            const NGramModel& draft,
                                                            const TokenSeq& prompt,
                                                            const DecodeConfig& cfg,
                                                            RandomSource& rng) {
    cfg.validate();
    check_pair(target, draft);
    const int64_t t0 = now_ns();
    const TokenId eos = target.vocab().eos_id();

    GenerationOutput out;
    DecodeStats stats;
    TokenSeq context = prompt;

    auto emit = [&](TokenId tok) {
        out.tokens.push_back(tok);
        context.push_back(tok);
        stats.tokens_emitted += 1;
        return tok == eos || stats.tokens_emitted >= cfg.max_len;
    };

    bool done = false;
    while (!done) {
        const int remaining = cfg.max_len - static_cast<int>(stats.tokens_emitted);
        int gamma_round = std::min(cfg.gamma, remaining);

        // draft proposes autoregressively from its shaped distribution
        std::vector<TokenDistribution> draft_dists;
        TokenSeq proposed;
        TokenSeq draft_ctx = context;
        for (int j = 0; j < gamma_round; ++j) {
            draft_dists.push_back(
                apply_temperature(next_distribution(draft, draft_ctx), cfg.temperature));
            const TokenId x = sample_token(draft_dists.back(), rng);
            stats.draft_calls += 1;
            proposed.push_back(x);
            draft_ctx.push_back(x);
            if (x == eos) {
                gamma_round = j + 1;
                break;
            }
        }
        stats.draft_tokens_generated += gamma_round;
        stats.target_calls += 1;  // one parallel verification pass per round

        // target distributions at each drafted position
        std::vector<TokenDistribution> target_dists;
        TokenSeq verify_ctx = context;
        for (int j = 0; j < gamma_round; ++j) {
            target_dists.push_back(
                apply_temperature(next_distribution(target, verify_ctx), cfg.temperature));
            verify_ctx.push_back(proposed[static_cast<size_t>(j)]);
        }

        bool all_accepted = true;
        for (int j = 0; j < gamma_round && !done; ++j) {
            const TokenId x = proposed[static_cast<size_t>(j)];
            const double a = accept_probability(draft_dists[static_cast<size_t>(j)],
                                                target_dists[static_cast<size_t>(j)], x);
            if (rng.next_unit() < a) {
                stats.draft_tokens_accepted += 1;
                done = emit(x);
            } else {
                const TokenDistribution res = residual_distribution(
                    draft_dists[static_cast<size_t>(j)], target_dists[static_cast<size_t>(j)]);
                done = emit(sample_token(res, rng));
                all_accepted = false;
                break;
            }
        }

        if (!done && all_accepted) {
            // free token from the same verification pass
            const TokenDistribution bonus =
                apply_temperature(next_distribution(target, verify_ctx), cfg.temperature);
            done = emit(sample_token(bonus, rng));
        }
    }

    out.text = target.vocab().decode(out.tokens);
    stats.wall_ns_total = now_ns() - t0;
    return {std::move(out), stats};
}

std::pair<GenerationOutput, DecodeStats> greedy_assisted_decode(const NGramModel& target,
                                                                const NGramModel& draft,
                                                                const TokenSeq& prompt,
                                                                const DecodeConfig& cfg) {
    cfg.validate();
    if (cfg.temperature != 0.0)
        throw std::invalid_argument("greedy assisted decoding requires temperature 0");
    check_pair(target, draft);
    const int64_t t0 = now_ns();
    const TokenId eos = target.vocab().eos_id();

    GenerationOutput out;
    DecodeStats stats;
    TokenSeq context = prompt;

    auto emit = [&](TokenId tok) {
        out.tokens.push_back(tok);
        context.push_back(tok);
        stats.tokens_emitted += 1;
        return tok == eos || stats.tokens_emitted >= cfg.max_len;
    };

    bool done = false;
    while (!done) {
        const int remaining = cfg.max_len - static_cast<int>(stats.tokens_emitted);
        int gamma_round = std::min(cfg.gamma, remaining);

        TokenSeq proposed;
        TokenSeq draft_ctx = context;
        for (int j = 0; j < gamma_round; ++j) {
            const TokenId x = next_distribution(draft, draft_ctx).argmax();
            stats.draft_calls += 1;
            proposed.push_back(x);
            draft_ctx.push_back(x);
            if (x == eos) {
                gamma_round = j + 1;
                break;
            }
        }
        stats.draft_tokens_generated += gamma_round;
        stats.target_calls += 1;

        TokenSeq verify_ctx = context;
        bool all_accepted = true;
        for (int j = 0; j < gamma_round && !done; ++j) {
            const TokenId x = proposed[static_cast<size_t>(j)];
            const TokenId want = next_distribution(target, verify_ctx).argmax();
            if (x == want) {
                stats.draft_tokens_accepted += 1;
                verify_ctx.push_back(x);
                done = emit(x);
            } else {
                done = emit(want);
                all_accepted = false;
                break;
            }
        }

        if (!done && all_accepted)
            done = emit(next_distribution(target, verify_ctx).argmax());
    }

    out.text = target.vocab().decode(out.tokens);
    stats.wall_ns_total = now_ns() - t0;
    return {std::move(out), stats};
}

std::optional<double> accept_rate(const DecodeStats& stats) {
    if (stats.draft_tokens_generated <= 0) return std::nullopt;
    return static_cast<double>(stats.draft_tokens_accepted) /
           static_cast<double>(stats.draft_tokens_generated);
}

void validate_stats(const DecodeStats& stats, int gamma) {
    if (stats.tokens_emitted < 1)
        throw std::logic_error("stats: no tokens emitted");
    if (stats.draft_tokens_accepted > stats.draft_tokens_generated)
        throw std::logic_error("stats: accepted exceeds generated");
    if (const auto rate = accept_rate(stats); rate && (*rate < 0.0 || *rate > 1.0))
        throw std::logic_error("stats: accept rate outside [0,1]");
    const int64_t upper = stats.tokens_emitted;
    const int64_t lower =
        (stats.tokens_emitted + gamma) / (gamma + 1);  // ceil(L / (gamma+1))
    if (stats.target_calls < lower || stats.target_calls > upper)
        throw std::logic_error("stats: target_calls outside bounds");
}

}  // namespace specrouter
