#include "specrouter/router.hpp"

#include <chrono>
#include <stdexcept>

namespace specrouter {

namespace {

int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

int argmax_lowest(const std::vector<double>& probs) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(probs.size()); ++i)
        if (probs[static_cast<size_t>(i)] > probs[static_cast<size_t>(best)]) best = i;
    return best;
}

}  // namespace

RouteMode route_mode_from_string(const std::string& name) {
    if (name == "greedy") return RouteMode::greedy;
    if (name == "dynamic") return RouteMode::dynamic;
    throw std::invalid_argument("unknown route mode: " + name);
}

std::string route_mode_to_string(RouteMode mode) {
    return mode == RouteMode::greedy ? "greedy" : "dynamic";
}

std::pair<int, std::vector<double>> select_arm(const PolicyParams& params,
                                               const std::string& query_text,
                                               RouteMode mode, RandomSource* rng) {
    const FeatureVector x = featurize(query_text, params.input_dim);
    std::vector<double> probs = policy_forward(params, x);
    int arm;
    if (mode == RouteMode::greedy) {
        arm = argmax_lowest(probs);
    } else {
        if (rng == nullptr)
            throw std::invalid_argument("dynamic arm selection requires a random source");
        arm = sample_categorical(probs, *rng);
    }
    return {arm, std::move(probs)};
}

RoutedResult route_and_decode(const PolicyParams& params, const std::vector<ArmSpec>& arms,
                              const NGramModel& target, const std::string& query_text,
                              const DecodeConfig& cfg, RouteMode mode, RandomSource* rng) {
    if (static_cast<int>(arms.size()) != params.num_arms)
        throw std::invalid_argument("arm count does not match policy output size");
    cfg.validate();
    if (rng == nullptr && (mode == RouteMode::dynamic || cfg.temperature > 0.0))
        throw std::invalid_argument("routing with sampling requires a random source");

    RoutedResult result;

    int64_t t = now_ns();
    const FeatureVector x = featurize(query_text, params.input_dim);
    const int64_t featurize_ns = now_ns() - t;

    t = now_ns();
    result.policy_probs = policy_forward(params, x);
    if (mode == RouteMode::greedy) {
        result.arm_index = argmax_lowest(result.policy_probs);
    } else {
        if (rng == nullptr)
            throw std::invalid_argument("dynamic routing requires a random source");
        result.arm_index = sample_categorical(result.policy_probs, *rng);
    }
    const int64_t policy_ns = now_ns() - t;

    const ArmSpec& arm = arms[static_cast<size_t>(result.arm_index)];
    result.arm_id = arm.arm_id;
    const TokenSeq prompt = target.vocab().encode(query_text);

    if (arm.kind == ArmKind::drafter) {
        auto [output, stats] =
            cfg.temperature == 0.0
                ? greedy_assisted_decode(target, *arm.model, prompt, cfg)
                : speculative_decode(target, *arm.model, prompt, cfg, *rng);
        result.output = std::move(output);
        result.stats = stats;
    } else {
        t = now_ns();
        result.output = generate(target, prompt, cfg.max_len, cfg.temperature,
                                 cfg.temperature == 0.0 ? nullptr : rng);
        result.stats.wall_ns_total = now_ns() - t;
        result.stats.target_calls = static_cast<int64_t>(result.output.tokens.size());
        result.stats.tokens_emitted = static_cast<int64_t>(result.output.tokens.size());
    }

    result.stats.wall_ns_policy = policy_ns;
    result.stats.wall_ns_featurize = featurize_ns;
    return result;
}

int64_t reported_wall_ns(const DecodeStats& stats) {
    return stats.wall_ns_total + stats.wall_ns_policy;
}

}  // namespace specrouter
