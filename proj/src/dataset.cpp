#include "specrouter/dataset.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "specrouter/io_util.hpp"
#include "specrouter/parallel.hpp"
#include "specrouter/rng.hpp"

namespace specrouter {

namespace {

void validate_arms(const std::vector<ArmSpec>& arms) {
    if (arms.empty()) throw std::invalid_argument("collect: no arms");
    int ar_arms = 0;
    std::set<std::string> ids;
    for (const auto& arm : arms) {
        if (arm.arm_id.empty()) throw std::invalid_argument("arm_id must be non-empty");
        if (!ids.insert(arm.arm_id).second)
            throw std::invalid_argument("duplicate arm_id: " + arm.arm_id);
        if (arm.kind == ArmKind::autoregressive) {
            ++ar_arms;
        } else if (!arm.model) {
            throw std::invalid_argument("drafter arm without a model: " + arm.arm_id);
        }
        if (!(arm.param_count > 0.0))
            throw std::invalid_argument("arm param_count must be > 0: " + arm.arm_id);
    }
    if (ar_arms > 1)
        throw std::invalid_argument("at most one autoregressive arm is allowed");
}

std::string meta_to_json(const std::map<std::string, std::string>& meta) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [k, v] : meta) obj[k] = v;
    return obj.dump();
}

std::map<std::string, std::string> meta_from_json(const std::string& text) {
    std::map<std::string, std::string> out;
    const auto obj = nlohmann::json::parse(text);
    if (!obj.is_object()) throw std::runtime_error("meta field is not an object");
    for (const auto& [k, v] : obj.items()) out[k] = v.get<std::string>();
    return out;
}

// all records for one query, in arm order
void collect_one(const LabeledQuery& query, const NGramModel& target,
                 const std::vector<ArmSpec>& arms, const std::vector<double>& costs,
                 double alpha, const RolloutConfig& cfg, RewardRecord* out) {
    const TokenSeq prompt = target.vocab().encode(query.text);
    const GenerationOutput expert = generate(target, prompt, cfg.max_len, 0.0, nullptr);
    const TokenSeq expert_content = expert.content();

    for (size_t j = 0; j < arms.size(); ++j) {
        const ArmSpec& arm = arms[j];
        GenerationOutput rollout;
        if (arm.kind == ArmKind::drafter) {
            rollout = generate(*arm.model, prompt, cfg.max_len, 0.0, nullptr);
        } else {
            // sampled, not greedy, so the score is not trivially 1
            MtRandomSource rng(derive_seed(cfg.seed, query.query_id + "/ar-rollout"));
            rollout = generate(target, prompt, cfg.max_len, 1.0, &rng);
        }
        const double alignment = rouge_l(rollout.content(), expert_content);
        const RewardComponents rc = make_reward(alignment, costs[j], alpha);

        RewardRecord& rec = out[j];
        rec.query_id = query.query_id;
        rec.query_text = query.text;
        rec.arm_id = arm.arm_id;
        rec.arm_index = static_cast<int>(j);
        rec.alignment = rc.alignment;
        rec.cost = rc.cost;
        rec.alpha = rc.alpha;
        rec.reward = rc.reward;
        if (!query.true_domain.empty()) rec.meta["true_domain"] = query.true_domain;
    }
}

RewardDataset collect_impl(const std::vector<LabeledQuery>& queries,
                           const NGramModel& target, const std::vector<ArmSpec>& arms,
                           double alpha, const RolloutConfig& cfg, bool parallel) {
    if (queries.empty()) throw std::invalid_argument("collect: no queries");
    validate_arms(arms);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0,1]");
    if (cfg.max_len < 1) throw std::invalid_argument("max_len must be >= 1");

    std::set<std::string> ids;
    for (const auto& q : queries)
        if (!ids.insert(q.query_id).second)
            throw std::invalid_argument("duplicate query_id: " + q.query_id);

    const std::vector<double> costs = arm_costs(arms, target.param_count());
    const size_t k = arms.size();
    RewardDataset dataset;
    dataset.num_arms = static_cast<int>(k);
    dataset.records.resize(queries.size() * k);

    auto body = [&](size_t i) {
        collect_one(queries[i], target, arms, costs, alpha, cfg, &dataset.records[i * k]);
    };
    if (parallel) {
        parallel_for(queries.size(), body);
    } else {
        for (size_t i = 0; i < queries.size(); ++i) body(i);
    }
    return dataset;
}

}  // namespace

std::vector<double> arm_costs(const std::vector<ArmSpec>& arms, double target_param_count) {
    std::vector<double> params;
    params.reserve(arms.size() + 1);
    for (const auto& arm : arms) params.push_back(arm.param_count);
    params.push_back(target_param_count);
    std::vector<double> costs = size_costs(params);
    costs.resize(arms.size());
    return costs;
}

RewardDataset collect(const std::vector<LabeledQuery>& queries, const NGramModel& target,
                      const std::vector<ArmSpec>& arms, double alpha,
                      const RolloutConfig& cfg) {
    return collect_impl(queries, target, arms, alpha, cfg, /*parallel=*/true);
}

RewardDataset collect_serial(const std::vector<LabeledQuery>& queries,
                             const NGramModel& target, const std::vector<ArmSpec>& arms,
                             double alpha, const RolloutConfig& cfg) {
    return collect_impl(queries, target, arms, alpha, cfg, /*parallel=*/false);
}

void save_dataset(const std::filesystem::path& path, const RewardDataset& dataset) {
    std::vector<std::string> lines;
    lines.reserve(dataset.records.size() + 1);
    lines.push_back("rewardset v1 k=" + std::to_string(dataset.num_arms));
    for (const auto& rec : dataset.records) {
        if (rec.query_text.find('\t') != std::string::npos)
            throw std::invalid_argument("query text may not contain tabs");
        lines.push_back(rec.query_id + '\t' + std::to_string(rec.arm_index) + '\t' +
                        rec.arm_id + '\t' + format_real(rec.alignment) + '\t' +
                        format_real(rec.cost) + '\t' + format_real(rec.alpha) + '\t' +
                        format_real(rec.reward) + '\t' + rec.query_text + '\t' +
                        meta_to_json(rec.meta));
    }
    write_lines(path, lines);
}

RewardDataset load_dataset(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    RewardDataset dataset;
    if (lines.empty()) return dataset;  // empty file -> empty dataset

    {
        const auto head = split(lines[0], ' ');
        if (head.size() != 3 || head[0] != "rewardset" || head[1] != "v1" ||
            head[2].rfind("k=", 0) != 0)
            throw std::runtime_error(path.string() + ":1: bad rewardset header");
        dataset.num_arms = std::stoi(head[2].substr(2));
        if (dataset.num_arms < 1)
            throw std::runtime_error(path.string() + ":1: k must be >= 1");
    }

    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.empty()) continue;
        const auto at = [&](const std::string& msg) {
            return path.string() + ":" + std::to_string(i + 1) + ": " + msg;
        };
        const auto fields = split(line, '\t');
        if (fields.size() != 9) throw std::runtime_error(at("expected 9 tab-separated fields"));

        RewardRecord rec;
        rec.query_id = fields[0];
        try {
            rec.arm_index = std::stoi(fields[1]);
            rec.alignment = parse_real(fields[3]);
            rec.cost = parse_real(fields[4]);
            rec.alpha = parse_real(fields[5]);
            rec.reward = parse_real(fields[6]);
            rec.meta = meta_from_json(fields[8]);
        } catch (const std::exception& e) {
            throw std::runtime_error(at(e.what()));
        }
        rec.arm_id = fields[2];
        rec.query_text = fields[7];
        if (rec.arm_index < 0 || rec.arm_index >= dataset.num_arms)
            throw std::runtime_error(at("arm_index outside [0, k)"));
        if (!std::isfinite(rec.reward))
            throw std::runtime_error(at("non-finite reward"));
        dataset.records.push_back(std::move(rec));
    }
    return dataset;
}

}  // namespace specrouter
