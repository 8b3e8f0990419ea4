#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "specrouter/config.hpp"
#include "specrouter/corpus.hpp"
#include "specrouter/dataset.hpp"
#include "specrouter/policy.hpp"
#include "specrouter/router.hpp"

namespace specrouter {

// How to fit one n-gram from the experiment's synthetic corpora.
struct ModelSpec {
    std::string model_id;
    int order = 3;
    double smoothing = 0.1;
    double param_count = 1.0;                // normalized size units
    std::vector<std::string> train_domains;  // empty -> union of all domains
    double corpus_noise = 0.0;               // char corruption of the training corpus
};

struct PolicySetup {
    int feature_dim = 256;
    int hidden_dim = 512;
    TrainConfig train;
};

struct ExperimentConfig {
    std::string recipe = "two-domain";
    std::vector<DomainSpec> domains;
    ModelSpec target;
    std::vector<ModelSpec> drafters;   // one arm each, in order
    bool include_ar_arm = false;       // appends the auto-regressive arm last
    double alpha = 1.0;
    DecodeConfig decode;
    std::vector<int> gamma_grid;            // empty -> {decode.gamma}
    std::vector<double> temperature_grid;   // empty -> {decode.temperature}
    PolicySetup policy;
    int n_train_queries = 2000;  // totals, split evenly across domains
    int n_test_queries = 500;
    int corpus_sequences = 300;
    int corpus_seq_len = 64;
    std::vector<uint64_t> seeds = {1, 2, 3};

    void validate() const;
};

// Stock recipes: "two-domain", "size-tradeoff", "with-ar-arm", "curve",
// "sweeps".
ExperimentConfig stock_recipe(const std::string& name);

// recipe preset (key `recipe`) + flat overrides; domains and arms may be
// fully redefined through dotted keys (domain.N.*, arm.N.*, target.*).
ExperimentConfig experiment_from_config(const KeyValueConfig& kv);

// Everything one seed's pipeline runs against.
struct ExperimentInstance {
    Vocabulary vocab;
    std::shared_ptr<const NGramModel> target;
    std::vector<ArmSpec> arms;
    std::vector<LabeledQuery> train_queries;
    std::vector<LabeledQuery> test_queries;
};

ExperimentInstance build_experiment(const ExperimentConfig& cfg, uint64_t seed);

RewardDataset collect_offline(const ExperimentConfig& cfg, const ExperimentInstance& inst,
                              uint64_t seed);
PolicyParams train_offline(const ExperimentConfig& cfg, const RewardDataset& dataset,
                           uint64_t seed, TrainReport* report = nullptr);

// Same records with the reward recomposed at a different alpha.
RewardDataset reprice_dataset(const RewardDataset& dataset, double alpha);

// One aggregated report row. Timing fields are the only ones that may differ
// between identically seeded runs.
struct BenchCell {
    std::string task;      // domain id or "all"
    std::string strategy;  // auto-regressive | fixed:<arm> | policy-greedy | policy-dynamic
    int gamma = 0;
    double temperature = 0.0;
    int n_seeds = 0;
    int64_t n_queries = 0;
    double ms_per_token_mean = 0.0;
    double ms_per_token_std = 0.0;          // NaN when < 2 seeds
    double target_calls_per_token = 0.0;
    double accept_rate_pct = 0.0;           // NaN when nothing was drafted
    double quality_rouge = 0.0;             // vs. the target's greedy output
    std::map<std::string, int64_t> arm_histogram;
};

struct BenchReport {
    std::string recipe;
    std::vector<BenchCell> cells;  // sorted by (task, strategy, gamma, temperature)
};

// Full protocol: per seed, build -> collect -> train -> evaluate the
// auto-regressive baseline, every fixed drafter, and both policy modes on
// each domain's test split (plus the mixed "all" row), for every grid point.
BenchReport run_bench(const ExperimentConfig& cfg);

struct AlphaSweepRow {
    double alpha = 0.0;
    std::vector<std::string> arm_ids;
    std::vector<int64_t> selections;  // greedy-policy selections over test queries
    std::vector<double> share;
};

// Retrains the policy per alpha on the repriced offline dataset (rollouts and
// alignments do not depend on alpha) and reports the routed-arm shares.
std::vector<AlphaSweepRow> sweep_alpha(const ExperimentConfig& cfg,
                                       const std::vector<double>& alphas);

struct CurveRow {
    size_t n_records = 0;
    double accept_rate_pct = 0.0;
    double target_calls_per_token = 0.0;
};

// Trains on dataset prefixes of the given sizes and evaluates greedy routing
// on the mixed test split.
std::vector<CurveRow> sample_efficiency_curve(const ExperimentConfig& cfg,
                                              const std::vector<size_t>& sizes);

std::string render_report_table(const BenchReport& report);
std::vector<std::string> report_tsv_lines(const BenchReport& report);
// writes report.txt (aligned table) and report.tsv (versioned records)
void write_report(const BenchReport& report, const std::filesystem::path& out_dir);

}  // namespace specrouter
