#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace specrouter {

enum class DomainPattern { periodic_repeat, markov_chain, arithmetic_sequence };

DomainPattern pattern_from_string(const std::string& id);  // unknown id throws
std::string pattern_to_string(DomainPattern p);

struct MarkovRule {
    std::string states;                     // one char per state
    std::vector<std::vector<double>> rows;  // row-stochastic transition table
    std::vector<double> initial;
};

// Generative rule for one synthetic task family. Only the fields of the
// active pattern are read.
struct DomainSpec {
    std::string domain_id;
    std::string alphabet;  // distinct chars this domain emits
    DomainPattern pattern = DomainPattern::periodic_repeat;
    std::string motif;     // periodic_repeat
    MarkovRule markov;     // markov_chain
    int arith_min_start = 1;   // arithmetic_sequence
    int arith_max_start = 89;
    int arith_max_step = 3;
    int query_prefix_len = 16;
};

struct LabeledQuery {
    std::string query_id;
    std::string text;
    std::string true_domain;  // evaluation-only; the policy never sees it
};

enum class Split { train, test };

// Deterministic corpus of `n_sequences` text lines following the domain rule.
std::vector<std::string> make_corpus(const DomainSpec& spec, int n_sequences,
                                     int seq_len, uint64_t seed);

// Balanced labeled queries across domains, deterministically shuffled.
// Train and test draw from disjoint seed streams and disjoint length-jitter
// parity classes, so their text sets never intersect even for low-entropy
// domains.
std::vector<LabeledQuery> make_query_set(const std::vector<DomainSpec>& specs,
                                         int n_per_domain, Split split, uint64_t seed);

// Replaces each character with a uniform draw from `alphabet` with
// probability `rate`. Recipes use this to grade drafter quality.
std::vector<std::string> corrupt_corpus(const std::vector<std::string>& corpus,
                                        const std::string& alphabet, double rate,
                                        uint64_t seed);

// |A inter B| / |A union B| over character sets
double jaccard_overlap(const std::string& alphabet_a, const std::string& alphabet_b);

// Stock families: "periodic", "markov", "digits".
DomainSpec stock_domain(const std::string& name);
std::string alphabet_union(const std::vector<DomainSpec>& specs);

void save_corpus(const std::filesystem::path& path, const std::vector<std::string>& corpus);
std::vector<std::string> load_corpus(const std::filesystem::path& path);
void save_queries(const std::filesystem::path& path, const std::vector<LabeledQuery>& queries);
std::vector<LabeledQuery> load_queries(const std::filesystem::path& path);

}  // namespace specrouter
