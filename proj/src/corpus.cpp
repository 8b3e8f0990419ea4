#include "specrouter/corpus.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "specrouter/io_util.hpp"
#include "specrouter/rng.hpp"

namespace specrouter {

DomainPattern pattern_from_string(const std::string& id) {
    if (id == "periodic-repeat") return DomainPattern::periodic_repeat;
    if (id == "markov-chain") return DomainPattern::markov_chain;
    if (id == "arithmetic-sequence") return DomainPattern::arithmetic_sequence;
    throw std::invalid_argument("unknown domain pattern: " + id);
}

std::string pattern_to_string(DomainPattern p) {
    switch (p) {
        case DomainPattern::periodic_repeat: return "periodic-repeat";
        case DomainPattern::markov_chain: return "markov-chain";
        case DomainPattern::arithmetic_sequence: return "arithmetic-sequence";
    }
    throw std::logic_error("unreachable");
}

namespace {

void validate_spec(const DomainSpec& spec) {
    if (spec.domain_id.empty()) throw std::invalid_argument("domain_id must be non-empty");
    if (spec.alphabet.empty()) throw std::invalid_argument("domain alphabet must be non-empty");
    switch (spec.pattern) {
        case DomainPattern::periodic_repeat:
            if (spec.motif.empty())
                throw std::invalid_argument(spec.domain_id + ": periodic motif must be non-empty");
            for (char c : spec.motif)
                if (spec.alphabet.find(c) == std::string::npos)
                    throw std::invalid_argument(spec.domain_id + ": motif char outside alphabet");
            break;
        case DomainPattern::markov_chain: {
            const auto& mk = spec.markov;
            const size_t n = mk.states.size();
            if (n == 0 || mk.rows.size() != n || mk.initial.size() != n)
                throw std::invalid_argument(spec.domain_id + ": malformed markov rule");
            for (const auto& row : mk.rows) {
                if (row.size() != n)
                    throw std::invalid_argument(spec.domain_id + ": ragged markov row");
                double s = 0.0;
                for (double p : row) {
                    if (p < 0.0) throw std::invalid_argument(spec.domain_id + ": negative markov prob");
                    s += p;
                }
                if (std::abs(s - 1.0) > 1e-9)
                    throw std::invalid_argument(spec.domain_id + ": markov row does not sum to 1");
            }
            for (char c : mk.states)
                if (spec.alphabet.find(c) == std::string::npos)
                    throw std::invalid_argument(spec.domain_id + ": markov state outside alphabet");
            break;
        }
        case DomainPattern::arithmetic_sequence:
            if (spec.arith_min_start < 0 || spec.arith_max_start < spec.arith_min_start ||
                spec.arith_max_step < 1)
                throw std::invalid_argument(spec.domain_id + ": bad arithmetic range");
            break;
    }
}

int bounded_int(RandomSource& rng, int lo, int hi) {  // inclusive
    const int span = hi - lo + 1;
    return lo + static_cast<int>(rng.next_unit() * span) % span;
}

std::string periodic_text(const DomainSpec& spec, size_t phase, int len) {
    std::string out;
    out.reserve(static_cast<size_t>(len));
    for (int i = 0; i < len; ++i)
        out += spec.motif[(phase + static_cast<size_t>(i)) % spec.motif.size()];
    return out;
}

std::string markov_text(const DomainSpec& spec, int len, RandomSource& rng) {
    const auto& mk = spec.markov;
    std::string out;
    out.reserve(static_cast<size_t>(len));
    int state = sample_categorical(mk.initial, rng);
    for (int i = 0; i < len; ++i) {
        out += mk.states[static_cast<size_t>(state)];
        state = sample_categorical(mk.rows[static_cast<size_t>(state)], rng);
    }
    return out;
}

std::string arithmetic_text(const DomainSpec& spec, int len, RandomSource& rng) {
    int value = bounded_int(rng, spec.arith_min_start, spec.arith_max_start);
    const int step = bounded_int(rng, 1, spec.arith_max_step);
    std::string out;
    while (static_cast<int>(out.size()) < len) {
        if (!out.empty()) out += ' ';
        out += std::to_string(value);
        value += step;
    }
    out.resize(static_cast<size_t>(len));
    return out;
}

std::string rule_text(const DomainSpec& spec, int len, RandomSource& rng, bool random_phase) {
    switch (spec.pattern) {
        case DomainPattern::periodic_repeat: {
            const size_t phase =
                random_phase ? static_cast<size_t>(bounded_int(rng, 0, static_cast<int>(spec.motif.size()) - 1))
                             : 0;
            return periodic_text(spec, phase, len);
        }
        case DomainPattern::markov_chain:
            return markov_text(spec, len, rng);
        case DomainPattern::arithmetic_sequence:
            return arithmetic_text(spec, len, rng);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::vector<std::string> make_corpus(const DomainSpec& spec, int n_sequences,
                                     int seq_len, uint64_t seed) {
    validate_spec(spec);
    if (n_sequences < 1) throw std::invalid_argument("n_sequences must be >= 1");
    if (seq_len < 1) throw std::invalid_argument("seq_len must be >= 1");

    MtRandomSource rng(derive_seed(seed, spec.domain_id + "/corpus"));
    std::vector<std::string> corpus;
    corpus.reserve(static_cast<size_t>(n_sequences));
    for (int i = 0; i < n_sequences; ++i)
        corpus.push_back(rule_text(spec, seq_len, rng, /*random_phase=*/false));
    return corpus;
}

std::vector<LabeledQuery> make_query_set(const std::vector<DomainSpec>& specs,
                                         int n_per_domain, Split split, uint64_t seed) {
    if (specs.empty()) throw std::invalid_argument("make_query_set: no domain specs");
    if (n_per_domain < 1) throw std::invalid_argument("n_per_domain must be >= 1");

    const std::string split_name = split == Split::train ? "train" : "test";
    std::vector<LabeledQuery> queries;
    queries.reserve(specs.size() * static_cast<size_t>(n_per_domain));
    for (const DomainSpec& spec : specs) {
        validate_spec(spec);
        MtRandomSource rng(derive_seed(seed, spec.domain_id + "/queries/" + split_name));
        for (int i = 0; i < n_per_domain; ++i) {
            // disjoint length classes: even jitter for train, odd for test
            int jitter = 2 * bounded_int(rng, 0, 7);
            if (split == Split::test) jitter += 1;
            const int len = spec.query_prefix_len + jitter;
            LabeledQuery q;
            q.query_id = spec.domain_id + "-" + split_name + "-" + std::to_string(i);
            q.text = rule_text(spec, len, rng, /*random_phase=*/true);
            q.true_domain = spec.domain_id;
            queries.push_back(std::move(q));
        }
    }

    std::vector<size_t> perm(queries.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::mt19937_64 shuffle_engine(derive_seed(seed, "query-shuffle/" + split_name));
    deterministic_shuffle(perm, shuffle_engine);
    std::vector<LabeledQuery> shuffled;
    shuffled.reserve(queries.size());
    for (size_t i : perm) shuffled.push_back(std::move(queries[i]));
    return shuffled;
}

std::vector<std::string> corrupt_corpus(const std::vector<std::string>& corpus,
                                        const std::string& alphabet, double rate,
                                        uint64_t seed) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("corruption rate in [0,1]");
    if (alphabet.empty()) throw std::invalid_argument("corrupt_corpus: empty alphabet");
    MtRandomSource rng(derive_seed(seed, "corrupt"));
    std::vector<std::string> out = corpus;
    for (std::string& seq : out)
        for (char& c : seq)
            if (rng.next_unit() < rate)
                c = alphabet[static_cast<size_t>(
                    bounded_int(rng, 0, static_cast<int>(alphabet.size()) - 1))];
    return out;
}

double jaccard_overlap(const std::string& alphabet_a, const std::string& alphabet_b) {
    const std::set<char> a(alphabet_a.begin(), alphabet_a.end());
    const std::set<char> b(alphabet_b.begin(), alphabet_b.end());
    size_t inter = 0;
    for (char c : a) inter += b.count(c);
    const size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

DomainSpec stock_domain(const std::string& name) {
    DomainSpec spec;
    spec.domain_id = name;
    if (name == "periodic") {
        spec.alphabet = "abcd";
        spec.pattern = DomainPattern::periodic_repeat;
        spec.motif = "abcd";
        spec.query_prefix_len = 16;
        return spec;
    }
    if (name == "markov") {
        spec.alphabet = "cdef";
        spec.pattern = DomainPattern::markov_chain;
        spec.markov.states = "cdef";
        spec.markov.rows = {
            {0.70, 0.20, 0.05, 0.05},
            {0.05, 0.70, 0.20, 0.05},
            {0.05, 0.05, 0.70, 0.20},
            {0.20, 0.05, 0.05, 0.70},
        };
        spec.markov.initial = {0.25, 0.25, 0.25, 0.25};
        spec.query_prefix_len = 16;
        return spec;
    }
    if (name == "digits") {
        spec.alphabet = "0123456789 ";
        spec.pattern = DomainPattern::arithmetic_sequence;
        spec.arith_min_start = 1;
        spec.arith_max_start = 89;
        spec.arith_max_step = 3;
        spec.query_prefix_len = 16;
        return spec;
    }
    throw std::invalid_argument("unknown stock domain: " + name);
}

std::string alphabet_union(const std::vector<DomainSpec>& specs) {
    std::set<char> chars;
    for (const auto& spec : specs) chars.insert(spec.alphabet.begin(), spec.alphabet.end());
    return std::string(chars.begin(), chars.end());
}

void save_corpus(const std::filesystem::path& path, const std::vector<std::string>& corpus) {
    write_lines(path, corpus);
}

std::vector<std::string> load_corpus(const std::filesystem::path& path) {
    return read_lines(path);
}

void save_queries(const std::filesystem::path& path, const std::vector<LabeledQuery>& queries) {
    std::vector<std::string> lines;
    lines.reserve(queries.size());
    for (const auto& q : queries) {
        if (q.text.find('\t') != std::string::npos || q.text.find('\n') != std::string::npos)
            throw std::invalid_argument("query text may not contain tabs or newlines");
        lines.push_back(q.query_id + '\t' + q.true_domain + '\t' + q.text);
    }
    write_lines(path, lines);
}

std::vector<LabeledQuery> load_queries(const std::filesystem::path& path) {
    std::vector<LabeledQuery> out;
    size_t line_no = 0;
    for (const std::string& line : read_lines(path)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 3)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected query_id\\ttrue_domain\\ttext");
        if (fields[2].empty())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": empty query text");
        out.push_back({fields[0], fields[2], fields[1]});
    }
    return out;
}

}  // namespace specrouter
