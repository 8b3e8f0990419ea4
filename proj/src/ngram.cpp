#include "specrouter/ngram.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "specrouter/io_util.hpp"

namespace specrouter {

TokenSeq GenerationOutput::content() const {
    if (!tokens.empty() && tokens.back() == 1 /* eos */)
        return TokenSeq(tokens.begin(), tokens.end() - 1);
    return tokens;
}

uint64_t NGramModel::count(const TokenSeq& context, TokenId next) const {
    auto it = counts_.find(context_suffix(context));
    if (it == counts_.end()) return 0;
    return it->second.counts[static_cast<size_t>(next)];
}

TokenSeq NGramModel::context_suffix(const TokenSeq& context) const {
    const size_t want = static_cast<size_t>(order_ - 1);
    TokenSeq suffix;
    suffix.reserve(want);
    if (context.size() >= want) {
        suffix.assign(context.end() - static_cast<ptrdiff_t>(want), context.end());
    } else {
        suffix.assign(want - context.size(), vocab_.bos_id());
        suffix.insert(suffix.end(), context.begin(), context.end());
    }
    return suffix;
}

NGramModel fit_ngram(const Vocabulary& vocab, const std::vector<TokenSeq>& corpus,
                     int order, double smoothing, double param_count,
                     const std::string& model_id) {
    if (order < 1) throw std::invalid_argument("ngram order must be >= 1");
    if (!(smoothing > 0.0)) throw std::invalid_argument("smoothing must be > 0");
    if (!(param_count > 0.0)) throw std::invalid_argument("param_count must be > 0");
    if (corpus.empty()) throw std::invalid_argument("corpus must be non-empty");
    if (model_id.empty() || model_id.find_first_of(" \t\n") != std::string::npos)
        throw std::invalid_argument("model_id must be non-empty without whitespace");

    NGramModel m;
    m.vocab_ = vocab;
    m.order_ = order;
    m.smoothing_ = smoothing;
    m.param_count_ = param_count;
    m.model_id_ = model_id;

    const size_t ctx_len = static_cast<size_t>(order - 1);
    const size_t vsize = static_cast<size_t>(vocab.size());
    for (const TokenSeq& seq : corpus) {
        for (TokenId t : seq)
            if (t < 0 || t >= vocab.size())
                throw std::invalid_argument("corpus token out of vocabulary range");
        TokenSeq padded(ctx_len, vocab.bos_id());
        padded.insert(padded.end(), seq.begin(), seq.end());
        if (padded.size() < static_cast<size_t>(order)) continue;
        for (size_t i = 0; i + static_cast<size_t>(order) <= padded.size(); ++i) {
            TokenSeq ctx(padded.begin() + static_cast<ptrdiff_t>(i),
                         padded.begin() + static_cast<ptrdiff_t>(i + ctx_len));
            const TokenId next = padded[i + ctx_len];
            auto& bucket = m.counts_[ctx];
            if (bucket.counts.empty()) bucket.counts.assign(vsize, 0);
            bucket.counts[static_cast<size_t>(next)] += 1;
            bucket.total += 1;
        }
    }
    return m;
}

TokenDistribution next_distribution(const NGramModel& model, const TokenSeq& context) {
    for (TokenId t : context)
        if (t < 0 || t >= model.vocab_.size())
            throw std::invalid_argument("context token out of vocabulary range");

    const size_t vsize = static_cast<size_t>(model.vocab_.size());
    const double delta = model.smoothing_;
    TokenDistribution dist;
    dist.probs.assign(vsize, 0.0);

    auto it = model.counts_.find(model.context_suffix(context));
    const NGramModel::ContextCounts* bucket =
        it == model.counts_.end() ? nullptr : &it->second;
    const double denom =
        (bucket ? static_cast<double>(bucket->total) : 0.0) + delta * static_cast<double>(vsize);
    for (size_t t = 0; t < vsize; ++t) {
        const double c = bucket ? static_cast<double>(bucket->counts[t]) : 0.0;
        dist.probs[t] = (c + delta) / denom;
    }
    return dist;
}

GenerationOutput generate(const NGramModel& model, const TokenSeq& prompt,
                          int max_len, double temperature, RandomSource* rng) {
    if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
    if (temperature > 0.0 && rng == nullptr)
        throw std::invalid_argument("sampling at T > 0 requires a random source");

    GenerationOutput out;
    TokenSeq context = prompt;
    for (int step = 0; step < max_len; ++step) {
        const TokenDistribution shaped =
            apply_temperature(next_distribution(model, context), temperature);
        const TokenId tok =
            temperature == 0.0 ? shaped.argmax() : sample_token(shaped, *rng);
        out.tokens.push_back(tok);
        context.push_back(tok);
        if (tok == model.vocab_.eos_id()) break;
    }
    out.text = model.vocab_.decode(out.tokens);
    return out;
}

void save_ngram(const NGramModel& model, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());

    f << "ngram v1 " << model.order_ << ' ' << format_real(model.smoothing_) << ' '
      << format_real(model.param_count_) << ' ' << model.model_id_ << ' '
      << model.vocab_.size() << '\n';

    std::vector<const TokenSeq*> contexts;
    contexts.reserve(model.counts_.size());
    for (const auto& [ctx, bucket] : model.counts_) contexts.push_back(&ctx);
    std::sort(contexts.begin(), contexts.end(),
              [](const TokenSeq* a, const TokenSeq* b) { return *a < *b; });

    for (const TokenSeq* ctx : contexts) {
        const auto& bucket = model.counts_.at(*ctx);
        for (size_t t = 0; t < bucket.counts.size(); ++t) {
            if (bucket.counts[t] == 0) continue;
            for (TokenId c : *ctx) f << c << ' ';
            f << t << ' ' << bucket.counts[t] << '\n';
        }
    }
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

NGramModel load_ngram(const std::filesystem::path& path, const Vocabulary& vocab) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open model file: " + path.string());

    std::string line;
    if (!std::getline(f, line))
        throw std::runtime_error("empty model file: " + path.string());

    std::istringstream header(line);
    std::string magic, version, model_id;
    int order = 0, vsize = 0;
    double delta = 0.0, param_count = 0.0;
    header >> magic >> version >> order >> delta >> param_count >> model_id >> vsize;
    if (!header || magic != "ngram" || version != "v1")
        throw std::runtime_error("bad model header: " + path.string());
    if (vsize != vocab.size())
        throw std::runtime_error("model vocabulary size mismatch: " + path.string());

    NGramModel m;
    m.vocab_ = vocab;
    m.order_ = order;
    m.smoothing_ = delta;
    m.param_count_ = param_count;
    m.model_id_ = model_id;
    if (order < 1 || !(delta > 0.0) || !(param_count > 0.0))
        throw std::runtime_error("bad model header fields: " + path.string());

    const size_t ctx_len = static_cast<size_t>(order - 1);
    size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<int64_t> fields;
        int64_t v = 0;
        while (ls >> v) fields.push_back(v);
        if (fields.size() != ctx_len + 2)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(ctx_len + 2) + " fields");
        TokenSeq ctx;
        for (size_t i = 0; i < ctx_len; ++i) {
            if (fields[i] < 0 || fields[i] >= vsize)
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": context token out of range");
            ctx.push_back(static_cast<TokenId>(fields[i]));
        }
        const int64_t tok = fields[ctx_len];
        const int64_t count = fields[ctx_len + 1];
        if (tok < 0 || tok >= vsize)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": token out of range");
        if (count <= 0)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": count must be positive");
        auto& bucket = m.counts_[ctx];
        if (bucket.counts.empty()) bucket.counts.assign(static_cast<size_t>(vsize), 0);
        bucket.counts[static_cast<size_t>(tok)] += static_cast<uint64_t>(count);
        bucket.total += static_cast<uint64_t>(count);
    }
    return m;
}

}  // namespace specrouter
