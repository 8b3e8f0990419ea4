#include "specrouter/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "specrouter/io_util.hpp"
#include "specrouter/parallel.hpp"
#include "specrouter/rng.hpp"

namespace specrouter {

FeatureVector featurize(std::string_view query_text, int dim) {
    if (dim < 1) throw std::invalid_argument("feature dim must be >= 1");
    FeatureVector x;
    x.values.assign(static_cast<size_t>(dim), 0.0);
    for (int n = 1; n <= 3; ++n) {
        if (query_text.size() < static_cast<size_t>(n)) break;
        for (size_t i = 0; i + static_cast<size_t>(n) <= query_text.size(); ++i) {
            const uint64_t h = fnv1a64(query_text.substr(i, static_cast<size_t>(n)));
            x.values[h % static_cast<uint64_t>(dim)] += 1.0;
        }
    }
    double norm2 = 0.0;
    for (double v : x.values) norm2 += v * v;
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : x.values) v *= inv;
    }
    return x;
}

namespace {

std::vector<FeatureVector> featurize_batch_impl(std::span<const std::string> texts, int dim,
                                                bool parallel) {
    std::vector<FeatureVector> out(texts.size());
    auto body = [&](size_t i) { out[i] = featurize(texts[i], dim); };
    if (parallel) {
        parallel_for(texts.size(), body);
    } else {
        for (size_t i = 0; i < texts.size(); ++i) body(i);
    }
    return out;
}

}  // namespace

std::vector<FeatureVector> featurize_batch(std::span<const std::string> texts, int dim) {
    return featurize_batch_impl(texts, dim, true);
}

std::vector<FeatureVector> featurize_batch_serial(std::span<const std::string> texts, int dim) {
    return featurize_batch_impl(texts, dim, false);
}

PolicyParams PolicyParams::zeros(int input_dim, int hidden_dim, int num_arms) {
    if (input_dim < 1 || hidden_dim < 1 || num_arms < 1)
        throw std::invalid_argument("policy dims must be >= 1");
    PolicyParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    p.num_arms = num_arms;
    p.w1.assign(static_cast<size_t>(input_dim) * hidden_dim, 0.0);
    p.b1.assign(static_cast<size_t>(hidden_dim), 0.0);
    p.w2.assign(static_cast<size_t>(hidden_dim) * hidden_dim, 0.0);
    p.b2.assign(static_cast<size_t>(hidden_dim), 0.0);
    p.w3.assign(static_cast<size_t>(hidden_dim) * num_arms, 0.0);
    p.b3.assign(static_cast<size_t>(num_arms), 0.0);
    return p;
}

bool PolicyParams::shape_matches(const PolicyParams& other) const {
    return input_dim == other.input_dim && hidden_dim == other.hidden_dim &&
           num_arms == other.num_arms;
}

namespace {

struct ForwardState {
    std::vector<double> h1, h2, probs;
    double log_prob(int arm) const { return logits_max_shifted[static_cast<size_t>(arm)]; }
    std::vector<double> logits_max_shifted;  // log softmax values
};

ForwardState forward_full(const PolicyParams& p, const FeatureVector& x) {
    if (static_cast<int>(x.values.size()) != p.input_dim)
        throw std::invalid_argument("feature dimension does not match policy input_dim");
    const int D = p.input_dim, H = p.hidden_dim, K = p.num_arms;
    ForwardState s;
    s.h1.assign(static_cast<size_t>(H), 0.0);
    s.h2.assign(static_cast<size_t>(H), 0.0);

    for (int d = 0; d < D; ++d) {
        const double xv = x.values[static_cast<size_t>(d)];
        if (xv == 0.0) continue;
        const double* row = &p.w1[static_cast<size_t>(d) * H];
        for (int h = 0; h < H; ++h) s.h1[static_cast<size_t>(h)] += xv * row[h];
    }
    for (int h = 0; h < H; ++h)
        s.h1[static_cast<size_t>(h)] = std::tanh(s.h1[static_cast<size_t>(h)] + p.b1[static_cast<size_t>(h)]);

    for (int h = 0; h < H; ++h) {
        const double hv = s.h1[static_cast<size_t>(h)];
        const double* row = &p.w2[static_cast<size_t>(h) * H];
        for (int g = 0; g < H; ++g) s.h2[static_cast<size_t>(g)] += hv * row[g];
    }
    for (int g = 0; g < H; ++g)
        s.h2[static_cast<size_t>(g)] = std::tanh(s.h2[static_cast<size_t>(g)] + p.b2[static_cast<size_t>(g)]);

    std::vector<double> z(static_cast<size_t>(K), 0.0);
    for (int g = 0; g < H; ++g) {
        const double hv = s.h2[static_cast<size_t>(g)];
        const double* row = &p.w3[static_cast<size_t>(g) * K];
        for (int a = 0; a < K; ++a) z[static_cast<size_t>(a)] += hv * row[a];
    }
    for (int a = 0; a < K; ++a) z[static_cast<size_t>(a)] += p.b3[static_cast<size_t>(a)];

    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - zmax);
    const double log_sum = std::log(sum);
    s.probs.resize(static_cast<size_t>(K));
    s.logits_max_shifted.resize(static_cast<size_t>(K));
    for (int a = 0; a < K; ++a) {
        s.logits_max_shifted[static_cast<size_t>(a)] = z[static_cast<size_t>(a)] - zmax - log_sum;
        s.probs[static_cast<size_t>(a)] = std::exp(s.logits_max_shifted[static_cast<size_t>(a)]);
    }
    return s;
}

// adds the gradient of -scale * log pi(a | x) into grad
void accumulate_sample(const PolicyParams& p, const FeatureVector& x, int arm,
                       double scale, PolicyParams& grad) {
    const int D = p.input_dim, H = p.hidden_dim, K = p.num_arms;
    if (arm < 0 || arm >= K) throw std::invalid_argument("arm_index out of range");
    const ForwardState s = forward_full(p, x);

    std::vector<double> dz3(static_cast<size_t>(K));
    for (int a = 0; a < K; ++a)
        dz3[static_cast<size_t>(a)] =
            scale * (s.probs[static_cast<size_t>(a)] - (a == arm ? 1.0 : 0.0));

    std::vector<double> dh2(static_cast<size_t>(H), 0.0);
    for (int g = 0; g < H; ++g) {
        const double hv = s.h2[static_cast<size_t>(g)];
        double* grow = &grad.w3[static_cast<size_t>(g) * K];
        const double* wrow = &p.w3[static_cast<size_t>(g) * K];
        double acc = 0.0;
        for (int a = 0; a < K; ++a) {
            grow[a] += hv * dz3[static_cast<size_t>(a)];
            acc += wrow[a] * dz3[static_cast<size_t>(a)];
        }
        dh2[static_cast<size_t>(g)] = acc;
    }
    for (int a = 0; a < K; ++a) grad.b3[static_cast<size_t>(a)] += dz3[static_cast<size_t>(a)];

    std::vector<double> dz2(static_cast<size_t>(H));
    for (int g = 0; g < H; ++g) {
        const double hv = s.h2[static_cast<size_t>(g)];
        dz2[static_cast<size_t>(g)] = dh2[static_cast<size_t>(g)] * (1.0 - hv * hv);
    }

    std::vector<double> dh1(static_cast<size_t>(H), 0.0);
    for (int h = 0; h < H; ++h) {
        const double hv = s.h1[static_cast<size_t>(h)];
        double* grow = &grad.w2[static_cast<size_t>(h) * H];
        const double* wrow = &p.w2[static_cast<size_t>(h) * H];
        double acc = 0.0;
        for (int g = 0; g < H; ++g) {
            grow[g] += hv * dz2[static_cast<size_t>(g)];
            acc += wrow[g] * dz2[static_cast<size_t>(g)];
        }
        dh1[static_cast<size_t>(h)] = acc;
    }
    for (int g = 0; g < H; ++g) grad.b2[static_cast<size_t>(g)] += dz2[static_cast<size_t>(g)];

    std::vector<double> dz1(static_cast<size_t>(H));
    for (int h = 0; h < H; ++h) {
        const double hv = s.h1[static_cast<size_t>(h)];
        dz1[static_cast<size_t>(h)] = dh1[static_cast<size_t>(h)] * (1.0 - hv * hv);
    }
    for (int d = 0; d < D; ++d) {
        const double xv = x.values[static_cast<size_t>(d)];
        if (xv == 0.0) continue;
        double* grow = &grad.w1[static_cast<size_t>(d) * H];
        for (int h = 0; h < H; ++h) grow[h] += xv * dz1[static_cast<size_t>(h)];
    }
    for (int h = 0; h < H; ++h) grad.b1[static_cast<size_t>(h)] += dz1[static_cast<size_t>(h)];
}

void add_into(PolicyParams& acc, const PolicyParams& inc) {
    auto add = [](std::vector<double>& a, const std::vector<double>& b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(acc.w1, inc.w1);
    add(acc.b1, inc.b1);
    add(acc.w2, inc.w2);
    add(acc.b2, inc.b2);
    add(acc.w3, inc.w3);
    add(acc.b3, inc.b3);
}

constexpr size_t kGradChunk = 16;

PolicyParams reinforce_grad_impl(const PolicyParams& params,
                                 std::span<const TrainSample> batch, bool parallel) {
    if (batch.empty()) throw std::invalid_argument("reinforce_grad: empty batch");
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    const size_t n_chunks = (batch.size() + kGradChunk - 1) / kGradChunk;

    std::vector<PolicyParams> partials(n_chunks);
    auto body = [&](size_t c) {
        PolicyParams part =
            PolicyParams::zeros(params.input_dim, params.hidden_dim, params.num_arms);
        const size_t lo = c * kGradChunk;
        const size_t hi = std::min(batch.size(), lo + kGradChunk);
        for (size_t i = lo; i < hi; ++i)
            accumulate_sample(params, batch[i].x, batch[i].arm_index,
                              batch[i].reward * inv_b, part);
        partials[c] = std::move(part);
    };
    if (parallel) {
        parallel_for(n_chunks, body);
    } else {
        for (size_t c = 0; c < n_chunks; ++c) body(c);
    }

    PolicyParams grad = std::move(partials[0]);
    for (size_t c = 1; c < n_chunks; ++c) add_into(grad, partials[c]);
    return grad;
}

}  // namespace

std::vector<double> policy_forward(const PolicyParams& params, const FeatureVector& x) {
    return forward_full(params, x).probs;
}

double reinforce_loss(const PolicyParams& params, std::span<const TrainSample> batch) {
    if (batch.empty()) throw std::invalid_argument("reinforce_loss: empty batch");
    double loss = 0.0;
    for (const auto& sample : batch) {
        if (sample.arm_index < 0 || sample.arm_index >= params.num_arms)
            throw std::invalid_argument("arm_index out of range");
        const ForwardState s = forward_full(params, sample.x);
        loss -= sample.reward * s.log_prob(sample.arm_index);
    }
    return loss / static_cast<double>(batch.size());
}

PolicyParams reinforce_grad(const PolicyParams& params, std::span<const TrainSample> batch) {
    return reinforce_grad_impl(params, batch, true);
}

PolicyParams reinforce_grad_serial(const PolicyParams& params,
                                   std::span<const TrainSample> batch) {
    return reinforce_grad_impl(params, batch, false);
}

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (weight_decay < 0.0) throw std::invalid_argument("weight_decay must be >= 0");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw std::invalid_argument("betas must be in (0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

AdamW::AdamW(const PolicyParams& like, const TrainConfig& cfg)
    : cfg_(cfg),
      m_(PolicyParams::zeros(like.input_dim, like.hidden_dim, like.num_arms)),
      v_(PolicyParams::zeros(like.input_dim, like.hidden_dim, like.num_arms)) {}

void AdamW::step(PolicyParams& params, const PolicyParams& grad) {
    if (!params.shape_matches(grad) || !params.shape_matches(m_))
        throw std::invalid_argument("optimizer shape mismatch");

    if (cfg_.optimizer == OptimizerKind::sgd) {
        auto upd = [&](std::vector<double>& w, const std::vector<double>& g) {
            for (size_t i = 0; i < w.size(); ++i) w[i] -= cfg_.learning_rate * g[i];
        };
        upd(params.w1, grad.w1);
        upd(params.b1, grad.b1);
        upd(params.w2, grad.w2);
        upd(params.b2, grad.b2);
        upd(params.w3, grad.w3);
        upd(params.b3, grad.b3);
        return;
    }

    t_ += 1;
    const double decay_factor = 1.0 - cfg_.learning_rate * cfg_.weight_decay;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    auto upd = [&](std::vector<double>& w, const std::vector<double>& g,
                   std::vector<double>& m, std::vector<double>& v) {
        for (size_t i = 0; i < w.size(); ++i) {
            w[i] *= decay_factor;  // decoupled decay, applied to the weight itself
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            w[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
        }
    };
    upd(params.w1, grad.w1, m_.w1, v_.w1);
    upd(params.b1, grad.b1, m_.b1, v_.b1);
    upd(params.w2, grad.w2, m_.w2, v_.w2);
    upd(params.b2, grad.b2, m_.b2, v_.b2);
    upd(params.w3, grad.w3, m_.w3, v_.w3);
    upd(params.b3, grad.b3, m_.b3, v_.b3);
}

namespace {

PolicyParams init_params(int input_dim, int hidden_dim, int num_arms, uint64_t seed) {
    PolicyParams p = PolicyParams::zeros(input_dim, hidden_dim, num_arms);
    MtRandomSource rng(derive_seed(seed, "policy-init"));
    auto fill = [&](std::vector<double>& w, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& v : w) v = (2.0 * rng.next_unit() - 1.0) * bound;
    };
    fill(p.w1, input_dim);
    fill(p.w2, hidden_dim);
    fill(p.w3, hidden_dim);
    return p;  // biases stay zero
}

}  // namespace

PolicyParams train_policy(const RewardDataset& dataset, const TrainConfig& cfg,
                          int feature_dim, int hidden_dim, TrainReport* report) {
    cfg.validate();
    if (dataset.records.empty()) throw std::invalid_argument("train_policy: empty dataset");
    if (dataset.num_arms < 1) throw std::invalid_argument("train_policy: k must be >= 1");
    for (const auto& rec : dataset.records)
        if (rec.arm_index < 0 || rec.arm_index >= dataset.num_arms)
            throw std::invalid_argument("record arm_index inconsistent with dataset k");

    std::vector<std::string> texts;
    texts.reserve(dataset.records.size());
    for (const auto& rec : dataset.records) texts.push_back(rec.query_text);
    std::vector<FeatureVector> features = featurize_batch(texts, feature_dim);

    std::vector<TrainSample> samples(dataset.records.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        samples[i].x = std::move(features[i]);
        samples[i].arm_index = dataset.records[i].arm_index;
        samples[i].reward = dataset.records[i].reward;
    }

    PolicyParams params = init_params(feature_dim, hidden_dim, dataset.num_arms, cfg.seed);
    AdamW optimizer(params, cfg);
    if (report) {
        report->epoch_loss.clear();
        report->epoch_loss.push_back(reinforce_loss(params, samples));
    }

    std::vector<size_t> order(samples.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::mt19937_64 shuffle_engine(derive_seed(cfg.seed, "minibatch-shuffle"));

    std::vector<TrainSample> batch;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        deterministic_shuffle(order, shuffle_engine);
        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
            const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
            batch.clear();
            for (size_t i = start; i < end; ++i) batch.push_back(samples[order[i]]);
            if (cfg.mean_baseline) {
                double mean = 0.0;
                for (const auto& s : batch) mean += s.reward;
                mean /= static_cast<double>(batch.size());
                for (auto& s : batch) s.reward -= mean;
            }
            const PolicyParams grad = reinforce_grad(params, batch);
            optimizer.step(params, grad);
        }
        if (report) report->epoch_loss.push_back(reinforce_loss(params, samples));
    }
    return params;
}

namespace {

void write_matrix(std::ofstream& f, const std::vector<double>& w, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c) f << ' ';
            f << format_real(w[static_cast<size_t>(r) * cols + c]);
        }
        f << '\n';
    }
}

void read_matrix(std::istream& f, std::vector<double>& w, int rows, int cols,
                 const std::string& what) {
    w.resize(static_cast<size_t>(rows) * cols);
    std::string line;
    for (int r = 0; r < rows; ++r) {
        if (!std::getline(f, line))
            throw std::runtime_error("policy file truncated in " + what);
        std::istringstream ls(line);
        std::string field;
        for (int c = 0; c < cols; ++c) {
            if (!(ls >> field))
                throw std::runtime_error("policy file: short row in " + what);
            w[static_cast<size_t>(r) * cols + c] = parse_real(field);
        }
        if (ls >> field) throw std::runtime_error("policy file: long row in " + what);
    }
}

}  // namespace

void save_policy(const std::filesystem::path& path, const PolicyParams& params) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << "policy v1 " << params.input_dim << ' ' << params.hidden_dim << ' '
      << params.num_arms << '\n';
    write_matrix(f, params.w1, params.input_dim, params.hidden_dim);
    write_matrix(f, params.b1, 1, params.hidden_dim);
    write_matrix(f, params.w2, params.hidden_dim, params.hidden_dim);
    write_matrix(f, params.b2, 1, params.hidden_dim);
    write_matrix(f, params.w3, params.hidden_dim, params.num_arms);
    write_matrix(f, params.b3, 1, params.num_arms);
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

PolicyParams load_policy(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open policy file: " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty policy file");
    std::istringstream header(line);
    std::string magic, version;
    int d = 0, h = 0, k = 0;
    header >> magic >> version >> d >> h >> k;
    if (!header || magic != "policy" || version != "v1" || d < 1 || h < 1 || k < 1)
        throw std::runtime_error("bad policy header: " + path.string());
    PolicyParams p = PolicyParams::zeros(d, h, k);
    read_matrix(f, p.w1, d, h, "w1");
    read_matrix(f, p.b1, 1, h, "b1");
    read_matrix(f, p.w2, h, h, "w2");
    read_matrix(f, p.b2, 1, h, "b2");
    read_matrix(f, p.w3, h, k, "w3");
    read_matrix(f, p.b3, 1, k, "b3");
    return p;
}

}  // namespace specrouter
