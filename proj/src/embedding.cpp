#include "cprl/embedding.hpp"

#include <cmath>
#include <stdexcept>

#include "cprl/io.hpp"
#include "cprl/rng.hpp"

namespace cprl::embed {

double cosine_sim(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine_sim: dimension mismatch");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine_sim undefined for zero vectors");
    const double c = a.dot(b) / (na * nb);
    return std::min(1.0, std::max(-1.0, c));
}

LocalEmbedder::LocalEmbedder(int vocab_slots, int dim, std::uint64_t seed) {
    if (vocab_slots < 1 || dim < 1) throw std::invalid_argument("embedder needs positive V and d");
    table_.resize(vocab_slots, dim);
    Rng rng(seed);
    // Small initial scale keeps initial cosines near zero, so prediction
    // starts conservative-negative relative to the threshold.
    for (int r = 0; r < table_.rows(); ++r)
        for (int c = 0; c < table_.cols(); ++c) table_(r, c) = rng.uniform(-0.05, 0.05);
}

int LocalEmbedder::slot_for_token(const std::string& token) const {
    return static_cast<int>(fnv1a64(token) % static_cast<std::uint64_t>(table_.rows()));
}

TokenizedText LocalEmbedder::tokenize_to_slots(const std::string& text) const {
    TokenizedText out;
    for (const auto& tok : lang::tokenize(text)) out.slots.push_back(slot_for_token(tok));
    return out;
}

namespace {

Eigen::VectorXd pooled(const Eigen::MatrixXd& table, const TokenizedText& t) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(table.cols());
    for (int s : t.slots) u += table.row(s).transpose();
    return u / static_cast<double>(t.slots.size());
}

}  // namespace

Embedding LocalEmbedder::embed(const std::string& text) const {
    if (auto it = cache_.find(text); it != cache_.end()) return it->second;
    const TokenizedText toks = tokenize_to_slots(text);
    if (toks.slots.empty()) throw std::invalid_argument("embed: text has no tokens: '" + text + "'");
    Eigen::VectorXd u = pooled(table_, toks);
    const double n = u.norm();
    if (n < 1e-300) throw std::runtime_error("embed: degenerate zero pooled vector");
    u /= n;
    cache_.emplace(text, u);
    return u;
}

void LocalEmbedder::set_table(Eigen::MatrixXd table) {
    if (table.rows() < 1 || table.cols() < 1) throw std::invalid_argument("empty embedder table");
    table_ = std::move(table);
    cache_.clear();
}

namespace {
constexpr char kEmbedderMagic[8] = {'C', 'P', 'R', 'L', 'E', 'M', 'B', '1'};
constexpr std::uint32_t kEmbedderVersion = 1;
}  // namespace

void LocalEmbedder::save(const std::string& path) const {
    auto os = io::open_out(path);
    io::write_magic(os, kEmbedderMagic);
    io::write_u32(os, kEmbedderVersion);
    io::write_u32(os, static_cast<std::uint32_t>(table_.rows()));
    io::write_u32(os, static_cast<std::uint32_t>(table_.cols()));
    for (int r = 0; r < table_.rows(); ++r)
        for (int c = 0; c < table_.cols(); ++c) io::write_f64(os, table_(r, c));
    if (!os) throw std::runtime_error("failed writing embedder state: " + path);
}

LocalEmbedder LocalEmbedder::load(const std::string& path) {
    auto is = io::open_in(path);
    io::expect_magic(is, kEmbedderMagic, "embedder state");
    const std::uint32_t version = io::read_u32(is);
    if (version != kEmbedderVersion)
        throw std::runtime_error("unsupported embedder state version " + std::to_string(version));
    const auto rows = static_cast<int>(io::read_u32(is));
    const auto cols = static_cast<int>(io::read_u32(is));
    LocalEmbedder out(rows, cols, 0);
    Eigen::MatrixXd table(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) table(r, c) = io::read_f64(is);
    out.set_table(std::move(table));
    return out;
}

double contrastive_loss(const std::vector<EmbeddedPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("contrastive_loss: no pairs");
    double total = 0.0;
    for (const auto& p : pairs) {
        const double gap = static_cast<double>(p.label) - cosine_sim(p.a, p.b);
        total += 0.5 * gap * gap;
    }
    return total / static_cast<double>(pairs.size());
}

double pair_batch_loss(const Eigen::MatrixXd& table, const std::vector<TokenizedPair>& pairs,
                       Eigen::MatrixXd* grad) {
    if (pairs.empty()) throw std::invalid_argument("pair_batch_loss: no pairs");
    if (grad) grad->setZero(table.rows(), table.cols());

    const double inv_n = 1.0 / static_cast<double>(pairs.size());
    double loss = 0.0;
    for (const auto& p : pairs) {
        if (p.a.slots.empty() || p.b.slots.empty())
            throw std::invalid_argument("pair_batch_loss: empty tokenization");
        const Eigen::VectorXd u = pooled(table, p.a);
        const Eigen::VectorXd v = pooled(table, p.b);
        const double nu = u.norm();
        const double nv = v.norm();
        if (nu < 1e-300 || nv < 1e-300) throw std::runtime_error("pair_batch_loss: zero pooled vector");
        const Eigen::VectorXd uh = u / nu;
        const Eigen::VectorXd vh = v / nv;
        const double cos = uh.dot(vh);
        const double gap = static_cast<double>(p.label) - cos;
        loss += 0.5 * gap * gap * inv_n;

        if (!grad) continue;
        // dL/dcos = -(Y - cos)/n; dcos/du = (v_hat - cos*u_hat)/|u| and
        // du/d(row s) = multiplicity(s)/m * I, likewise for v.
        const double dl_dcos = -gap * inv_n;
        const Eigen::VectorXd du = dl_dcos / nu * (vh - cos * uh);
        const Eigen::VectorXd dv = dl_dcos / nv * (uh - cos * vh);
        const double inv_ma = 1.0 / static_cast<double>(p.a.slots.size());
        const double inv_mb = 1.0 / static_cast<double>(p.b.slots.size());
        for (int s : p.a.slots) grad->row(s) += inv_ma * du.transpose();
        for (int s : p.b.slots) grad->row(s) += inv_mb * dv.transpose();
    }
    return loss;
}

namespace {

std::vector<TokenizedPair> tokenize_pairs(const LocalEmbedder& backend,
                                          const std::vector<lang::ConstraintPair>& pairs) {
    std::vector<TokenizedPair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs)
        out.push_back({backend.tokenize_to_slots(p.a.text), backend.tokenize_to_slots(p.b.text),
                       p.label});
    return out;
}

}  // namespace

FinetuneReport finetune(LocalEmbedder& backend, const lang::CondensedCorpus& corpus,
                        const FinetuneOptions& options) {
    if (options.iterations < 0 || options.pairs_per_iteration < 1)
        throw std::invalid_argument("finetune: bad schedule");
    FinetuneReport report;
    report.iterations = options.iterations;
    report.pairs_per_iteration = options.pairs_per_iteration;

    Eigen::MatrixXd table = backend.table();
    Eigen::MatrixXd grad;
    for (int it = 0; it < options.iterations; ++it) {
        const auto pairs = lang::generate_pairs(corpus, options.pairs_per_iteration,
                                                mix_seed(options.seed, "finetune-batch", it));
        const auto tokenized = tokenize_pairs(backend, pairs);
        const double loss = pair_batch_loss(table, tokenized, &grad);
        if (!std::isfinite(loss) || !grad.allFinite())
            throw std::runtime_error("finetune: non-finite loss or gradient at iteration " +
                                     std::to_string(it + 1));
        report.losses.push_back(loss);
        table -= options.lr * grad;
    }
    backend.set_table(std::move(table));
    return report;
}

double projection_loss(const Eigen::MatrixXd& projection, const std::vector<RawPair>& pairs,
                       Eigen::MatrixXd* grad) {
    if (pairs.empty()) throw std::invalid_argument("projection_loss: no pairs");
    if (grad) grad->setZero(projection.rows(), projection.cols());

    const double inv_n = 1.0 / static_cast<double>(pairs.size());
    double loss = 0.0;
    for (const auto& p : pairs) {
        const Eigen::VectorXd a = projection * p.a;
        const Eigen::VectorXd b = projection * p.b;
        const double na = a.norm();
        const double nb = b.norm();
        if (na < 1e-300 || nb < 1e-300) throw std::runtime_error("projection_loss: zero projected vector");
        const Eigen::VectorXd ah = a / na;
        const Eigen::VectorXd bh = b / nb;
        const double cos = ah.dot(bh);
        const double gap = static_cast<double>(p.label) - cos;
        loss += 0.5 * gap * gap * inv_n;

        if (!grad) continue;
        const double dl_dcos = -gap * inv_n;
        const Eigen::VectorXd da = dl_dcos / na * (bh - cos * ah);
        const Eigen::VectorXd db = dl_dcos / nb * (ah - cos * bh);
        grad->noalias() += da * p.a.transpose();
        grad->noalias() += db * p.b.transpose();
    }
    return loss;
}

ProjectedEncoder::ProjectedEncoder(std::shared_ptr<TextEncoder> base) : base_(std::move(base)) {
    if (!base_) throw std::invalid_argument("ProjectedEncoder needs a base encoder");
}

Embedding ProjectedEncoder::embed(const std::string& text) const {
    if (auto it = cache_.find(text); it != cache_.end()) return it->second;
    const Embedding raw = base_->embed(text);
    if (projection_.size() == 0)
        projection_ = Eigen::MatrixXd::Identity(raw.size(), raw.size());
    Embedding out = projection_ * raw;
    cache_.emplace(text, out);
    return out;
}

void ProjectedEncoder::set_projection(Eigen::MatrixXd p) {
    if (p.rows() != p.cols()) throw std::invalid_argument("projection must be square");
    projection_ = std::move(p);
    cache_.clear();
}

FinetuneReport finetune_projection(ProjectedEncoder& encoder, const lang::CondensedCorpus& corpus,
                                   const FinetuneOptions& options) {
    FinetuneReport report;
    report.iterations = options.iterations;
    report.pairs_per_iteration = options.pairs_per_iteration;

    // Base embeddings are frozen; only the projection head trains.
    std::unordered_map<std::string, Embedding> raw;
    const auto raw_of = [&](const std::string& text) -> const Embedding& {
        auto it = raw.find(text);
        if (it == raw.end()) it = raw.emplace(text, encoder.base().embed(text)).first;
        return it->second;
    };

    Eigen::MatrixXd projection = encoder.projection();
    Eigen::MatrixXd grad;
    for (int it = 0; it < options.iterations; ++it) {
        const auto pairs = lang::generate_pairs(corpus, options.pairs_per_iteration,
                                                mix_seed(options.seed, "finetune-batch", it));
        std::vector<RawPair> batch;
        batch.reserve(pairs.size());
        for (const auto& p : pairs) batch.push_back({raw_of(p.a.text), raw_of(p.b.text), p.label});
        if (projection.size() == 0) {
            const auto d = batch.front().a.size();
            projection = Eigen::MatrixXd::Identity(d, d);
        }
        const double loss = projection_loss(projection, batch, &grad);
        if (!std::isfinite(loss) || !grad.allFinite())
            throw std::runtime_error("finetune_projection: non-finite loss or gradient at iteration " +
                                     std::to_string(it + 1));
        report.losses.push_back(loss);
        projection -= options.lr * grad;
    }
    encoder.set_projection(std::move(projection));
    return report;
}

}  // namespace cprl::embed
