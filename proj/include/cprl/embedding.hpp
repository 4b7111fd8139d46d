#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "cprl/constraints.hpp"

namespace cprl::embed {

using Embedding = Eigen::VectorXd;

// cosine_sim(a, b) = a.b / (|a||b|). Throws std::invalid_argument on
// dimension mismatch or a zero vector; result is clamped into [-1, 1].
double cosine_sim(const Embedding& a, const Embedding& b);

// Text-embedding backend. `embed` is logically read-only: implementations
// may cache internally but must not change what any text maps to.
class TextEncoder {
public:
    virtual ~TextEncoder() = default;
    virtual int dim() const = 0;
    virtual Embedding embed(const std::string& text) const = 0;
};

// Tokenized text as vocabulary slot indices, multiplicity preserved.
struct TokenizedText {
    std::vector<int> slots;
};

struct TokenizedPair {
    TokenizedText a;
    TokenizedText b;
    int label = 0;
};

// Hashed bag-of-tokens embedder with a trainable slot table. Pooling is the
// mean over token slots followed by L2 normalization, so emitted embeddings
// have unit norm.
class LocalEmbedder final : public TextEncoder {
public:
    static constexpr int kDefaultSlots = 512;
    static constexpr int kDefaultDim = 32;

    LocalEmbedder(int vocab_slots, int dim, std::uint64_t seed);

    int dim() const override { return static_cast<int>(table_.cols()); }
    int slots() const { return static_cast<int>(table_.rows()); }

    Embedding embed(const std::string& text) const override;

    int slot_for_token(const std::string& token) const;
    TokenizedText tokenize_to_slots(const std::string& text) const;

    const Eigen::MatrixXd& table() const { return table_; }
    void set_table(Eigen::MatrixXd table);

    // Versioned binary state: header (magic, version, V, d), row-major body.
    void save(const std::string& path) const;
    static LocalEmbedder load(const std::string& path);

private:
    Eigen::MatrixXd table_;  // V x d
    mutable std::unordered_map<std::string, Embedding> cache_;
};

// Eq.-2 style contrastive loss over already-embedded pairs:
// (1/n) * sum_i 1/2 (Y_i - cos(a_i, b_i))^2.
struct EmbeddedPair {
    Embedding a;
    Embedding b;
    int label = 0;
};
double contrastive_loss(const std::vector<EmbeddedPair>& pairs);

// Same loss expressed against a slot table, differentiable through
// tokenize -> mean-pool -> normalize -> cosine. `grad`, when non-null, is
// filled with d(loss)/d(table).
double pair_batch_loss(const Eigen::MatrixXd& table, const std::vector<TokenizedPair>& pairs,
                       Eigen::MatrixXd* grad = nullptr);

struct FinetuneOptions {
    int iterations = 10;
    int pairs_per_iteration = 128;
    double lr = 0.1;
    std::uint64_t seed = 0;
};

struct FinetuneReport {
    int iterations = 0;
    int pairs_per_iteration = 0;
    std::vector<double> losses;  // batch loss at the start of each iteration
};

// Plain gradient descent on the contrastive loss; each iteration draws a
// fresh seeded batch via generate_pairs. Throws on non-finite loss/gradient.
FinetuneReport finetune(LocalEmbedder& backend, const lang::CondensedCorpus& corpus,
                        const FinetuneOptions& options);

// Frozen-backend fine-tuning: a trainable d x d projection applied after the
// base encoder, trained with the same loss and gradient contract.
struct RawPair {
    Embedding a;
    Embedding b;
    int label = 0;
};

double projection_loss(const Eigen::MatrixXd& projection, const std::vector<RawPair>& pairs,
                       Eigen::MatrixXd* grad = nullptr);

class ProjectedEncoder final : public TextEncoder {
public:
    explicit ProjectedEncoder(std::shared_ptr<TextEncoder> base);

    int dim() const override { return base_->dim(); }
    Embedding embed(const std::string& text) const override;

    const Eigen::MatrixXd& projection() const { return projection_; }
    void set_projection(Eigen::MatrixXd p);
    TextEncoder& base() { return *base_; }

private:
    std::shared_ptr<TextEncoder> base_;
    mutable Eigen::MatrixXd projection_;  // lazily sized identity on first embed
    mutable std::unordered_map<std::string, Embedding> cache_;
};

FinetuneReport finetune_projection(ProjectedEncoder& encoder, const lang::CondensedCorpus& corpus,
                                   const FinetuneOptions& options);

}  // namespace cprl::embed
