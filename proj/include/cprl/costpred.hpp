#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cprl/constraints.hpp"
#include "cprl/descriptor.hpp"
#include "cprl/embedding.hpp"
#include "cprl/gridworld.hpp"

namespace cprl::cost {

struct CostPredictorConfig {
    // 0.4 for the grid task; the robot-control environment in the source
    // evaluation used 0.55 (kept here for reference, env out of scope).
    double threshold = 0.4;

    void validate() const;  // threshold finite, in (-1, 1)
};

// Predicted cost: 1 iff cosine_sim(h_c, h_o) > threshold (strict).
int predict_cost(const embed::Embedding& h_c, const embed::Embedding& h_o,
                 const CostPredictorConfig& config);

struct ConfusionCounts {
    long tp = 0, fp = 0, fn = 0, tn = 0;  // positive = violation (c-hat = 1)

    long total() const { return tp + fp + fn + tn; }
    void add(int predicted, int actual);
    void merge(const ConfusionCounts& other);
};

struct Metrics {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

std::optional<double> f1_from_pr(std::optional<double> precision, std::optional<double> recall);
Metrics metrics(const ConfusionCounts& counts);

struct EvalOptions {
    grid::GridConfig env;
    int episodes = 50;
    std::uint64_t seed = 0;
};

// One evaluation step: which constraint was active, what happened, and the
// oracle verdict. Trajectories depend only on (env config, seed), so the
// same stream can score different predictors or thresholds.
struct EvalStep {
    int constraint_index = 0;
    grid::Event event = grid::Event::Moved;
    int oracle = 0;
};

// Rolls seeded uniform-random-policy episodes (fresh grid per episode) and
// records the per-step stream. The oracle is observed here for evaluation
// only; nothing feeds back into any model state.
std::vector<EvalStep> record_random_policy_stream(const lang::CondensedCorpus& corpus,
                                                  const EvalOptions& options);

// Scores a recorded stream with describe -> embed -> predict_cost.
ConfusionCounts evaluate_stream(const embed::TextEncoder& backend,
                                const lang::CondensedCorpus& corpus,
                                const text::TemplateTable& templates,
                                const std::vector<EvalStep>& stream,
                                const CostPredictorConfig& config);

ConfusionCounts evaluate_predictor(const embed::TextEncoder& backend,
                                   const lang::CondensedCorpus& corpus,
                                   const text::TemplateTable& templates, const EvalOptions& options,
                                   const CostPredictorConfig& config);

}  // namespace cprl::cost
