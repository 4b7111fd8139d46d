#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cprl/gridworld.hpp"

namespace cprl::lang {

using ConstraintId = int;

// A free-form prohibition plus its label. The label is used only for pair
// labeling and evaluation, never inside the cost prediction path.
struct Constraint {
    ConstraintId id = -1;
    std::string text;
    grid::Hazard prohibited = grid::Hazard::Lava;
};

struct CondensedConstraint {
    std::string text;
    ConstraintId origin = -1;
};

struct ConstraintPair {
    CondensedConstraint a;
    CondensedConstraint b;
    int label = 0;  // 1 iff both origins prohibit the same hazard
};

struct LoadedCorpus {
    std::vector<Constraint> items;
    std::vector<std::string> warnings;  // advisory, e.g. missing hazard coverage
};

// Corpus file: one record per line, `<hazard-label> <TAB> <free-form text>`.
// '#' lines are comments. Throws std::runtime_error on malformed or empty input.
LoadedCorpus load_corpus(const std::string& path);

// Synonym table mapping word sequences to the hazard they refer to.
class Lexicon {
public:
    static Lexicon builtin();
    // Plain-text file: `<hazard-label> <TAB> <phrase>` per line.
    static Lexicon load(const std::string& path);

    void add(grid::Hazard h, const std::string& phrase);

    struct Phrase {
        std::vector<std::string> tokens;
        grid::Hazard hazard;
    };
    const std::vector<Phrase>& phrases() const { return phrases_; }

private:
    std::vector<Phrase> phrases_;
};

// Lowercase alphanumeric word split shared by the condenser and the embedder.
std::vector<std::string> tokenize(const std::string& text);

std::string canonical_form(grid::Hazard h);  // "do not touch <hazard> tiles"

enum class CondenseStatus { Ok, NoMatch, Ambiguous };

struct CondenseResult {
    CondenseStatus status = CondenseStatus::NoMatch;
    CondensedConstraint value;  // valid only when status == Ok
};

// Rule-based condenser: scans the constraint for lexicon phrases and emits
// the canonical form for the single hazard that matched.
CondenseResult condense_rule(const Constraint& c, const Lexicon& lexicon);

enum class CondenserKind { Rule, Remote, Identity };
bool condenser_from_string(const std::string& s, CondenserKind& out);
const char* to_string(CondenserKind k);

// A corpus together with its condensed texts, index-aligned.
struct CondensedCorpus {
    std::vector<Constraint> source;
    std::vector<CondensedConstraint> condensed;
    std::vector<ConstraintId> identity_fallbacks;  // items the rule condenser could not match

    std::size_t size() const { return source.size(); }
};

// Applies the rule condenser to every item, falling back to the original
// text where no lexicon phrase matches (recorded in identity_fallbacks).
CondensedCorpus condense_with_rule(const std::vector<Constraint>& corpus, const Lexicon& lexicon);
CondensedCorpus condense_identity(const std::vector<Constraint>& corpus);

// Seeded, label-balanced pair sampling (half positive, half negative, the
// odd pair positive). Throws std::runtime_error when the corpus covers fewer
// than two hazards (no negatives possible).
std::vector<ConstraintPair> generate_pairs(const CondensedCorpus& corpus, int count,
                                           std::uint64_t seed);

}  // namespace cprl::lang
