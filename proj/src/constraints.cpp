#include "cprl/constraints.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

#include "cprl/rng.hpp"

namespace cprl::lang {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

LoadedCorpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus: " + path);
    LoadedCorpus out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("corpus line " + std::to_string(lineno) +
                                     ": expected <hazard><TAB><text>");
        const std::string label = line.substr(0, tab);
        const std::string text = line.substr(tab + 1);
        grid::Hazard hazard;
        if (!grid::hazard_from_string(label, hazard))
            throw std::runtime_error("corpus line " + std::to_string(lineno) +
                                     ": unknown hazard label '" + label + "'");
        if (text.empty())
            throw std::runtime_error("corpus line " + std::to_string(lineno) + ": empty constraint text");
        out.items.push_back({static_cast<ConstraintId>(out.items.size()), text, hazard});
    }
    if (out.items.empty()) throw std::runtime_error("corpus is empty: " + path);

    bool seen[grid::kHazardCount] = {false, false, false};
    for (const auto& c : out.items) seen[static_cast<int>(c.prohibited)] = true;
    for (int h = 0; h < grid::kHazardCount; ++h)
        if (!seen[h])
            out.warnings.push_back(std::string("corpus has no constraints for hazard '") +
                                   grid::to_string(static_cast<grid::Hazard>(h)) + "'");
    return out;
}

Lexicon Lexicon::builtin() {
    Lexicon lx;
    const auto add_all = [&](grid::Hazard h, std::initializer_list<const char*> phrases) {
        for (const char* p : phrases) lx.add(h, p);
    };
    add_all(grid::Hazard::Lava, {"lava", "molten", "magma", "fire", "fiery", "flames",
                                 "burning ground", "hot rock", "ember", "embers"});
    add_all(grid::Hazard::Water, {"water", "puddle", "puddles", "wet", "flooded", "flooding",
                                  "pond", "pool", "pools", "damp", "soggy"});
    add_all(grid::Hazard::Grass, {"grass", "grassy", "lawn", "turf", "meadow", "greenery",
                                  "sod", "overgrown"});
    return lx;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path);
    Lexicon lx;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("lexicon line " + std::to_string(lineno) +
                                     ": expected <hazard><TAB><phrase>");
        grid::Hazard hazard;
        if (!grid::hazard_from_string(line.substr(0, tab), hazard))
            throw std::runtime_error("lexicon line " + std::to_string(lineno) + ": unknown hazard label");
        lx.add(hazard, line.substr(tab + 1));
    }
    if (lx.phrases().empty()) throw std::runtime_error("lexicon is empty: " + path);
    return lx;
}

void Lexicon::add(grid::Hazard h, const std::string& phrase) {
    Phrase p{tokenize(phrase), h};
    if (p.tokens.empty()) throw std::invalid_argument("lexicon phrase has no tokens");
    phrases_.push_back(std::move(p));
}

std::string canonical_form(grid::Hazard h) {
    return std::string("do not touch ") + grid::to_string(h) + " tiles";
}

CondenseResult condense_rule(const Constraint& c, const Lexicon& lexicon) {
    const std::vector<std::string> tokens = tokenize(c.text);
    std::set<grid::Hazard> matched;
    for (const auto& phrase : lexicon.phrases()) {
        const std::size_t m = phrase.tokens.size();
        if (m > tokens.size()) continue;
        for (std::size_t i = 0; i + m <= tokens.size(); ++i) {
            bool hit = true;
            for (std::size_t j = 0; j < m; ++j) {
                if (tokens[i + j] != phrase.tokens[j]) {
                    hit = false;
                    break;
                }
            }
            if (hit) {
                matched.insert(phrase.hazard);
                break;
            }
        }
    }
    CondenseResult result;
    if (matched.empty()) {
        result.status = CondenseStatus::NoMatch;
    } else if (matched.size() > 1) {
        result.status = CondenseStatus::Ambiguous;
    } else {
        result.status = CondenseStatus::Ok;
        result.value = {canonical_form(*matched.begin()), c.id};
    }
    return result;
}

bool condenser_from_string(const std::string& s, CondenserKind& out) {
    if (s == "rule") out = CondenserKind::Rule;
    else if (s == "remote") out = CondenserKind::Remote;
    else if (s == "identity") out = CondenserKind::Identity;
    else return false;
    return true;
}

const char* to_string(CondenserKind k) {
    switch (k) {
        case CondenserKind::Rule: return "rule";
        case CondenserKind::Remote: return "remote";
        case CondenserKind::Identity: return "identity";
    }
    return "?";
}

CondensedCorpus condense_with_rule(const std::vector<Constraint>& corpus, const Lexicon& lexicon) {
    CondensedCorpus out;
    out.source = corpus;
    out.condensed.reserve(corpus.size());
    for (const auto& c : corpus) {
        const CondenseResult r = condense_rule(c, lexicon);
        if (r.status == CondenseStatus::Ok) {
            out.condensed.push_back(r.value);
        } else {
            out.condensed.push_back({c.text, c.id});
            out.identity_fallbacks.push_back(c.id);
        }
    }
    return out;
}

CondensedCorpus condense_identity(const std::vector<Constraint>& corpus) {
    CondensedCorpus out;
    out.source = corpus;
    out.condensed.reserve(corpus.size());
    for (const auto& c : corpus) out.condensed.push_back({c.text, c.id});
    return out;
}

std::vector<ConstraintPair> generate_pairs(const CondensedCorpus& corpus, int count,
                                           std::uint64_t seed) {
    if (corpus.size() < 2) throw std::runtime_error("pair generation needs at least 2 constraints");
    if (count < 1) throw std::invalid_argument("pair count must be >= 1");

    std::array<std::vector<std::size_t>, grid::kHazardCount> by_hazard;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        by_hazard[static_cast<int>(corpus.source[i].prohibited)].push_back(i);
    std::vector<int> classes;
    for (int h = 0; h < grid::kHazardCount; ++h)
        if (!by_hazard[h].empty()) classes.push_back(h);
    if (classes.size() < 2)
        throw std::runtime_error("pair generation needs constraints for at least 2 hazards");

    Rng rng(seed);
    const auto pick = [&](int cls) {
        const auto& pool = by_hazard[static_cast<std::size_t>(cls)];
        return pool[rng.below(pool.size())];
    };

    std::vector<ConstraintPair> pairs;
    pairs.reserve(static_cast<std::size_t>(count));
    const int positives = (count + 1) / 2;
    for (int n = 0; n < count; ++n) {
        ConstraintPair p;
        if (n < positives) {
            const int cls = classes[static_cast<std::size_t>(rng.below(classes.size()))];
            p.a = corpus.condensed[pick(cls)];
            p.b = corpus.condensed[pick(cls)];
            p.label = 1;
        } else {
            const std::size_t ci = rng.below(classes.size());
            std::size_t cj = rng.below(classes.size() - 1);
            if (cj >= ci) ++cj;
            p.a = corpus.condensed[pick(classes[ci])];
            p.b = corpus.condensed[pick(classes[cj])];
            p.label = 0;
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

}  // namespace cprl::lang
