#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cprl/gridworld.hpp"
#include "cprl/rng.hpp"

namespace cprl::text {

struct TextObservation {
    std::string text;
    grid::Event source_event;
};

// Fixed sentence templates keyed by step event. Hazard events additionally
// carry paraphrase variants, drawn only in data-generation mode; describe()
// itself is a pure function of the event.
class TemplateTable {
public:
    static TemplateTable builtin();

    // Plain-text file, one `key<TAB>template` per line. Keys are event names
    // ("entered-lava", "moved", ...) plus optional "entered-lava|alt1" style
    // paraphrase keys. Lines starting with '#' are comments.
    static TemplateTable load(const std::string& path);
    std::string serialize() const;

    const std::string& canonical(grid::Event e) const;
    // Canonical template first, then any paraphrase variants.
    const std::vector<std::string>& variants(grid::Event e) const;

    // The full table, canonical entries first, one entry per event.
    std::vector<std::pair<std::string, std::string>> entries() const;

private:
    void set(grid::Event e, int variant, std::string text);
    void validate() const;

    std::vector<std::string> variants_[grid::kEventCount];
};

TextObservation describe(grid::Event e, const TemplateTable& table);

// Data-generation mode: hazard events draw uniformly among their canonical
// template and paraphrases; all other events stay canonical.
TextObservation describe_sampled(grid::Event e, const TemplateTable& table, Rng& rng);

}  // namespace cprl::text
