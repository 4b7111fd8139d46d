#include "cprl/descriptor.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cprl::text {

namespace {

bool event_from_key(const std::string& key, grid::Event& out, int& variant) {
    std::string base = key;
    variant = 0;
    if (auto bar = key.find('|'); bar != std::string::npos) {
        base = key.substr(0, bar);
        const std::string suffix = key.substr(bar + 1);
        if (suffix == "alt1") variant = 1;
        else if (suffix == "alt2") variant = 2;
        else return false;
    }
    for (int i = 0; i < grid::kEventCount; ++i) {
        if (base == grid::to_string(static_cast<grid::Event>(i))) {
            out = static_cast<grid::Event>(i);
            return true;
        }
    }
    return false;
}

}  // namespace

TemplateTable TemplateTable::builtin() {
    TemplateTable t;
    using E = grid::Event;
    t.set(E::EnteredLava, 0, "You stepped onto a lava tile.");
    t.set(E::EnteredWater, 0, "You stepped onto a water tile.");
    t.set(E::EnteredGrass, 0, "You stepped onto a grass tile.");
    t.set(E::PickedBall, 0, "You picked up the ball.");
    t.set(E::PickedBox, 0, "You picked up the box.");
    t.set(E::PickedKey, 0, "You picked up the key.");
    t.set(E::Moved, 0, "You moved to an empty tile.");
    t.set(E::BumpedWall, 0, "You bumped into a wall.");
    t.set(E::EnteredLava, 1, "A lava tile sears your feet as you cross it.");
    t.set(E::EnteredLava, 2, "You have walked onto lava.");
    t.set(E::EnteredWater, 1, "A water tile soaks your boots as you cross it.");
    t.set(E::EnteredWater, 2, "You have walked into water.");
    t.set(E::EnteredGrass, 1, "A grass tile rustles under your feet as you cross it.");
    t.set(E::EnteredGrass, 2, "You have walked onto grass.");
    t.validate();
    return t;
}

TemplateTable TemplateTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open template table: " + path);
    TemplateTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("template table line " + std::to_string(lineno) + ": missing tab");
        grid::Event e;
        int variant;
        if (!event_from_key(line.substr(0, tab), e, variant))
            throw std::runtime_error("template table line " + std::to_string(lineno) + ": unknown key");
        const std::string text = line.substr(tab + 1);
        if (text.empty())
            throw std::runtime_error("template table line " + std::to_string(lineno) + ": empty template");
        t.set(e, variant, text);
    }
    t.validate();
    return t;
}

std::string TemplateTable::serialize() const {
    std::ostringstream out;
    for (int i = 0; i < grid::kEventCount; ++i) {
        const auto e = static_cast<grid::Event>(i);
        const auto& v = variants_[i];
        out << grid::to_string(e) << '\t' << v[0] << '\n';
        for (std::size_t j = 1; j < v.size(); ++j)
            out << grid::to_string(e) << "|alt" << j << '\t' << v[j] << '\n';
    }
    return out.str();
}

void TemplateTable::set(grid::Event e, int variant, std::string text) {
    auto& v = variants_[static_cast<int>(e)];
    if (static_cast<std::size_t>(variant) >= v.size()) v.resize(static_cast<std::size_t>(variant) + 1);
    v[static_cast<std::size_t>(variant)] = std::move(text);
}

void TemplateTable::validate() const {
    for (int i = 0; i < grid::kEventCount; ++i) {
        const auto& v = variants_[i];
        if (v.empty() || v[0].empty())
            throw std::runtime_error(std::string("template table misses event ") +
                                     grid::to_string(static_cast<grid::Event>(i)));
        for (const auto& s : v)
            if (s.empty())
                throw std::runtime_error(std::string("empty template variant for ") +
                                         grid::to_string(static_cast<grid::Event>(i)));
    }
}

const std::string& TemplateTable::canonical(grid::Event e) const {
    return variants_[static_cast<int>(e)][0];
}

const std::vector<std::string>& TemplateTable::variants(grid::Event e) const {
    return variants_[static_cast<int>(e)];
}

std::vector<std::pair<std::string, std::string>> TemplateTable::entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int i = 0; i < grid::kEventCount; ++i)
        out.emplace_back(grid::to_string(static_cast<grid::Event>(i)), variants_[i][0]);
    for (int i = 0; i < grid::kEventCount; ++i) {
        const auto& v = variants_[i];
        for (std::size_t j = 1; j < v.size(); ++j)
            out.emplace_back(std::string(grid::to_string(static_cast<grid::Event>(i))) + "|alt" +
                                 std::to_string(j),
                             v[j]);
    }
    return out;
}

TextObservation describe(grid::Event e, const TemplateTable& table) {
    return {table.canonical(e), e};
}

TextObservation describe_sampled(grid::Event e, const TemplateTable& table, Rng& rng) {
    if (!grid::is_hazard_event(e)) return describe(e, table);
    const auto& v = table.variants(e);
    return {v[rng.below(v.size())], e};
}

}  // namespace cprl::text
