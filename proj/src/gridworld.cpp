#include "cprl/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cprl::grid {

const char* to_string(Event e) {
    switch (e) {
        case Event::EnteredLava: return "entered-lava";
        case Event::EnteredWater: return "entered-water";
        case Event::EnteredGrass: return "entered-grass";
        case Event::PickedBall: return "picked-ball";
        case Event::PickedBox: return "picked-box";
        case Event::PickedKey: return "picked-key";
        case Event::Moved: return "moved";
        case Event::BumpedWall: return "bumped-wall";
    }
    return "?";
}

const char* to_string(Hazard h) {
    switch (h) {
        case Hazard::Lava: return "lava";
        case Hazard::Water: return "water";
        case Hazard::Grass: return "grass";
    }
    return "?";
}

const char* to_string(Layout l) {
    return l == Layout::Random ? "random" : "longpath";
}

bool hazard_from_string(const std::string& s, Hazard& out) {
    if (s == "lava") out = Hazard::Lava;
    else if (s == "water") out = Hazard::Water;
    else if (s == "grass") out = Hazard::Grass;
    else return false;
    return true;
}

Cell hazard_cell(Hazard h) {
    switch (h) {
        case Hazard::Lava: return Cell::Lava;
        case Hazard::Water: return Cell::Water;
        case Hazard::Grass: return Cell::Grass;
    }
    return Cell::Lava;
}

Event hazard_event(Hazard h) {
    switch (h) {
        case Hazard::Lava: return Event::EnteredLava;
        case Hazard::Water: return Event::EnteredWater;
        case Hazard::Grass: return Event::EnteredGrass;
    }
    return Event::EnteredLava;
}

bool is_hazard_event(Event e, Hazard* which) {
    switch (e) {
        case Event::EnteredLava:
            if (which) *which = Hazard::Lava;
            return true;
        case Event::EnteredWater:
            if (which) *which = Hazard::Water;
            return true;
        case Event::EnteredGrass:
            if (which) *which = Hazard::Grass;
            return true;
        default:
            return false;
    }
}

void GridConfig::validate() const {
    if (width < 5 || height < 5) throw std::invalid_argument("grid must be at least 5x5");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (hazard_density < 0.0 || hazard_density > 0.3)
        throw std::invalid_argument("hazard_density must be in [0, 0.3]");
    if (view_size < 1 || view_size % 2 == 0) throw std::invalid_argument("view_size must be odd and >= 1");
}

double decayed_reward(double base, int t, int max_steps) {
    return base * (1.0 - 0.9 * static_cast<double>(t) / static_cast<double>(max_steps));
}

double goal_base_reward(GoalObject g) {
    switch (g) {
        case GoalObject::Ball: return 1.0;
        case GoalObject::Box: return 2.0;
        case GoalObject::Key: return 3.0;
    }
    return 0.0;
}

Grid Grid::build(const GridConfig& config) {
    config.validate();
    Grid g;
    g.config_ = config;
    g.cells_.assign(static_cast<std::size_t>(config.width) * config.height, Cell::Empty);
    if (config.layout == Layout::Random) {
        Rng rng(config.seed);
        g.build_random(rng);
    } else {
        g.build_longpath();
    }
    g.finish_build();
    return g;
}

// Placement rule for the random layout: shuffle all cells once, take the
// first as the agent start and the next three as ball/box/key; of the
// remaining `available = width*height - 4` cells, the next
// round(hazard_density * available) become lava, then the same count water,
// then grass. Everything else stays empty.
void Grid::build_random(Rng& rng) {
    const int total = config_.width * config_.height;
    std::vector<int> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());

    if (total < 4) throw std::invalid_argument("grid too small to place goal objects");
    const auto at = [&](int k) { return Pos{order[static_cast<std::size_t>(k)] / config_.width,
                                            order[static_cast<std::size_t>(k)] % config_.width}; };
    start_ = at(0);
    cells_[static_cast<std::size_t>(order[1])] = Cell::Ball;
    cells_[static_cast<std::size_t>(order[2])] = Cell::Box;
    cells_[static_cast<std::size_t>(order[3])] = Cell::Key;

    const int available = total - 4;
    const int per_hazard = static_cast<int>(std::llround(config_.hazard_density * available));
    if (3 * per_hazard > available)
        throw std::invalid_argument("hazard_density leaves no room for hazards");
    int cursor = 4;
    for (Hazard h : {Hazard::Lava, Hazard::Water, Hazard::Grass}) {
        for (int i = 0; i < per_hazard; ++i, ++cursor)
            cells_[static_cast<std::size_t>(order[static_cast<std::size_t>(cursor)])] = hazard_cell(h);
    }
}

// The longpath layout is deterministic: corridors on even rows, connected by
// single cells at alternating ends, everything off the path lava. The three
// goal objects sit on the last three path cells, key at the very end.
void Grid::build_longpath() {
    const int w = config_.width;
    const int h = config_.height;
    safe_path_.clear();
    bool left_to_right = true;
    for (int r = 0; r < h; r += 2) {
        if (left_to_right) {
            for (int c = 0; c < w; ++c) safe_path_.push_back({r, c});
        } else {
            for (int c = w - 1; c >= 0; --c) safe_path_.push_back({r, c});
        }
        if (r + 2 < h) safe_path_.push_back({r + 1, left_to_right ? w - 1 : 0});
        left_to_right = !left_to_right;
    }

    std::fill(cells_.begin(), cells_.end(), Cell::Lava);
    for (const Pos& p : safe_path_) cells_[static_cast<std::size_t>(index(p))] = Cell::Empty;

    const std::size_t n = safe_path_.size();
    cells_[static_cast<std::size_t>(index(safe_path_[n - 3]))] = Cell::Ball;
    cells_[static_cast<std::size_t>(index(safe_path_[n - 2]))] = Cell::Box;
    cells_[static_cast<std::size_t>(index(safe_path_[n - 1]))] = Cell::Key;
    start_ = safe_path_[0];
}

void Grid::finish_build() {
    agent_ = start_;
    initial_cells_ = cells_;
    t_ = 0;
    done_ = false;
    collected_count_ = 0;
    collected_[0] = collected_[1] = collected_[2] = false;
}

Grid Grid::parse_layout(const std::string& text, const GridConfig& base) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    if (rows.empty()) throw std::invalid_argument("layout text is empty");
    const int h = static_cast<int>(rows.size());
    const int w = static_cast<int>(rows[0].size());
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != w) throw std::invalid_argument("ragged layout rows");

    Grid g;
    g.config_ = base;
    g.config_.width = w;
    g.config_.height = h;
    g.config_.validate();
    g.cells_.assign(static_cast<std::size_t>(w) * h, Cell::Empty);

    int starts = 0, balls = 0, boxes = 0, keys = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            Cell cell = Cell::Empty;
            switch (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) {
                case '.': cell = Cell::Empty; break;
                case 'L': cell = Cell::Lava; break;
                case 'W': cell = Cell::Water; break;
                case 'G': cell = Cell::Grass; break;
                case 'b': cell = Cell::Ball; ++balls; break;
                case 'x': cell = Cell::Box; ++boxes; break;
                case 'k': cell = Cell::Key; ++keys; break;
                case '#': cell = Cell::Wall; break;
                case '@':
                    cell = Cell::Empty;
                    g.start_ = {r, c};
                    ++starts;
                    break;
                default:
                    throw std::invalid_argument("unknown layout character");
            }
            g.cells_[static_cast<std::size_t>(r * w + c)] = cell;
        }
    }
    if (starts != 1) throw std::invalid_argument("layout must contain exactly one '@'");
    if (balls != 1 || boxes != 1 || keys != 1)
        throw std::invalid_argument("layout must contain exactly one each of b, x, k");
    g.finish_build();
    return g;
}

std::string Grid::format_layout() const {
    std::string out;
    out.reserve(static_cast<std::size_t>((config_.width + 1) * config_.height));
    for (int r = 0; r < config_.height; ++r) {
        for (int c = 0; c < config_.width; ++c) {
            if (Pos{r, c} == start_) {
                out.push_back('@');
                continue;
            }
            switch (initial_cells_[static_cast<std::size_t>(r * config_.width + c)]) {
                case Cell::Empty: out.push_back('.'); break;
                case Cell::Lava: out.push_back('L'); break;
                case Cell::Water: out.push_back('W'); break;
                case Cell::Grass: out.push_back('G'); break;
                case Cell::Ball: out.push_back('b'); break;
                case Cell::Box: out.push_back('x'); break;
                case Cell::Key: out.push_back('k'); break;
                case Cell::Wall: out.push_back('#'); break;
            }
        }
        out.push_back('\n');
    }
    return out;
}

void Grid::set_constraint(int constraint_id, Hazard prohibited) {
    constraint_id_ = constraint_id;
    constrained_ = prohibited;
}

StepResult Grid::step(Action a) {
    if (done_) throw std::logic_error("step() called on a done episode");

    Pos target = agent_;
    switch (a) {
        case Action::Up: target.row -= 1; break;
        case Action::Down: target.row += 1; break;
        case Action::Left: target.col -= 1; break;
        case Action::Right: target.col += 1; break;
        case Action::Stay: break;
    }

    StepResult result;
    result.event = Event::Moved;
    const bool moved_somewhere = !(target == agent_);
    if (moved_somewhere && (!in_bounds(target) || cell(target) == Cell::Wall)) {
        result.event = Event::BumpedWall;
    } else if (moved_somewhere) {
        agent_ = target;
        const Cell entered = cell(target);
        switch (entered) {
            case Cell::Lava: result.event = Event::EnteredLava; break;
            case Cell::Water: result.event = Event::EnteredWater; break;
            case Cell::Grass: result.event = Event::EnteredGrass; break;
            case Cell::Ball:
            case Cell::Box:
            case Cell::Key: {
                const GoalObject g = entered == Cell::Ball ? GoalObject::Ball
                                   : entered == Cell::Box  ? GoalObject::Box
                                                           : GoalObject::Key;
                result.event = entered == Cell::Ball ? Event::PickedBall
                             : entered == Cell::Box  ? Event::PickedBox
                                                     : Event::PickedKey;
                result.reward = decayed_reward(goal_base_reward(g), t_, config_.max_steps);
                collected_[static_cast<int>(g)] = true;
                ++collected_count_;
                cells_[static_cast<std::size_t>(index(target))] = Cell::Empty;
                break;
            }
            case Cell::Empty: result.event = Event::Moved; break;
            case Cell::Wall: break;  // unreachable, handled above
        }
    }
    // Staying put or bumping a wall enters no cell, so it can never violate.
    Hazard touched;
    result.oracle_cost = (is_hazard_event(result.event, &touched) && touched == constrained_) ? 1 : 0;

    ++t_;
    done_ = (collected_count_ == 3) || (t_ >= config_.max_steps);
    result.done = done_;
    result.observation = observation();
    return result;
}

int Grid::observation_size() const {
    return config_.view_size * config_.view_size * kCellTypes + 3;
}

std::vector<double> Grid::observation() const {
    const int k = config_.view_size;
    const int half = k / 2;
    std::vector<double> obs(static_cast<std::size_t>(observation_size()), 0.0);
    std::size_t slot = 0;
    for (int dr = -half; dr <= half; ++dr) {
        for (int dc = -half; dc <= half; ++dc) {
            const Pos p{agent_.row + dr, agent_.col + dc};
            const Cell c = in_bounds(p) ? cell(p) : Cell::Wall;
            obs[slot + static_cast<std::size_t>(c)] = 1.0;
            slot += kCellTypes;
        }
    }
    obs[slot++] = static_cast<double>(agent_.row) / static_cast<double>(config_.height - 1);
    obs[slot++] = static_cast<double>(agent_.col) / static_cast<double>(config_.width - 1);
    obs[slot++] = static_cast<double>(t_) / static_cast<double>(config_.max_steps);
    return obs;
}

}  // namespace cprl::grid
