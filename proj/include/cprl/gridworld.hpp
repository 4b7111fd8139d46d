#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cprl/rng.hpp"

namespace cprl::grid {

enum class Cell : std::uint8_t { Empty = 0, Lava, Water, Grass, Ball, Box, Key, Wall };
inline constexpr int kCellTypes = 8;

enum class Hazard : std::uint8_t { Lava = 0, Water, Grass };
inline constexpr int kHazardCount = 3;

enum class GoalObject : std::uint8_t { Ball = 0, Box, Key };

enum class Action : std::uint8_t { Up = 0, Down, Left, Right, Stay };
inline constexpr int kActionCount = 5;

// What the agent touched this step.
enum class Event : std::uint8_t {
    EnteredLava = 0,
    EnteredWater,
    EnteredGrass,
    PickedBall,
    PickedBox,
    PickedKey,
    Moved,
    BumpedWall,
};
inline constexpr int kEventCount = 8;

enum class Layout : std::uint8_t { Random = 0, LongPath };

const char* to_string(Event e);
const char* to_string(Hazard h);
const char* to_string(Layout l);
bool hazard_from_string(const std::string& s, Hazard& out);

Cell hazard_cell(Hazard h);
Event hazard_event(Hazard h);
// True when `e` is a hazard-contact event; fills `which` if given.
bool is_hazard_event(Event e, Hazard* which = nullptr);

struct GridConfig {
    int width = 12;
    int height = 12;
    Layout layout = Layout::Random;
    int max_steps = 300;
    std::uint64_t seed = 0;
    double hazard_density = 0.1;  // per hazard type, random layout only
    int view_size = 7;            // odd side length of the egocentric window

    void validate() const;  // throws std::invalid_argument
};

struct Pos {
    int row = 0;
    int col = 0;
    bool operator==(const Pos&) const = default;
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    int oracle_cost = 0;  // {0,1}; evaluation-only ground truth
    bool done = false;
    Event event = Event::Moved;
};

// Linear decay from `base` at t=0 to 0.1*base at t=max_steps.
double decayed_reward(double base, int t, int max_steps);
double goal_base_reward(GoalObject g);  // ball 1, box 2, key 3

class Grid {
public:
    // Builds a fresh t=0 state for the configured layout. Same config and
    // seed produce an identical grid.
    static Grid build(const GridConfig& config);

    // Plain-text layout exchange: '.' empty, 'L' lava, 'W' water, 'G' grass,
    // 'b'/'x'/'k' goals, '#' wall, '@' agent start (on an empty cell).
    static Grid parse_layout(const std::string& text, const GridConfig& base);
    std::string format_layout() const;  // serializes the initial layout

    // The active constraint, set per episode before stepping.
    void set_constraint(int constraint_id, Hazard prohibited);
    Hazard constrained_hazard() const { return constrained_; }
    int constraint_id() const { return constraint_id_; }

    StepResult step(Action a);  // throws std::logic_error on a done state

    std::vector<double> observation() const;
    int observation_size() const;

    int width() const { return config_.width; }
    int height() const { return config_.height; }
    int t() const { return t_; }
    bool done() const { return done_; }
    Pos agent() const { return agent_; }
    Pos start() const { return start_; }
    Cell cell(Pos p) const { return cells_[index(p)]; }
    int collected_count() const { return collected_count_; }
    bool collected(GoalObject g) const { return collected_[static_cast<int>(g)]; }
    const GridConfig& config() const { return config_; }

    // The carved safe path for the longpath layout (start to goal region,
    // in walk order); empty for other layouts. Used by the scripted solver.
    const std::vector<Pos>& safe_path() const { return safe_path_; }

private:
    Grid() = default;

    int index(Pos p) const { return p.row * config_.width + p.col; }
    bool in_bounds(Pos p) const {
        return p.row >= 0 && p.row < config_.height && p.col >= 0 && p.col < config_.width;
    }
    void build_random(Rng& rng);
    void build_longpath();
    void finish_build();

    GridConfig config_;
    std::vector<Cell> cells_;
    std::vector<Cell> initial_cells_;  // layout as built, for serialization
    Pos agent_;
    Pos start_;
    bool collected_[3] = {false, false, false};
    int collected_count_ = 0;
    int t_ = 0;
    bool done_ = false;
    int constraint_id_ = -1;
    Hazard constrained_ = Hazard::Lava;
    std::vector<Pos> safe_path_;
};

// Free-function form of the build operation.
inline Grid build_grid(const GridConfig& config) { return Grid::build(config); }

}  // namespace cprl::grid
