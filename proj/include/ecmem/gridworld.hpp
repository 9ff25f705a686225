#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecmem/env.hpp"
#include "ecmem/rng.hpp"

namespace ecmem {

struct GridCell {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct GridLayout {
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> walls;  // row-major, 1 = wall
  GridCell start;
  GridCell goal;

  bool in_bounds(GridCell c) const {
    return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width;
  }
  bool is_wall(GridCell c) const {
    return walls[static_cast<std::size_t>(c.row) * width + c.col] != 0;
  }
  int wall_count() const;
};

// 10x10 open room, start top-left, goal bottom-right.
GridLayout make_openroom();

// 11x11 four-rooms: a cross of walls along row 5 and column 5 with one
// doorway per arm, start (0,0), goal (10,10).
GridLayout make_fourroom();

// Gridworld: 4 moves (up/down/left/right), bumping a wall or the boundary
// is a no-op, reward 1 exactly on entering the goal (episode ends),
// otherwise 0. Observation is the raw (row, col) cell. Episodes start from
// a uniformly random free cell (excluding the goal); transitions themselves
// are deterministic.
class GridEnv final : public Env {
 public:
  static constexpr int kStepCap = 200;
  enum Action { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

  explicit GridEnv(GridLayout layout);

  void seed(std::uint64_t s) override { rng_ = Rng(s); }
  std::vector<double> reset() override;
  // Starts an episode from a specific cell (testing/diagnostics).
  std::vector<double> reset_to(GridCell start);
  StepResult step(int action) override;
  int num_actions() const override { return 4; }
  std::size_t obs_dim() const override { return 2; }
  std::string_view name() const override { return layout_.name; }
  std::unique_ptr<Env> fresh() const override {
    return std::make_unique<GridEnv>(layout_);
  }

  const GridLayout& layout() const { return layout_; }
  GridCell position() const { return pos_; }
  std::vector<double> observe(GridCell c) const;
  // The cell reached by taking `action` from `c` (no-op on walls/bounds).
  GridCell next_cell(GridCell c, int action) const;

 private:
  GridLayout layout_;
  std::vector<GridCell> start_cells_;  // all free non-goal cells
  GridCell pos_;
  int steps_ = 0;
  bool finished_ = true;
  Rng rng_{0};
};

}  // namespace ecmem
