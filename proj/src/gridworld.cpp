#include "ecmem/gridworld.hpp"

#include <stdexcept>

namespace ecmem {

int GridLayout::wall_count() const {
  int count = 0;
  for (std::uint8_t w : walls) count += w != 0;
  return count;
}

GridLayout make_openroom() {
  GridLayout layout;
  layout.name = "openroom";
  layout.width = 10;
  layout.height = 10;
  layout.walls.assign(100, 0);
  layout.start = {0, 0};
  layout.goal = {9, 9};
  return layout;
}

GridLayout make_fourroom() {
  GridLayout layout;
  layout.name = "fourroom";
  layout.width = 11;
  layout.height = 11;
  layout.walls.assign(121, 0);
  auto set_wall = [&](int r, int c) { layout.walls[r * 11 + c] = 1; };
  for (int i = 0; i < 11; ++i) {
    set_wall(5, i);  // horizontal arm
    set_wall(i, 5);  // vertical arm
  }
  // One doorway per arm.
  layout.walls[5 * 11 + 2] = 0;
  layout.walls[5 * 11 + 8] = 0;
  layout.walls[2 * 11 + 5] = 0;
  layout.walls[8 * 11 + 5] = 0;
  layout.start = {0, 0};
  layout.goal = {10, 10};
  return layout;
}

GridEnv::GridEnv(GridLayout layout) : layout_(std::move(layout)) {
  if (layout_.start == layout_.goal)
    throw std::invalid_argument("GridEnv: start equals goal");
  if (layout_.is_wall(layout_.start) || layout_.is_wall(layout_.goal))
    throw std::invalid_argument("GridEnv: start or goal is a wall");
  for (int r = 0; r < layout_.height; ++r)
    for (int c = 0; c < layout_.width; ++c)
      if (!layout_.is_wall({r, c}) && !(GridCell{r, c} == layout_.goal))
        start_cells_.push_back({r, c});
  pos_ = layout_.start;
}

std::vector<double> GridEnv::observe(GridCell c) const {
  // Raw lattice coordinates: adjacent cells sit at unit distance, so the
  // inverse-distance kernel (delta 1e-3) lets a revisited cell's own stored
  // value dominate its estimate. Normalizing to [0,1]^2 shrinks neighbour
  // distances enough that estimates smear across cells, which empirically
  // produces argmax cycles and stalls learning in the room domains.
  return {static_cast<double>(c.row), static_cast<double>(c.col)};
}

GridCell GridEnv::next_cell(GridCell c, int action) const {
  GridCell next = c;
  switch (action) {
    case kUp: next.row -= 1; break;
    case kDown: next.row += 1; break;
    case kLeft: next.col -= 1; break;
    case kRight: next.col += 1; break;
    default:
      throw std::invalid_argument("GridEnv: action must be in [0,4)");
  }
  if (!layout_.in_bounds(next) || layout_.is_wall(next)) return c;
  return next;
}

std::vector<double> GridEnv::reset() {
  return reset_to(start_cells_[rng_.uniform_int(start_cells_.size())]);
}

std::vector<double> GridEnv::reset_to(GridCell start) {
  if (!layout_.in_bounds(start) || layout_.is_wall(start))
    throw std::invalid_argument("GridEnv: invalid start cell");
  pos_ = start;
  steps_ = 0;
  finished_ = false;
  return observe(pos_);
}

StepResult GridEnv::step(int action) {
  if (finished_) throw std::logic_error("GridEnv: step after episode end");
  pos_ = next_cell(pos_, action);
  ++steps_;
  const bool done = pos_ == layout_.goal;
  const double reward = done ? 1.0 : 0.0;
  const bool truncated = !done && steps_ >= kStepCap;
  finished_ = done || truncated;
  return {observe(pos_), reward, done, truncated};
}

}  // namespace ecmem
