#include <doctest.h>

#include <cmath>
#include <deque>
#include <numbers>

#include "ecmem/classic_control.hpp"
#include "ecmem/env.hpp"
#include "ecmem/errors.hpp"
#include "ecmem/gridworld.hpp"
#include "ecmem/rng.hpp"

using namespace ecmem;

namespace {

// Independent breadth-first search over a layout.
int bfs_distance(const GridLayout& layout, GridCell from, GridCell to) {
  std::vector<int> dist(layout.width * layout.height, -1);
  auto id = [&](GridCell c) { return c.row * layout.width + c.col; };
  std::deque<GridCell> queue{from};
  dist[id(from)] = 0;
  while (!queue.empty()) {
    const GridCell c = queue.front();
    queue.pop_front();
    if (c == to) return dist[id(c)];
    const GridCell steps[4] = {{c.row - 1, c.col},
                               {c.row + 1, c.col},
                               {c.row, c.col - 1},
                               {c.row, c.col + 1}};
    for (const GridCell& n : steps) {
      if (!layout.in_bounds(n) || layout.is_wall(n) || dist[id(n)] >= 0)
        continue;
      dist[id(n)] = dist[id(c)] + 1;
      queue.push_back(n);
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("cartpole dynamics") {
  SUBCASE("one Euler step from the zero state, push left") {
    CartpoleEnv env;
    env.set_state({0.0, 0.0, 0.0, 0.0});
    const auto r = env.step(0);
    CHECK(r.observation[0] == 0.0);  // position advances with the old velocity
    CHECK(r.observation[1] < 0.0);   // cart accelerates left
    CHECK(r.observation[2] == 0.0);
    CHECK(r.observation[3] > 0.0);   // pole tips right (relative to the cart)
  }

  SUBCASE("one step matches an independent hand integration") {
    CartpoleEnv env;
    env.seed(1);
    for (int trial = 0; trial < 10; ++trial) {
      const auto obs = env.reset();
      const int action = trial % 2;
      // Test-local re-derivation of the published dynamics.
      const double force = action == 1 ? 10.0 : -10.0;
      const double x = obs[0], xd = obs[1], th = obs[2], thd = obs[3];
      const double temp =
          (force + 0.05 * thd * thd * std::sin(th)) / 1.1;
      const double thacc = (9.8 * std::sin(th) - std::cos(th) * temp) /
                           (0.5 * (4.0 / 3.0 -
                                   0.1 * std::cos(th) * std::cos(th) / 1.1));
      const double xacc = temp - 0.05 * thacc * std::cos(th) / 1.1;

      const auto r = env.step(action);
      CHECK(r.observation[0] == doctest::Approx(x + 0.02 * xd).epsilon(1e-12));
      CHECK(r.observation[1] == doctest::Approx(xd + 0.02 * xacc).epsilon(1e-12));
      CHECK(r.observation[2] == doctest::Approx(th + 0.02 * thd).epsilon(1e-12));
      CHECK(r.observation[3] == doctest::Approx(thd + 0.02 * thacc).epsilon(1e-12));
      CHECK(r.reward == 1.0);
    }
  }

  SUBCASE("episode reward is capped by the step limit") {
    CartpoleEnv env;
    env.seed(3);
    Rng rng(3);
    for (int ep = 0; ep < 3; ++ep) {
      env.reset();
      double total = 0.0;
      while (true) {
        const auto r = env.step(int(rng.uniform_int(2)));
        total += r.reward;
        if (r.done || r.truncated) break;
      }
      CHECK(total <= 500.0);
      CHECK(total >= 1.0);
    }
  }

  SUBCASE("same seed, same initial state") {
    CartpoleEnv a, b;
    a.seed(77);
    b.seed(77);
    CHECK(a.reset() == b.reset());
    CHECK(a.reset() == b.reset());  // consecutive resets advance identically
  }

  SUBCASE("invalid actions rejected") {
    CartpoleEnv env;
    env.seed(0);
    env.reset();
    CHECK_THROWS_AS(env.step(2), std::invalid_argument);
  }
}

TEST_CASE("acrobot dynamics") {
  SUBCASE("hanging at rest with zero torque stays at rest") {
    AcrobotEnv env;
    env.set_state({0.0, 0.0, 0.0, 0.0});
    for (int i = 0; i < 50; ++i) {
      const auto r = env.step(1);  // zero torque: equilibrium
      CHECK(!r.done);
      for (double v : env.state()) CHECK(std::abs(v) < 1e-10);
      if (r.truncated) break;
    }
  }

  SUBCASE("velocities stay inside the documented bounds") {
    AcrobotEnv env;
    env.seed(11);
    Rng rng(11);
    for (int ep = 0; ep < 2; ++ep) {
      env.reset();
      while (true) {
        const auto r = env.step(int(rng.uniform_int(3)));
        CHECK(std::abs(r.observation[4]) <= AcrobotEnv::kMaxVel1 + 1e-12);
        CHECK(std::abs(r.observation[5]) <= AcrobotEnv::kMaxVel2 + 1e-12);
        if (r.done || r.truncated) break;
      }
    }
  }

  SUBCASE("a random policy almost never reaches the goal") {
    AcrobotEnv env;
    env.seed(19);
    Rng rng(19);
    int floor_episodes = 0;
    for (int ep = 0; ep < 5; ++ep) {
      env.reset();
      double total = 0.0;
      while (true) {
        const auto r = env.step(int(rng.uniform_int(3)));
        total += r.reward;
        if (r.done || r.truncated) break;
      }
      CHECK(total >= -500.0);
      CHECK(total <= -1.0);
      if (total == -500.0) ++floor_episodes;
    }
    CHECK(floor_episodes >= 4);
  }
}

TEST_CASE("gridworld layouts") {
  const GridLayout open = make_openroom();
  const GridLayout four = make_fourroom();

  SUBCASE("open room has no interior walls") {
    CHECK(open.wall_count() == 0);
    CHECK(open.width == 10);
    CHECK(open.height == 10);
    CHECK(open.start == GridCell{0, 0});
    CHECK(open.goal == GridCell{9, 9});
  }

  SUBCASE("four-room goal is reachable and beyond the open-field distance") {
    CHECK(four.width == 11);
    CHECK(four.height == 11);
    const int d = bfs_distance(four, four.start, four.goal);
    CHECK(d > 10);
    CHECK(d <= GridEnv::kStepCap);
  }

  SUBCASE("start and goal are valid in both layouts") {
    for (const GridLayout* layout : {&open, &four}) {
      CHECK(!(layout->start == layout->goal));
      CHECK(!layout->is_wall(layout->start));
      CHECK(!layout->is_wall(layout->goal));
    }
  }

  SUBCASE("every move from every free cell lands on a free in-bounds cell") {
    for (const GridLayout* layout : {&open, &four}) {
      GridEnv env(*layout);
      for (int r = 0; r < layout->height; ++r) {
        for (int c = 0; c < layout->width; ++c) {
          if (layout->is_wall({r, c})) continue;
          for (int a = 0; a < 4; ++a) {
            const GridCell next = env.next_cell({r, c}, a);
            CHECK(layout->in_bounds(next));
            CHECK(!layout->is_wall(next));
          }
        }
      }
    }
  }
}

TEST_CASE("gridworld episodes") {
  GridEnv env(make_openroom());

  SUBCASE("observation is the raw cell coordinate") {
    CHECK(env.observe({0, 0}) == std::vector<double>{0.0, 0.0});
    CHECK(env.observe({3, 7}) == std::vector<double>{3.0, 7.0});
  }

  SUBCASE("stepping into the goal pays 1 and ends the episode") {
    env.reset_to({0, 0});
    // Walk along the top row then down the last column: 9 + 9 moves.
    StepResult r;
    for (int i = 0; i < 9; ++i) r = env.step(GridEnv::kRight);
    for (int i = 0; i < 9; ++i) r = env.step(GridEnv::kDown);
    CHECK(r.reward == 1.0);
    CHECK(r.done);
  }

  SUBCASE("bumping the boundary is a no-op with no reward") {
    const auto start = env.reset_to({0, 0});
    const auto r = env.step(GridEnv::kUp);
    CHECK(r.observation == start);
    CHECK(r.reward == 0.0);
    CHECK(!r.done);
  }

  SUBCASE("optimal path length matches breadth-first search") {
    const int d = bfs_distance(env.layout(), env.layout().start,
                               env.layout().goal);
    CHECK(d == 18);  // Manhattan distance in the open room
    env.reset_to(env.layout().start);
    int steps = 0;
    StepResult r;
    for (int i = 0; i < 9; ++i, ++steps) r = env.step(GridEnv::kDown);
    for (int i = 0; i < 9; ++i, ++steps) r = env.step(GridEnv::kRight);
    CHECK(steps == d);
    CHECK(r.done);
  }

  SUBCASE("episodes truncate at the step cap") {
    env.reset_to({0, 0});
    StepResult r;
    for (int i = 0; i < GridEnv::kStepCap; ++i) r = env.step(GridEnv::kUp);
    CHECK(r.truncated);
    CHECK(!r.done);
  }

  SUBCASE("episodes start from seeded random free cells") {
    env.seed(11);
    bool varied = false;
    std::vector<double> first;
    for (int i = 0; i < 25; ++i) {
      const auto obs = env.reset();
      const GridCell c{int(obs[0]), int(obs[1])};
      CHECK(env.layout().in_bounds(c));
      CHECK(!env.layout().is_wall(c));
      CHECK(!(c == env.layout().goal));
      if (i == 0) first = obs;
      varied |= obs != first;
    }
    CHECK(varied);

    GridEnv again(make_openroom());
    again.seed(11);
    env.seed(11);
    for (int i = 0; i < 10; ++i) CHECK(env.reset() == again.reset());
  }
}

TEST_CASE("environment factory") {
  for (const char* name : {"cartpole", "acrobot", "openroom", "fourroom"}) {
    const auto env = make_env(name);
    CHECK(env->name() == name);
    CHECK(env->num_actions() >= 2);
    env->seed(1);
    CHECK(env->reset().size() == env->obs_dim());
  }
  CHECK_THROWS_AS(make_env("pong"), ConfigError);

  // Benchmark defaults: only the swing-up task holds decisions.
  CHECK(make_env("acrobot")->default_action_repeat() == 2);
  CHECK(make_env("cartpole")->default_action_repeat() == 1);
  CHECK(make_env("openroom")->default_action_repeat() == 1);
}
