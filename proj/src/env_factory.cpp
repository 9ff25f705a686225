#include "ecmem/classic_control.hpp"
#include "ecmem/env.hpp"
#include "ecmem/errors.hpp"
#include "ecmem/gridworld.hpp"

namespace ecmem {

std::unique_ptr<Env> make_env(std::string_view name) {
  if (name == "cartpole") return std::make_unique<CartpoleEnv>();
  if (name == "acrobot") return std::make_unique<AcrobotEnv>();
  if (name == "openroom") return std::make_unique<GridEnv>(make_openroom());
  if (name == "fourroom") return std::make_unique<GridEnv>(make_fourroom());
  throw ConfigError("env", "unknown environment '" + std::string(name) +
                               "' (expected cartpole, acrobot, openroom or "
                               "fourroom)");
}

}  // namespace ecmem
