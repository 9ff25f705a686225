#pragma once

#include <stdexcept>
#include <string>

namespace ecmem {

// Invalid user-facing configuration (unknown env name, bad field value).
// The CLI maps this to exit code 2; `field` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace ecmem
