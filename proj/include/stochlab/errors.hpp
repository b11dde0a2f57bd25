/**
 * @file errors.hpp
 * @brief Domain-error exception carrying a stable, machine-readable name.
 *
 * Every contract violation in the library throws DomainError.  The name is
 * the identifier surfaced in tooling output (e.g. "NotSubmartingale",
 * "BadMatrix"); what() prepends it to the human-readable detail.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stochlab {

class DomainError : public std::domain_error {
public:
  DomainError(std::string name, const std::string& message)
      : std::domain_error(name + ": " + message), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

[[noreturn]] inline void raise(const std::string& name,
                               const std::string& message) {
  throw DomainError(name, message);
}

}  // namespace stochlab
