#pragma once

#include <stdexcept>
#include <string>

namespace fdl {

/// A precondition on an operation's arguments was violated.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested frequency cannot be represented on the sampling grid.
class aliasing_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw precondition_error(what);
}

}  // namespace fdl
