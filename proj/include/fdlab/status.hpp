#pragma once

#include <string>
#include <string_view>

namespace fdlab {

/// Outcome of one probed check. `vacuous` means no sample triggered the
/// premise; it counts as holding but is reported separately.
enum class Status { pass, fail, vacuous, undetermined };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::vacuous:
      return "vacuous";
    case Status::undetermined:
      return "undetermined";
  }
  return "?";
}

inline bool holds(Status s) { return s == Status::pass || s == Status::vacuous; }

/// Combines statuses: any fail wins, then undetermined, then pass; all
/// vacuous stays vacuous.
inline Status combine(Status a, Status b) {
  if (a == Status::fail || b == Status::fail) return Status::fail;
  if (a == Status::undetermined || b == Status::undetermined) return Status::undetermined;
  if (a == Status::pass || b == Status::pass) return Status::pass;
  return Status::vacuous;
}

}  // namespace fdlab
