#pragma once

#include <iosfwd>

namespace symrl {

// Fast built-in invariant checks for the `check` CLI verb: one line per
// check, true when every check passes.
bool run_self_check(std::ostream& out);

}  // namespace symrl
