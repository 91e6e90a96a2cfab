#pragma once

#include <iosfwd>

namespace scfo {

/// Runs the library's invariant suites (plant gradients and Lipschitz
/// strictness, growth-bound soundness, solver duality, recursive feasibility,
/// projection post-conditions) and reports one line per suite to log.
/// Returns true iff every suite passed.
bool run_verification(std::ostream& log);

}  // namespace scfo
