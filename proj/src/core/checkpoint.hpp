#pragma once

#include <string>

#include "core/solver.hpp"

namespace trelax {

// Self-describing little-endian binary snapshot of a FlowState (velocity
// coefficients plus grid, filter, nu, chi, t).  Round-trips exactly: the
// doubles are stored verbatim.  Forcing is runtime configuration and is not
// part of the snapshot.
void save_checkpoint(const FlowState& state, const std::string& path);
FlowState load_checkpoint(const std::string& path);

}  // namespace trelax
