#pragma once

#include <string>

#include "sbe/game.hpp"

namespace sbe {

/// Compact JSON state frame: {"type":"state","tick":...,"ships":[...],...}.
/// Field order is fixed, so equal states serialize to equal bytes.
std::string state_frame(const GameState& state);

/// {"type":"result","winner":0|1|2,"scores":[s1,s2],"tick":t}; winner 0 is a draw.
std::string result_frame(const GameState& state, const Outcome& outcome);

}  // namespace sbe
