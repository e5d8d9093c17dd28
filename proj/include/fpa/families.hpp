#pragma once

// Bundled example actions.

#include <string>
#include <string_view>
#include <vector>

#include "fpa/action.hpp"

namespace fpa::families {

/// trivial, tap, dropping-tap, chain-3.
const std::vector<std::string>& names();
/// Throws UnknownExample.
action::ActionSpec spec(std::string_view name);

}  // namespace fpa::families
