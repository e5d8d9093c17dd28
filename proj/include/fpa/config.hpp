#pragma once

// Run configuration files: one YAML document per action.
//
//   p: 2
//   d: 2
//   label: tap
//   seed:
//     - {in: [1, 0], out: [2, 0], coeff: 1}
//   precision: 4
//   l_max: 3
//   n_max: 4
//   window: "-3:4"
//
// Components are 1-based here. Everything except p, d and seed is optional.

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "fpa/action.hpp"

namespace fpa::config {

inline constexpr std::size_t kMaxWindowDim = 512;

struct RunConfig {
  action::ActionSpec spec;
  int precision = 4;
  int l_max = 3;
  int n_max = 4;
  std::optional<std::pair<int, int>> window;
};

/// Throws ParseError for YAML or literal syntax problems and MalformedSpec
/// for well-formed documents with missing or out-of-range fields.
RunConfig parse_config(std::string_view text);
/// Throws Io when the file cannot be read.
RunConfig load_config(const std::string& path);
/// Canonical YAML for the configuration; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& c);

/// "LO:HI" with LO < HI. Throws ParseError.
std::pair<int, int> parse_window(std::string_view text);

}  // namespace fpa::config
