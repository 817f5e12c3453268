#pragma once

// Human-editable scenario files: INI-style sections describing the reference
// formation, the mission phases, the leader path, safety gates and the run
// parameters. Angles accept plain radians or pi expressions like "2pi/3".

#include <iosfwd>
#include <string>

#include "swarmform/sim.hpp"

namespace swarmform {

// Parse a scenario file into a runnable configuration. Parse errors carry
// file:line locations; constraint violations name the offending bound.
RunConfig load_scenario(const std::string& path);

// `name` labels error messages; `base_dir` resolves relative leader-path
// files.
RunConfig parse_scenario(std::istream& in, const std::string& name,
                         const std::string& base_dir = ".");

// Canonical text form of a configuration; parsing it back yields an equal
// RunConfig.
std::string scenario_to_text(const RunConfig& cfg);

// "2pi/3", "-pi", "0.5pi", "pi/4" or a plain number.
double parse_angle(const std::string& text);

}  // namespace swarmform
