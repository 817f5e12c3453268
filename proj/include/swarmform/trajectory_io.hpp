#pragma once

// Serialization of run logs: flat CSV for plotting, full JSON, and a
// newline-delimited JSON safety stream (one object per timestep).

#include <iosfwd>
#include <string>

#include "swarmform/sim.hpp"

namespace swarmform {

// "global" / "local".
const char* mode_name(RunMode mode);

// One row per (timestep, agent), sorted by (t, agent); coordinates are in
// the run frame named by the `frame` column. Deterministic byte-for-byte for
// a given log.
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);

// Full log, both frame views per agent.
void write_trajectory_json(const TrajectoryLog& log, std::ostream& out);

// One JSON object per timestep with the safety-report fields.
void write_safety_ndjson(const TrajectoryLog& log, std::ostream& out);

void print_summary(const RunSummary& summary, const TrajectoryLog& log,
                   const SafetyConfig<double>& safety, std::ostream& out);

}  // namespace swarmform
