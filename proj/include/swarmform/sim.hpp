#pragma once

// Deterministic fixed-step replay of a mission. Two interchangeable frame
// conventions: the agents either fly in the ground frame and follow the
// moving leader, or fly in the leader-local frame while the world (leader
// path, corridor) is folded in through the recorded leader pose. Tracking
// dynamics are a saturated proportional velocity law standing in for the
// real autopilot stack.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "swarmform/formation.hpp"
#include "swarmform/frames.hpp"
#include "swarmform/planner.hpp"
#include "swarmform/safety.hpp"

namespace swarmform {

struct LeaderSample {
  double time = 0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double heading = 0;
  double elevation = 0;

  friend bool operator==(const LeaderSample& a, const LeaderSample& b) {
    return a.time == b.time && (a.position.array() == b.position.array()).all() &&
           a.heading == b.heading && a.elevation == b.elevation;
  }
};

// Recorded leader trajectory. Position and elevation interpolate linearly
// between samples, heading along the shorter arc; outside the recorded span
// the nearest endpoint holds.
class LeaderPath {
 public:
  LeaderPath() : samples_{LeaderSample{}} {}
  explicit LeaderPath(std::vector<LeaderSample> samples);

  static LeaderPath stationary(const LeaderState<double>& pose);

  LeaderState<double> at(double t) const;
  const std::vector<LeaderSample>& samples() const { return samples_; }
  double start_time() const { return samples_.front().time; }
  double end_time() const { return samples_.back().time; }

  friend bool operator==(const LeaderPath& a, const LeaderPath& b) {
    return a.samples_ == b.samples_;
  }

 private:
  std::vector<LeaderSample> samples_;
};

enum class RunMode {
  GlobalFrame,  // agents track ground-frame targets composed with the leader pose
  LeaderFrame,  // agents track leader-local targets; the world moves instead
};

struct AgentState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
};

// Saturated proportional tracking step:
//   v = clamp_norm(gain * (desired - position), max_speed); position += v dt.
AgentState step_agent(const AgentState& state, const Eigen::Vector3d& desired, double dt,
                      double tracking_gain, double max_speed);

struct RunConfig {
  RunMode mode = RunMode::GlobalFrame;
  double dt = 0.01;          // seconds
  double duration = 0;       // seconds; must cover the mission span
  double tracking_gain = 2.0;  // 1/s
  double max_speed = 1.0;      // m/s
  bool strict = false;         // abort at the first safety violation
  SafetyConfig<double> safety;
  MissionPlan<double> mission;
  LeaderPath leader;
  // Optional explicit start positions (run frame); default is the desired
  // configuration at t = 0.
  std::optional<std::vector<Eigen::Vector3d>> initial_positions;
};

// Throws ConfigError unless timestep, horizon, tracking law and initial
// positions are consistent (in particular tracking_gain * dt < 1).
void validate_config(const RunConfig& cfg);

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  if (a.initial_positions.has_value() != b.initial_positions.has_value()) return false;
  if (a.initial_positions) {
    if (a.initial_positions->size() != b.initial_positions->size()) return false;
    for (size_t i = 0; i < a.initial_positions->size(); ++i)
      if (!((*a.initial_positions)[i].array() == (*b.initial_positions)[i].array()).all())
        return false;
  }
  return a.mode == b.mode && a.dt == b.dt && a.duration == b.duration &&
         a.tracking_gain == b.tracking_gain && a.max_speed == b.max_speed &&
         a.strict == b.strict && a.safety == b.safety && a.mission == b.mission &&
         a.leader == b.leader;
}

struct AgentRecord {
  Eigen::Vector2d desired_local = Eigen::Vector2d::Zero();
  Eigen::Vector2d actual_local = Eigen::Vector2d::Zero();
  Eigen::Vector3d desired_global = Eigen::Vector3d::Zero();
  Eigen::Vector3d actual_global = Eigen::Vector3d::Zero();
};

struct StepRecord {
  double time = 0;
  LeaderState<double> leader;  // recorded leader pose, both modes
  Mat2<double> jacobian = Mat2<double>::Identity();
  StrainDecomposition<double> strain;
  std::vector<AgentRecord> agents;
  SafetyReport<double> safety;
  bool violation = false;
};

struct TrajectoryLog {
  RunMode mode = RunMode::GlobalFrame;
  double dt = 0.01;
  int agent_count = 0;
  bool aborted = false;  // strict mode stopped at the first violation
  std::vector<StepRecord> steps;
};

// Ground-frame desired position of one agent (1-based id):
//   p_i = d + elevation * e3 + R(heading) * s_i(t).
Eigen::Vector3d desired_global(int agent, double t, const MissionPlan<double>& mission,
                               const LeaderState<double>& leader);

// Fixed-step replay. Safety is evaluated every step on the desired
// configuration (the quantity the planner certifies); violations are flagged
// in the log and, in strict mode, abort the run.
TrajectoryLog run(const RunConfig& cfg);

// Largest distance, over all steps and agents, between the ground-frame
// desired positions and the leader-composed local desired positions. The two
// routes must agree; heading_perturbation exists as a negative control.
double method_equivalence_check(const RunConfig& cfg, double heading_perturbation = 0.0);

struct RunSummary {
  double min_lambda2 = 0;
  double min_pairwise = 0;
  double containment_fraction = 0;
  double max_tracking_error = 0;
  int violation_steps = 0;
  bool lambda_gate_ok = false;
  bool separation_ok = false;
  bool containment_all = false;
  bool corridor_all = true;  // stays true when no corridor is configured
  bool clean = false;
};

RunSummary summarize(const TrajectoryLog& log, const SafetyConfig<double>& safety);

}  // namespace swarmform
