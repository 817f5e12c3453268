#include "swarmform/sim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace swarmform {

namespace {

// Ground-frame position of a point carried by the leader-local frame when the
// point has its own height (actual agents keep their integrated z).
Eigen::Vector3d compose_with_leader(const Eigen::Vector2d& local, double z,
                                    const LeaderState<double>& leader) {
  const Eigen::Vector2d planar = leader.position + rotation2(leader.heading) * local;
  return {planar.x(), planar.y(), z};
}

}  // namespace

LeaderPath::LeaderPath(std::vector<LeaderSample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw ConfigError("leader path needs at least one sample");
  for (size_t i = 0; i + 1 < samples_.size(); ++i) {
    if (!(samples_[i + 1].time > samples_[i].time)) {
      std::ostringstream msg;
      msg << "leader path times must be strictly increasing (sample " << i + 1 << " at t = "
          << samples_[i].time << ", sample " << i + 2 << " at t = " << samples_[i + 1].time << ")";
      throw ConfigError(msg.str());
    }
    const double dh = samples_[i + 1].heading - samples_[i].heading;
    if (std::abs(dh) > std::numbers::pi) {
      std::ostringstream msg;
      msg << "leader heading jumps by " << dh << " rad between samples " << i + 1 << " and "
          << i + 2 << "; keep successive samples within pi";
      throw ConfigError(msg.str());
    }
  }
  for (const auto& s : samples_)
    if (!(s.elevation >= 0)) throw ConfigError("leader path elevation must be non-negative");
}

LeaderPath LeaderPath::stationary(const LeaderState<double>& pose) {
  return LeaderPath({LeaderSample{0.0, pose.position, pose.heading, pose.elevation}});
}

LeaderState<double> LeaderPath::at(double t) const {
  const auto& first = samples_.front();
  const auto& last = samples_.back();
  if (t <= first.time) return {first.position, first.heading, first.elevation};
  if (t >= last.time) return {last.position, last.heading, last.elevation};
  size_t hi = 1;
  while (samples_[hi].time < t) ++hi;
  const auto& a = samples_[hi - 1];
  const auto& b = samples_[hi];
  const double alpha = (t - a.time) / (b.time - a.time);
  const Eigen::Vector2d pos = a.position + alpha * (b.position - a.position);
  const double heading = a.heading + alpha * (b.heading - a.heading);  // |dh| <= pi: shorter arc
  const double elev = a.elevation + alpha * (b.elevation - a.elevation);
  return {pos, heading, elev};
}

AgentState step_agent(const AgentState& state, const Eigen::Vector3d& desired, double dt,
                      double tracking_gain, double max_speed) {
  Eigen::Vector3d v = tracking_gain * (desired - state.position);
  const double speed = v.norm();
  if (speed > max_speed) v *= max_speed / speed;
  return {state.position + v * dt, v};
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.dt > 0)) throw ConfigError("dt must be positive");
  if (!(cfg.duration > 0)) throw ConfigError("duration must be positive");
  if (cfg.duration + kPhaseJoinTolerance < cfg.mission.end_time()) {
    std::ostringstream msg;
    msg << "duration = " << cfg.duration << " s does not cover the mission span ending at t = "
        << cfg.mission.end_time() << " s";
    throw ConfigError(msg.str());
  }
  if (!(cfg.tracking_gain > 0)) throw ConfigError("tracking_gain must be positive");
  if (!(cfg.tracking_gain * cfg.dt < 1.0)) {
    std::ostringstream msg;
    msg << "tracking_gain * dt = " << cfg.tracking_gain * cfg.dt
        << " must be < 1 for a stable tracking step";
    throw ConfigError(msg.str());
  }
  if (!(cfg.max_speed > 0)) throw ConfigError("max_speed must be positive");
  if (cfg.initial_positions &&
      static_cast<int>(cfg.initial_positions->size()) != cfg.mission.reference().agent_count())
    throw ConfigError("initial_positions must list one position per agent");
}

Eigen::Vector3d desired_global(int agent, double t, const MissionPlan<double>& mission,
                               const LeaderState<double>& leader) {
  const FormationSnapshot<double> snap = apply_transform(mission.reference(), mission.jacobian_at(t), t);
  const Eigen::Vector2d s = snap.position(agent);
  const Eigen::Vector2d planar = leader.position + rotation2(leader.heading) * s;
  return {planar.x(), planar.y(), leader.elevation};
}

TrajectoryLog run(const RunConfig& cfg) {
  validate_config(cfg);
  const auto& mission = cfg.mission;
  const auto& ref = mission.reference();
  const int n_agents = ref.agent_count();
  const int n_steps = static_cast<int>(std::llround(cfg.duration / cfg.dt));

  TrajectoryLog log;
  log.mode = cfg.mode;
  log.dt = cfg.dt;
  log.agent_count = n_agents;
  log.steps.reserve(static_cast<size_t>(n_steps) + 1);

  std::vector<AgentState> states(static_cast<size_t>(n_agents));
  std::vector<Eigen::Vector3d> desired_run(static_cast<size_t>(n_agents));
  std::vector<Eigen::Vector3d> desired_ground(static_cast<size_t>(n_agents));

  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * cfg.dt;
    const LeaderState<double> path_leader = cfg.leader.at(t);
    // In the leader frame the leader sits at the origin with zero heading;
    // only the flight elevation carries over.
    const LeaderState<double> run_leader =
        cfg.mode == RunMode::GlobalFrame
            ? path_leader
            : LeaderState<double>(Eigen::Vector2d::Zero(), 0.0, path_leader.elevation);

    const Mat2<double> jac = mission.jacobian_at(t);
    const FormationSnapshot<double> snap = apply_transform(ref, jac, t);

    for (int i = 0; i < n_agents; ++i) {
      desired_run[i] = local_to_global(snap.local_positions[i], run_leader);
      desired_ground[i] = cfg.mode == RunMode::GlobalFrame
                              ? desired_run[i]
                              : local_to_global(snap.local_positions[i], path_leader);
    }

    if (k == 0) {
      for (int i = 0; i < n_agents; ++i)
        states[i].position = cfg.initial_positions ? (*cfg.initial_positions)[i] : desired_run[i];
    } else {
      for (int i = 0; i < n_agents; ++i)
        states[i] = step_agent(states[i], desired_run[i], cfg.dt, cfg.tracking_gain, cfg.max_speed);
    }

    StepRecord rec;
    rec.time = t;
    rec.leader = path_leader;
    rec.jacobian = jac;
    rec.strain = polar_decompose(jac);
    rec.agents.resize(static_cast<size_t>(n_agents));
    for (int i = 0; i < n_agents; ++i) {
      auto& ar = rec.agents[i];
      ar.desired_local = snap.local_positions[i];
      ar.desired_global = desired_ground[i];
      if (cfg.mode == RunMode::GlobalFrame) {
        ar.actual_global = states[i].position;
        ar.actual_local = global_to_local(states[i].position, path_leader);
      } else {
        ar.actual_local = states[i].position.head<2>();
        ar.actual_global = compose_with_leader(ar.actual_local, states[i].position.z(), path_leader);
      }
    }
    rec.safety = evaluate_safety(t, rec.strain, snap, desired_ground, cfg.safety);
    rec.violation = !rec.safety.eig_ok || !rec.safety.containment_ok ||
                    rec.safety.min_pairwise_dist < cfg.safety.min_separation ||
                    (rec.safety.corridor_ok && !*rec.safety.corridor_ok);
    log.steps.push_back(std::move(rec));

    if (log.steps.back().violation && cfg.strict) {
      log.aborted = true;
      break;
    }
  }
  return log;
}

double method_equivalence_check(const RunConfig& cfg, double heading_perturbation) {
  validate_config(cfg);
  const auto& mission = cfg.mission;
  const auto& ref = mission.reference();
  const int n_steps = static_cast<int>(std::llround(cfg.duration / cfg.dt));
  double max_dev = 0.0;
  for (int k = 0; k <= n_steps; ++k) {
    const double t = k * cfg.dt;
    const LeaderState<double> leader = cfg.leader.at(t);
    const LeaderState<double> perturbed(leader.position, leader.heading + heading_perturbation,
                                        leader.elevation);
    const FormationSnapshot<double> snap = apply_transform(ref, mission.jacobian_at(t), t);
    for (int i = 1; i <= ref.agent_count(); ++i) {
      const Eigen::Vector3d via_ground = desired_global(i, t, mission, leader);
      const Eigen::Vector3d via_local = local_to_global(snap.position(i), perturbed);
      max_dev = std::max(max_dev, (via_ground - via_local).norm());
    }
  }
  return max_dev;
}

RunSummary summarize(const TrajectoryLog& log, const SafetyConfig<double>& safety) {
  RunSummary s;
  if (log.steps.empty()) return s;
  s.min_lambda2 = std::numeric_limits<double>::infinity();
  s.min_pairwise = std::numeric_limits<double>::infinity();
  int contained = 0;
  for (const auto& rec : log.steps) {
    s.min_lambda2 = std::min(s.min_lambda2, rec.safety.lambda2);
    s.min_pairwise = std::min(s.min_pairwise, rec.safety.min_pairwise_dist);
    contained += rec.safety.containment_ok ? 1 : 0;
    if (rec.safety.corridor_ok && !*rec.safety.corridor_ok) s.corridor_all = false;
    if (rec.violation) ++s.violation_steps;
    for (const auto& ar : rec.agents)
      s.max_tracking_error =
          std::max(s.max_tracking_error, (ar.desired_global - ar.actual_global).norm());
  }
  s.containment_fraction = static_cast<double>(contained) / static_cast<double>(log.steps.size());
  s.lambda_gate_ok = s.min_lambda2 >= safety.lambda_min;
  s.separation_ok = s.min_pairwise >= safety.min_separation;
  s.containment_all = contained == static_cast<int>(log.steps.size());
  s.clean = s.violation_steps == 0 && !log.aborted;
  return s;
}

}  // namespace swarmform
