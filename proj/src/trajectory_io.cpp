#include "swarmform/trajectory_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

namespace swarmform {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::json safety_json(const SafetyReport<double>& r) {
  nlohmann::json j{
      {"time", r.time},
      {"eig_ok", r.eig_ok},
      {"lambda_1", r.lambda1},
      {"lambda_2", r.lambda2},
      {"containment_ok", r.containment_ok},
      {"min_pairwise_dist", r.min_pairwise_dist},
  };
  if (r.corridor_ok) j["corridor_ok"] = *r.corridor_ok;
  else j["corridor_ok"] = nullptr;
  return j;
}

}  // namespace

const char* mode_name(RunMode mode) {
  return mode == RunMode::GlobalFrame ? "global" : "local";
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
  out << "t,agent,frame,x_des,y_des,z_des,x_act,y_act,z_act,"
         "q11,q12,q21,q22,lambda1,lambda2,psi_r,psi_d,containment,min_dist\n";
  const bool global = log.mode == RunMode::GlobalFrame;
  const char* frame = mode_name(log.mode);
  for (const auto& step : log.steps) {
    for (size_t i = 0; i < step.agents.size(); ++i) {
      const auto& a = step.agents[i];
      double xd, yd, zd, xa, ya, za;
      if (global) {
        xd = a.desired_global.x(); yd = a.desired_global.y(); zd = a.desired_global.z();
        xa = a.actual_global.x();  ya = a.actual_global.y();  za = a.actual_global.z();
      } else {
        xd = a.desired_local.x(); yd = a.desired_local.y(); zd = step.leader.elevation;
        xa = a.actual_local.x();  ya = a.actual_local.y();  za = a.actual_global.z();
      }
      out << num(step.time) << ',' << i + 1 << ',' << frame << ','
          << num(xd) << ',' << num(yd) << ',' << num(zd) << ','
          << num(xa) << ',' << num(ya) << ',' << num(za) << ','
          << num(step.jacobian(0, 0)) << ',' << num(step.jacobian(0, 1)) << ','
          << num(step.jacobian(1, 0)) << ',' << num(step.jacobian(1, 1)) << ','
          << num(step.strain.lambda1) << ',' << num(step.strain.lambda2) << ','
          << num(step.strain.rotation_angle) << ',' << num(step.strain.shear_angle) << ','
          << (step.safety.containment_ok ? 1 : 0) << ',' << num(step.safety.min_pairwise_dist)
          << '\n';
    }
  }
}

void write_trajectory_json(const TrajectoryLog& log, std::ostream& out) {
  nlohmann::json j;
  j["mode"] = mode_name(log.mode);
  j["dt"] = log.dt;
  j["agent_count"] = log.agent_count;
  j["aborted"] = log.aborted;
  auto& steps = j["steps"] = nlohmann::json::array();
  for (const auto& step : log.steps) {
    nlohmann::json s;
    s["time"] = step.time;
    s["leader"] = {{"x", step.leader.position.x()},
                   {"y", step.leader.position.y()},
                   {"heading", step.leader.heading},
                   {"elevation", step.leader.elevation}};
    s["q"] = {step.jacobian(0, 0), step.jacobian(0, 1), step.jacobian(1, 0), step.jacobian(1, 1)};
    s["strain"] = {{"psi_r", step.strain.rotation_angle},
                   {"lambda1", step.strain.lambda1},
                   {"lambda2", step.strain.lambda2},
                   {"psi_d", step.strain.shear_angle}};
    auto& agents = s["agents"] = nlohmann::json::array();
    for (const auto& a : step.agents) {
      agents.push_back({
          {"desired_local", {a.desired_local.x(), a.desired_local.y()}},
          {"actual_local", {a.actual_local.x(), a.actual_local.y()}},
          {"desired_global", {a.desired_global.x(), a.desired_global.y(), a.desired_global.z()}},
          {"actual_global", {a.actual_global.x(), a.actual_global.y(), a.actual_global.z()}},
      });
    }
    s["safety"] = safety_json(step.safety);
    s["violation"] = step.violation;
    steps.push_back(std::move(s));
  }
  out << j.dump(2) << '\n';
}

void write_safety_ndjson(const TrajectoryLog& log, std::ostream& out) {
  for (const auto& step : log.steps) out << safety_json(step.safety).dump() << '\n';
}

void print_summary(const RunSummary& s, const TrajectoryLog& log,
                   const SafetyConfig<double>& safety, std::ostream& out) {
  out << "run complete: " << log.steps.size() << " steps, " << log.agent_count
      << " agents, frame " << mode_name(log.mode) << (log.aborted ? " (aborted on violation)" : "")
      << "\n\n";
  out << "safety gates:\n";
  out << "  min stretch lambda2     = " << num(s.min_lambda2) << " (gate lambda_min = "
      << num(safety.lambda_min) << ") -> " << (s.lambda_gate_ok ? "PASS" : "FAIL") << "\n";
  out << "  containment fraction    = " << num(s.containment_fraction) << " -> "
      << (s.containment_all ? "PASS" : "FAIL") << "\n";
  out << "  min pairwise separation = " << num(s.min_pairwise) << " m (floor "
      << num(safety.min_separation) << " m) -> " << (s.separation_ok ? "PASS" : "FAIL") << "\n";
  if (safety.corridor)
    out << "  corridor clearance      -> " << (s.corridor_all ? "PASS" : "FAIL") << "\n";
  else
    out << "  corridor clearance      -> not configured\n";
  out << "\ntracking metrics:\n";
  out << "  max tracking error      = " << num(s.max_tracking_error) << " m\n";
  out << "  violations flagged      = " << s.violation_steps << " steps\n";
}

}  // namespace swarmform
