// Command-line front end: evaluate a plan at one instant, replay a scenario
// to trajectory/safety files, or run the self-check suite on a scenario.
//
// Exit codes: 0 success, 1 configuration/assumption error, 2 safety-gate or
// check failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swarmform/scenario.hpp"
#include "swarmform/trajectory_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitGate = 2;

using swarmform::RunConfig;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

int cmd_plan(const RunConfig& cfg, std::optional<double> at) {
  const auto& mission = cfg.mission;
  const double t = at.value_or(mission.start_time());
  const auto bp = mission.boundary_at(t);
  const auto q = mission.jacobian_at(t);
  const auto dec = swarmform::polar_decompose(q);
  const bool safe = swarmform::check_eigenvalues(dec, cfg.safety);

  std::cout << "time: " << fmt(t) << " s\n";
  std::cout << "boundary commands: radius2 = " << fmt(bp.radius2) << ", radius3 = "
            << fmt(bp.radius3) << ", angle2 = " << fmt(bp.angle2) << ", angle3 = "
            << fmt(bp.angle3) << "\n";
  std::cout << "Q = [" << fmt(q(0, 0)) << ", " << fmt(q(0, 1)) << "; " << fmt(q(1, 0)) << ", "
            << fmt(q(1, 1)) << "]\n";
  std::cout << "rotation angle psi_r = " << fmt(dec.rotation_angle) << " rad\n";
  std::cout << "stretches lambda1, lambda2 = " << fmt(dec.lambda1) << ", " << fmt(dec.lambda2)
            << "\n";
  std::cout << "shear angle psi_d = " << fmt(dec.shear_angle) << " rad\n";
  std::cout << "eigenvalue gate (lambda_min = " << fmt(cfg.safety.lambda_min) << "): "
            << (safe ? "SAFE" : "UNSAFE") << "\n";
  return safe ? kExitOk : kExitGate;
}

int cmd_run(RunConfig cfg, const std::string& out_dir, const std::string& format, bool strict) {
  if (strict) cfg.strict = true;
  const swarmform::TrajectoryLog log = swarmform::run(cfg);
  const swarmform::RunSummary summary = swarmform::summarize(log, cfg.safety);

  std::filesystem::create_directories(out_dir);
  const std::string traj_path =
      (std::filesystem::path(out_dir) / (format == "json" ? "trajectory.json" : "trajectory.csv"))
          .string();
  const std::string safety_path = (std::filesystem::path(out_dir) / "safety.ndjson").string();
  {
    std::ofstream traj(traj_path);
    if (!traj) throw swarmform::ConfigError("cannot write '" + traj_path + "'");
    if (format == "json") swarmform::write_trajectory_json(log, traj);
    else swarmform::write_trajectory_csv(log, traj);
  }
  {
    std::ofstream saf(safety_path);
    if (!saf) throw swarmform::ConfigError("cannot write '" + safety_path + "'");
    swarmform::write_safety_ndjson(log, saf);
  }

  swarmform::print_summary(summary, log, cfg.safety, std::cout);
  std::cout << "\nwrote " << traj_path << "\nwrote " << safety_path << "\n";
  return summary.clean ? kExitOk : kExitGate;
}

struct Check {
  std::string name;
  bool config_class = false;  // failures exit 1 instead of 2
  std::function<std::pair<bool, std::string>()> fn;
};

int cmd_verify(const RunConfig& cfg) {
  using namespace swarmform;
  const auto& mission = cfg.mission;
  const auto& plan = mission.plan_matrix();
  const auto& ref = mission.reference();

  std::vector<Check> checks;

  checks.push_back({"run parameters (dt, duration, tracking stability)", true, [&] {
    try {
      validate_config(cfg);
      return std::make_pair(true, std::string("tracking_gain * dt = ") +
                                      fmt(cfg.tracking_gain * cfg.dt) + " < 1");
    } catch (const Error& e) {
      return std::make_pair(false, std::string(e.what()));
    }
  }});

  checks.push_back({"plan matrix inverts the boundary map", false, [&] {
    Mat4<double> h = Mat4<double>::Zero();
    Mat2<double> block;
    block << std::cos(ref.angle2), std::sin(ref.angle2),
             std::cos(ref.angle3), std::sin(ref.angle3);
    block *= ref.boundary_radius;
    h.topLeftCorner<2, 2>() = block;
    h.bottomRightCorner<2, 2>() = block;
    const double residual = (plan.matrix * h - Mat4<double>::Identity()).cwiseAbs().maxCoeff();
    return std::make_pair(residual < 1e-9, "max residual " + fmt(residual));
  }});

  checks.push_back({"reference commands reproduce the identity Jacobian", false, [&] {
    const BoundaryPolar<double> bp{ref.boundary_radius, ref.boundary_radius, ref.angle2,
                                   ref.angle3};
    const double residual =
        (jacobian_from_boundary(plan, bp) - Mat2<double>::Identity()).cwiseAbs().maxCoeff();
    return std::make_pair(residual < 1e-10, "max residual " + fmt(residual));
  }});

  checks.push_back({"blend endpoints and end derivatives", false, [&] {
    double worst = 0.0;
    worst = std::max(worst, std::abs(quintic_blend(0.0)));
    worst = std::max(worst, std::abs(quintic_blend(1.0) - 1.0));
    const double h = 1e-5;
    for (double tau : {0.0, 1.0}) {
      const double d1 = (quintic_blend(tau + h) - quintic_blend(tau - h)) / (2 * h);
      const double d2 =
          (quintic_blend(tau + h) - 2 * quintic_blend(tau) + quintic_blend(tau - h)) / (h * h);
      worst = std::max({worst, std::abs(d1), std::abs(d2)});
    }
    return std::make_pair(worst < 1e-6, "max endpoint residual " + fmt(worst));
  }});

  checks.push_back({"blend strictly increasing", false, [&] {
    double prev = quintic_blend(0.0);
    for (int i = 1; i <= 10000; ++i) {
      const double cur = quintic_blend(i / 10000.0);
      if (!(cur > prev)) return std::make_pair(false, "not increasing at grid point " + fmt(i));
      prev = cur;
    }
    return std::make_pair(true, std::string("10000-point grid"));
  }});

  checks.push_back({"mission continuity across phase joins", false, [&] {
    double worst = 0.0;
    for (size_t k = 0; k + 1 < mission.phases().size(); ++k) {
      const double tj = mission.phases()[k].end_time;
      for (double t = tj - 0.005; t <= tj + 0.005; t += 0.001) {
        const auto a = mission.jacobian_at(t);
        const auto b = mission.jacobian_at(t + 0.001);
        worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
      }
    }
    return std::make_pair(worst < 1e-6, "max 1 kHz jump " + fmt(worst));
  }});

  checks.push_back({"schedules stay inside the admissible box", false, [&] {
    const double t0 = mission.start_time(), t1 = mission.end_time();
    for (int i = 0; i <= 1000; ++i) {
      const double t = t0 + (t1 - t0) * i / 1000.0;
      try {
        check_boundary_constraints(plan, mission.boundary_at(t));
      } catch (const Error& e) {
        return std::make_pair(false, std::string(e.what()));
      }
    }
    return std::make_pair(true, std::string("1001 samples"));
  }});

  checks.push_back({"polar decomposition reconstructs the Jacobian", false, [&] {
    double worst = 0.0;
    const double t0 = mission.start_time(), t1 = mission.end_time();
    for (int i = 0; i <= 1000; ++i) {
      const double t = t0 + (t1 - t0) * i / 1000.0;
      const auto q = mission.jacobian_at(t);
      worst = std::max(worst, (compose(polar_decompose(q)) - q).cwiseAbs().maxCoeff());
    }
    return std::make_pair(worst < 1e-9, "max residual " + fmt(worst));
  }});

  checks.push_back({"frame compositions agree (global vs leader-local)", false, [&] {
    const double dev = method_equivalence_check(cfg);
    return std::make_pair(dev < 1e-9, "max deviation " + fmt(dev) + " m");
  }});

  bool config_failed = false;
  bool property_failed = false;
  for (const auto& check : checks) {
    std::pair<bool, std::string> result;
    try {
      result = check.fn();
    } catch (const std::exception& e) {
      result = {false, e.what()};
    }
    std::cout << (result.first ? "PASS" : "FAIL") << "  " << check.name << " (" << result.second
              << ")\n";
    if (!result.first) (check.config_class ? config_failed : property_failed) = true;
  }
  if (config_failed) return kExitConfig;
  return property_failed ? kExitGate : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine formation planning and deterministic replay for a quadcopter team "
               "guided by a ground leader"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<double> at;
  std::string out_dir = "out";
  std::string format = "csv";
  bool strict = false;

  auto* plan = app.add_subcommand("plan", "Evaluate the Jacobian and safety gate at one time");
  plan->add_option("--scenario", scenario_path, "scenario file")->required()
      ->check(CLI::ExistingFile);
  plan->add_option("--at", at, "evaluation time in seconds (default: mission start)");

  auto* runcmd = app.add_subcommand("run", "Replay a scenario and export trajectory/safety data");
  runcmd->add_option("--scenario", scenario_path, "scenario file")->required()
      ->check(CLI::ExistingFile);
  runcmd->add_option("--out", out_dir, "output directory (default: out)");
  runcmd->add_option("--format", format, "trajectory format")
      ->check(CLI::IsMember({"csv", "json"}));
  runcmd->add_flag("--strict", strict, "abort at the first safety violation");

  auto* verify = app.add_subcommand("verify", "Run the self-check suite on a scenario");
  verify->add_option("--scenario", scenario_path, "scenario file")->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = swarmform::load_scenario(scenario_path);
    if (plan->parsed()) return cmd_plan(cfg, at);
    if (runcmd->parsed()) return cmd_run(cfg, out_dir, format, strict);
    return cmd_verify(cfg);
  } catch (const swarmform::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
