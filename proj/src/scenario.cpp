#include "swarmform/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace swarmform {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
  std::ostringstream msg;
  msg << name << ":" << line << ": " << what;
  throw ConfigError(msg.str());
}

double parse_number(const std::string& text, const std::string& name, int line) {
  const std::string t = trim(text);
  if (t.empty()) fail(name, line, "expected a number");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) fail(name, line, "bad number '" + t + "'");
  return v;
}

bool parse_bool(const std::string& text, const std::string& name, int line) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  fail(name, line, "bad boolean '" + text + "' (use true/false)");
}

// One section's key/value entries with duplicate and unknown-key policing.
class Fields {
 public:
  Fields(const Section& sec, const std::string& name) : sec_(sec), name_(name) {}

  std::optional<std::string> find(const std::string& key) {
    used_.push_back(key);
    std::optional<std::string> found;
    for (const auto& e : sec_.entries) {
      if (e.key != key) continue;
      if (found) fail(name_, e.line, "duplicate key '" + key + "' in [" + sec_.name + "]");
      found = e.value;
      line_of_[key] = e.line;
    }
    return found;
  }

  std::string require(const std::string& key) {
    auto v = find(key);
    if (!v) fail(name_, sec_.line, "missing key '" + key + "' in [" + sec_.name + "]");
    return *v;
  }

  int line(const std::string& key) const {
    auto it = line_of_.find(key);
    return it == line_of_.end() ? sec_.line : it->second;
  }

  double number(const std::string& key) { return parse_number(require(key), name_, line(key)); }
  double number_or(const std::string& key, double fallback) {
    auto v = find(key);
    return v ? parse_number(*v, name_, line(key)) : fallback;
  }
  std::optional<double> maybe_number(const std::string& key) {
    auto v = find(key);
    if (!v) return std::nullopt;
    return parse_number(*v, name_, line(key));
  }
  double angle(const std::string& key) {
    try {
      return parse_angle(require(key));
    } catch (const ConfigError& e) {
      fail(name_, line(key), e.what());
    }
  }
  std::optional<double> maybe_angle(const std::string& key) {
    auto v = find(key);
    if (!v) return std::nullopt;
    try {
      return parse_angle(*v);
    } catch (const ConfigError& e) {
      fail(name_, line(key), e.what());
    }
  }

  // Call after all lookups: any remaining key is a typo.
  void reject_unknown() const {
    for (const auto& e : sec_.entries)
      if (std::find(used_.begin(), used_.end(), e.key) == used_.end())
        fail(name_, e.line, "unknown key '" + e.key + "' in [" + sec_.name + "]");
  }

 private:
  const Section& sec_;
  std::string name_;
  std::vector<std::string> used_;
  std::map<std::string, int> line_of_;
};

std::vector<Section> read_sections(std::istream& in, const std::string& name) {
  std::vector<Section> sections;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(name, lineno, "unterminated section header");
      sections.push_back({lower(trim(line.substr(1, line.size() - 2))), lineno, {}});
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(name, lineno, "expected 'key = value'");
    if (sections.empty()) fail(name, lineno, "key outside any [section]");
    Entry e{lower(trim(line.substr(0, eq))), trim(line.substr(eq + 1)), lineno};
    if (e.key.empty()) fail(name, lineno, "empty key");
    sections.back().entries.push_back(e);
  }
  return sections;
}

LeaderSample parse_leader_sample(const std::string& value, const std::string& name, int line) {
  std::istringstream ss(value);
  std::vector<std::string> tok;
  std::string t;
  while (ss >> t) tok.push_back(t);
  if (tok.size() != 5)
    fail(name, line, "leader sample needs 5 fields: t x y heading z");
  LeaderSample s;
  s.time = parse_number(tok[0], name, line);
  s.position = {parse_number(tok[1], name, line), parse_number(tok[2], name, line)};
  try {
    s.heading = parse_angle(tok[3]);
  } catch (const ConfigError& e) {
    fail(name, line, e.what());
  }
  s.elevation = parse_number(tok[4], name, line);
  return s;
}

LeaderPath load_leader_file(const std::string& path, const std::string& scenario_name, int line) {
  std::ifstream in(path);
  if (!in) fail(scenario_name, line, "cannot open leader path file '" + path + "'");
  std::vector<LeaderSample> samples;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string s = raw;
    if (auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    std::replace(s.begin(), s.end(), ',', ' ');
    samples.push_back(parse_leader_sample(s, path, lineno));
  }
  if (samples.empty()) fail(scenario_name, line, "leader path file '" + path + "' has no samples");
  return LeaderPath(std::move(samples));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s = lower(trim(text));
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ConfigError("expected an angle");
  const size_t pos = s.find("pi");
  auto number = [&](const std::string& t) {
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) throw ConfigError("bad angle '" + text + "'");
    return v;
  };
  if (pos == std::string::npos) return number(s);

  std::string coef = s.substr(0, pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") c = -1.0;
  else if (!coef.empty() && coef != "+") c = number(coef);

  const std::string rest = s.substr(pos + 2);
  double div = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError("bad angle '" + text + "'");
    div = number(rest.substr(1));
    if (div == 0.0) throw ConfigError("angle divides by zero: '" + text + "'");
  }
  return c * std::numbers::pi / div;
}

RunConfig parse_scenario(std::istream& in, const std::string& name, const std::string& base_dir) {
  const std::vector<Section> sections = read_sections(in, name);

  const Section* reference = nullptr;
  const Section* leader = nullptr;
  const Section* safety = nullptr;
  const Section* runsec = nullptr;
  std::vector<const Section*> phases;
  for (const auto& sec : sections) {
    auto unique = [&](const Section*& slot) {
      if (slot) fail(name, sec.line, "duplicate section [" + sec.name + "]");
      slot = &sec;
    };
    if (sec.name == "reference") unique(reference);
    else if (sec.name == "phase") phases.push_back(&sec);
    else if (sec.name == "leader") unique(leader);
    else if (sec.name == "safety") unique(safety);
    else if (sec.name == "run") unique(runsec);
    else fail(name, sec.line, "unknown section [" + sec.name + "]");
  }
  if (!reference) fail(name, 1, "missing [reference] section");
  if (phases.empty()) fail(name, 1, "missing [phase] section");
  if (!leader) fail(name, 1, "missing [leader] section");
  if (!runsec) fail(name, 1, "missing [run] section");

  Fields ref_f(*reference, name);
  const double leader_radius = ref_f.number("leader_radius");
  const double boundary_radius = ref_f.number("boundary_radius");
  const double angle2 = ref_f.angle("angle2");
  const double angle3 = ref_f.angle("angle3");
  const double min_radius = ref_f.number_or("min_radius", kDefaultMinRadius);
  ref_f.reject_unknown();
  const ReferenceFormation<double> ref =
      build_reference(leader_radius, boundary_radius, angle2, angle3);

  std::vector<PhaseSpec<double>> phase_specs;
  for (const Section* psec : phases) {
    Fields f(*psec, name);
    PhaseSpec<double> ph;
    ph.start_time = f.number("start_time");
    ph.end_time = f.number("end_time");
    ph.start.radius2 = f.number("radius2_start");
    ph.end.radius2 = f.number("radius2_end");
    ph.start.radius3 = f.number("radius3_start");
    ph.end.radius3 = f.number("radius3_end");
    ph.start.angle2 = f.maybe_angle("angle2_start").value_or(angle2);
    ph.end.angle2 = f.maybe_angle("angle2_end").value_or(angle2);
    ph.start.angle3 = f.maybe_angle("angle3_start").value_or(angle3);
    ph.end.angle3 = f.maybe_angle("angle3_end").value_or(angle3);
    f.reject_unknown();
    phase_specs.push_back(ph);
  }

  LeaderPath path;
  {
    std::vector<LeaderSample> samples;
    std::optional<std::string> file;
    int file_line = leader->line;
    for (const auto& e : leader->entries) {
      if (e.key == "sample") {
        samples.push_back(parse_leader_sample(e.value, name, e.line));
      } else if (e.key == "file") {
        if (file) fail(name, e.line, "duplicate key 'file' in [leader]");
        file = e.value;
        file_line = e.line;
      } else {
        fail(name, e.line, "unknown key '" + e.key + "' in [leader]");
      }
    }
    if (file && !samples.empty())
      fail(name, file_line, "[leader] takes either inline samples or a file, not both");
    if (file) {
      path = load_leader_file((std::filesystem::path(base_dir) / *file).string(), name, file_line);
    } else if (!samples.empty()) {
      path = LeaderPath(std::move(samples));
    } else {
      fail(name, leader->line, "[leader] needs 'sample' lines or a 'file' entry");
    }
  }

  SafetyConfig<double> safety_cfg;
  if (safety) {
    Fields f(*safety, name);
    safety_cfg.lambda_min = f.number_or("lambda_min", safety_cfg.lambda_min);
    safety_cfg.min_separation = f.number_or("min_separation", safety_cfg.min_separation);
    const auto cy = f.maybe_number("corridor_center_y");
    const auto hw = f.maybe_number("corridor_half_width");
    const auto x0 = f.maybe_number("corridor_x_min");
    const auto x1 = f.maybe_number("corridor_x_max");
    const int given = int(cy.has_value()) + int(hw.has_value()) + int(x0.has_value()) + int(x1.has_value());
    if (given == 4) {
      if (!(*hw > 0)) fail(name, safety->line, "corridor_half_width must be positive");
      if (!(*x1 > *x0)) fail(name, safety->line, "corridor_x_max must exceed corridor_x_min");
      safety_cfg.corridor = Corridor<double>{*cy, *hw, *x0, *x1};
    } else if (given != 0) {
      fail(name, safety->line,
           "corridor needs all of corridor_center_y, corridor_half_width, corridor_x_min, "
           "corridor_x_max");
    }
    f.reject_unknown();
  }

  Fields run_f(*runsec, name);
  const std::string mode_text = lower(trim(run_f.require("mode")));
  RunMode mode;
  if (mode_text == "global" || mode_text == "method1") mode = RunMode::GlobalFrame;
  else if (mode_text == "local" || mode_text == "method2") mode = RunMode::LeaderFrame;
  else fail(name, run_f.line("mode"), "mode must be 'global' or 'local'");

  RunConfig cfg{
      mode,
      run_f.number("dt"),
      run_f.number("duration"),
      run_f.number_or("tracking_gain", 2.0),
      run_f.number_or("max_speed", 1.0),
      false,
      safety_cfg,
      plan_mission(ref, std::move(phase_specs), min_radius),
      std::move(path),
      std::nullopt,
  };
  if (auto s = run_f.find("strict")) cfg.strict = parse_bool(*s, name, run_f.line("strict"));
  run_f.reject_unknown();

  if (!(cfg.dt > 0)) fail(name, run_f.line("dt"), "dt must be positive");
  if (!(cfg.duration > 0)) fail(name, run_f.line("duration"), "duration must be positive");
  return cfg;
}

RunConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_scenario(in, path, base.empty() ? "." : base);
}

std::string scenario_to_text(const RunConfig& cfg) {
  const auto& ref = cfg.mission.reference();
  const auto& plan = cfg.mission.plan_matrix();
  std::ostringstream out;
  out << "[reference]\n";
  out << "leader_radius = " << fmt(ref.leader_radius) << "\n";
  out << "boundary_radius = " << fmt(ref.boundary_radius) << "\n";
  out << "angle2 = " << fmt(ref.angle2) << "\n";
  out << "angle3 = " << fmt(ref.angle3) << "\n";
  out << "min_radius = " << fmt(plan.min_radius) << "\n";
  for (const auto& ph : cfg.mission.phases()) {
    out << "\n[phase]\n";
    out << "start_time = " << fmt(ph.start_time) << "\n";
    out << "end_time = " << fmt(ph.end_time) << "\n";
    out << "radius2_start = " << fmt(ph.start.radius2) << "\n";
    out << "radius2_end = " << fmt(ph.end.radius2) << "\n";
    out << "radius3_start = " << fmt(ph.start.radius3) << "\n";
    out << "radius3_end = " << fmt(ph.end.radius3) << "\n";
    out << "angle2_start = " << fmt(ph.start.angle2) << "\n";
    out << "angle2_end = " << fmt(ph.end.angle2) << "\n";
    out << "angle3_start = " << fmt(ph.start.angle3) << "\n";
    out << "angle3_end = " << fmt(ph.end.angle3) << "\n";
  }
  out << "\n[leader]\n";
  for (const auto& s : cfg.leader.samples())
    out << "sample = " << fmt(s.time) << " " << fmt(s.position.x()) << " " << fmt(s.position.y())
        << " " << fmt(s.heading) << " " << fmt(s.elevation) << "\n";
  out << "\n[safety]\n";
  out << "lambda_min = " << fmt(cfg.safety.lambda_min) << "\n";
  out << "min_separation = " << fmt(cfg.safety.min_separation) << "\n";
  if (cfg.safety.corridor) {
    const auto& c = *cfg.safety.corridor;
    out << "corridor_center_y = " << fmt(c.center_y) << "\n";
    out << "corridor_half_width = " << fmt(c.half_width) << "\n";
    out << "corridor_x_min = " << fmt(c.x_min) << "\n";
    out << "corridor_x_max = " << fmt(c.x_max) << "\n";
  }
  out << "\n[run]\n";
  out << "mode = " << (cfg.mode == RunMode::GlobalFrame ? "global" : "local") << "\n";
  out << "dt = " << fmt(cfg.dt) << "\n";
  out << "duration = " << fmt(cfg.duration) << "\n";
  out << "tracking_gain = " << fmt(cfg.tracking_gain) << "\n";
  out << "max_speed = " << fmt(cfg.max_speed) << "\n";
  out << "strict = " << (cfg.strict ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace swarmform
