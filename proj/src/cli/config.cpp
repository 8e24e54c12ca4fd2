#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mcflab/cli.hpp"

namespace mcflab::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "invalid configuration:";
  for (const auto& x : v) s += "\n  - " + x;
  return s;
}

const std::set<std::string> kScenarios{"circle",   "sphere_profile", "cylinder_profile", "dumbbell",
                                       "limacon",  "ellipse",        "from_file"};

void scenario_defaults(ScenarioConfig& c) {
  if (c.scenario == "limacon") {
    c.N = 512;
    c.flow.resample_every = 1;
    c.flow.resample_gamma = 8.0;
    c.flow.curvature_cap = 1e4;
  } else if (c.scenario == "dumbbell") {
    c.N = 801;
  } else if (c.scenario == "sphere_profile" || c.scenario == "cylinder_profile") {
    c.N = 64;
  }
}

struct Reader {
  std::vector<std::string>& problems;

  const json* group(const json& root, const char* name, const std::set<std::string>& keys) {
    if (!root.contains(name)) return nullptr;
    const json& g = root.at(name);
    if (!g.is_object()) {
      problems.push_back(std::string(name) + " must be an object");
      return nullptr;
    }
    for (auto it = g.begin(); it != g.end(); ++it)
      if (!keys.count(it.key())) problems.push_back("unknown key " + std::string(name) + "." + it.key());
    return &g;
  }

  template <class T>
  void get(const json* g, const char* key, const std::string& path, T& out) {
    if (!g || !g->contains(key)) return;
    const json& v = g->at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (v.is_null()) {
          out = std::numeric_limits<double>::infinity();
          return;
        }
        if (!v.is_number()) throw std::runtime_error("number expected");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::runtime_error("integer expected");
        if constexpr (std::is_unsigned_v<T>)
          if (v.get<long long>() < 0) throw std::runtime_error("non-negative integer expected");
      } else {
        if (!v.is_string()) throw std::runtime_error("string expected");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      problems.push_back(path + ": " + e.what());
    }
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> p) : std::runtime_error(join(p)), problems(std::move(p)) {}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"configuration must be a JSON object"});

  std::vector<std::string> problems;
  Reader rd{problems};
  ScenarioConfig c;
  const std::set<std::string> top{"scenario", "geometry", "discretization", "caps", "blowup", "seed", "output"};
  for (auto it = root.begin(); it != root.end(); ++it)
    if (!top.count(it.key())) problems.push_back("unknown key " + it.key());
  if (!root.contains("scenario")) problems.push_back("scenario is required");
  rd.get(&root, "scenario", "scenario", c.scenario);
  if (!kScenarios.count(c.scenario)) problems.push_back("unknown scenario '" + c.scenario + "'");
  scenario_defaults(c);

  const json* g = rd.group(root, "geometry",
                           {"radius", "center", "a", "b", "loop", "gamma", "m", "neck", "bulb", "half_length",
                            "stretch", "length", "file"});
  rd.get(g, "radius", "geometry.radius", c.radius);
  if (g && g->contains("center")) {
    const json& v = g->at("center");
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      c.center_x = v[0].get<double>();
      c.center_y = v[1].get<double>();
    } else {
      problems.push_back("geometry.center must be [x, y]");
    }
  }
  rd.get(g, "a", "geometry.a", c.axis_a);
  rd.get(g, "b", "geometry.b", c.axis_b);
  rd.get(g, "loop", "geometry.loop", c.loop);
  rd.get(g, "gamma", "geometry.gamma", c.gamma);
  rd.get(g, "m", "geometry.m", c.m);
  rd.get(g, "neck", "geometry.neck", c.neck);
  rd.get(g, "bulb", "geometry.bulb", c.bulb);
  rd.get(g, "half_length", "geometry.half_length", c.half_length);
  rd.get(g, "stretch", "geometry.stretch", c.stretch);
  rd.get(g, "length", "geometry.length", c.length);
  rd.get(g, "file", "geometry.file", c.file);

  const json* d = rd.group(root, "discretization",
                           {"N", "c_cfl", "resample_every", "resample_gamma", "extrapolation_depth"});
  rd.get(d, "N", "discretization.N", c.N);
  rd.get(d, "c_cfl", "discretization.c_cfl", c.flow.c_cfl);
  rd.get(d, "resample_every", "discretization.resample_every", c.flow.resample_every);
  rd.get(d, "resample_gamma", "discretization.resample_gamma", c.flow.resample_gamma);
  rd.get(d, "extrapolation_depth", "discretization.extrapolation_depth", c.flow.extrapolation_depth);

  const json* cp = rd.group(root, "caps", {"curvature_cap", "t_max", "max_steps"});
  rd.get(cp, "curvature_cap", "caps.curvature_cap", c.flow.curvature_cap);
  rd.get(cp, "t_max", "caps.t_max", c.flow.t_max);
  rd.get(cp, "max_steps", "caps.max_steps", c.flow.max_steps);

  const json* b = rd.group(root, "blowup", {"j_count", "rate", "t0"});
  rd.get(b, "j_count", "blowup.j_count", c.j_count);
  rd.get(b, "rate", "blowup.rate", c.rate);
  rd.get(b, "t0", "blowup.t0", c.t0);
  rd.get(&root, "seed", "seed", c.seed);
  rd.get(&root, "output", "output", c.output);

  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) problems.push_back(std::string(name) + " must be a positive length");
  };
  const std::string& s = c.scenario;
  if (s == "circle" || s == "sphere_profile" || s == "cylinder_profile") positive(c.radius, "geometry.radius");
  if (s == "ellipse") {
    positive(c.axis_a, "geometry.a");
    positive(c.axis_b, "geometry.b");
  }
  if (s == "limacon") {
    if (!(c.loop > 0.0 && c.loop < 1.0)) problems.push_back("geometry.loop must lie in (0, 1)");
    if (!(c.gamma >= 0.0)) problems.push_back("geometry.gamma must be non-negative");
  }
  if (s == "sphere_profile" && c.m < 1) problems.push_back("geometry.m must be at least 1");
  if ((s == "cylinder_profile" || s == "dumbbell") && c.m < 2) problems.push_back("geometry.m must be at least 2");
  if (s == "cylinder_profile") positive(c.length, "geometry.length");
  if (s == "dumbbell") {
    positive(c.neck, "geometry.neck");
    positive(c.bulb, "geometry.bulb");
    positive(c.half_length, "geometry.half_length");
    positive(c.stretch, "geometry.stretch");
    if (!(c.bulb > c.neck)) problems.push_back("geometry.bulb must exceed geometry.neck");
  }
  if (s == "from_file") {
    if (c.file.empty())
      problems.push_back("geometry.file is required for from_file");
    else if (!fs::exists(c.file))
      problems.push_back("geometry.file '" + c.file + "' does not exist");
  }
  if (c.N < 16) problems.push_back("discretization.N must be at least 16");
  if (!(c.flow.c_cfl > 0.0)) problems.push_back("discretization.c_cfl must be positive");
  if (c.flow.extrapolation_depth < 1 || c.flow.extrapolation_depth > 8)
    problems.push_back("discretization.extrapolation_depth must be in [1, 8]");
  if (!(c.flow.resample_gamma >= 0.0)) problems.push_back("discretization.resample_gamma must be non-negative");
  if (!(c.flow.curvature_cap > 0.0)) problems.push_back("caps.curvature_cap must be positive");
  if (!(c.flow.t_max > 0.0)) problems.push_back("caps.t_max must be positive");
  if (c.flow.max_steps == 0) problems.push_back("caps.max_steps must be positive");
  if (c.j_count < 1) problems.push_back("blowup.j_count must be at least 1");
  if (!(c.rate > 0.0 && c.rate < 1.0)) problems.push_back("blowup.rate must lie in (0, 1)");
  if (!(c.t0 >= 0.0)) problems.push_back("blowup.t0 must be non-negative");
  if (c.output.empty()) problems.push_back("output must not be empty");

  if (problems.empty()) {
    try {
      const Immersion f = build_initial(c);
      const double k = sup_ii(f);
      if (!(c.flow.curvature_cap > k))
        problems.push_back("caps.curvature_cap must exceed the initial sup|II| = " + fmt17(k));
    } catch (const std::exception& e) {
      problems.push_back(std::string("initial geometry: ") + e.what());
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot read configuration " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["scenario"] = c.scenario;
  j["geometry"] = {{"radius", c.radius},
                   {"center", {c.center_x, c.center_y}},
                   {"a", c.axis_a},
                   {"b", c.axis_b},
                   {"loop", c.loop},
                   {"gamma", c.gamma},
                   {"m", c.m},
                   {"neck", c.neck},
                   {"bulb", c.bulb},
                   {"half_length", c.half_length},
                   {"stretch", c.stretch},
                   {"length", c.length},
                   {"file", c.file}};
  j["discretization"] = {{"N", c.N},
                         {"c_cfl", c.flow.c_cfl},
                         {"resample_every", c.flow.resample_every},
                         {"resample_gamma", c.flow.resample_gamma},
                         {"extrapolation_depth", c.flow.extrapolation_depth}};
  j["caps"] = {{"curvature_cap", num(c.flow.curvature_cap)},
               {"t_max", num(c.flow.t_max)},
               {"max_steps", c.flow.max_steps}};
  j["blowup"] = {{"j_count", c.j_count}, {"rate", c.rate}, {"t0", c.t0}};
  j["seed"] = c.seed;
  j["output"] = c.output;
  return j.dump(2);
}

namespace {

DiscreteCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> cols;
  {
    std::stringstream hs(line);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  const auto ix = std::find(cols.begin(), cols.end(), "x") - cols.begin();
  const auto iy = std::find(cols.begin(), cols.end(), "y") - cols.begin();
  if (ix >= static_cast<long>(cols.size()) || iy >= static_cast<long>(cols.size()))
    throw std::runtime_error(path + " needs x and y columns");
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) f.push_back(c);
    if (f.size() != cols.size()) throw std::runtime_error(path + ": ragged row");
    xs.push_back(std::stod(f[static_cast<std::size_t>(ix)]));
    ys.push_back(std::stod(f[static_cast<std::size_t>(iy)]));
  }
  return DiscreteCurve(std::move(xs), std::move(ys), true);
}

}  // namespace

Immersion build_initial(const ScenarioConfig& c) {
  const std::string& s = c.scenario;
  if (s == "circle") return DiscreteCurve::circle(c.radius, c.N, {c.center_x, c.center_y});
  if (s == "ellipse") return DiscreteCurve::ellipse(c.axis_a, c.axis_b, c.N);
  if (s == "limacon") return DiscreteCurve::limacon(c.loop, c.N, c.gamma);
  if (s == "sphere_profile") return AxisymProfile::sphere(c.radius, c.m, c.N);
  if (s == "cylinder_profile") return AxisymProfile::cylinder(c.radius, c.m, c.length, c.N);
  if (s == "dumbbell") return AxisymProfile::dumbbell(c.neck, c.bulb, c.half_length, c.m, c.N, c.stretch);
  if (s == "from_file") return read_curve_csv(c.file);
  throw std::invalid_argument("unknown scenario " + s);
}

}  // namespace mcflab::cli
