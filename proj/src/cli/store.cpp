#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mcflab/cli.hpp"

namespace mcflab::cli {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string snap_name(std::size_t k, bool arrival) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshots/snap_%05zu%s.csv", k, arrival ? ".arrival" : "");
  return buf;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

}  // namespace

std::string geometry_csv(const Immersion& f) {
  std::string s;
  if (is_curve(f)) {
    const auto& c = std::get<DiscreteCurve>(f);
    s = "index,x,y,k\n";
    for (std::size_t i = 0; i < c.size(); ++i)
      s += std::to_string(i) + "," + fmt17(c.xs()[i]) + "," + fmt17(c.ys()[i]) + "," + fmt17(c.curvature(i)) + "\n";
  } else {
    const auto& p = std::get<AxisymProfile>(f);
    s = "index,x,u\n";
    for (std::size_t i = 0; i < p.size(); ++i)
      s += std::to_string(i) + "," + fmt17(p.grid()[i]) + "," + fmt17(p.values()[i]) + "\n";
  }
  return s;
}

namespace {

json geometry_meta(const Immersion& f) {
  if (is_curve(f)) return {{"kind", "curve"}, {"closed", std::get<DiscreteCurve>(f).closed()}};
  const auto& p = std::get<AxisymProfile>(f);
  return {{"kind", "profile"},
          {"m", p.m()},
          {"chart", p.chart() == ProfileChart::Graph ? "graph" : "radial"},
          {"boundary", p.boundary() == ProfileBoundary::Periodic ? "periodic" : "neumann"},
          {"period", p.period()},
          {"z_center", p.z_center()}};
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::size_t cols) {
  std::ifstream in(p);
  if (!in) throw NotFound("missing store file " + p.string());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) r.push_back(c.empty() ? std::nan("") : std::stod(c));
    if (r.size() != cols) throw std::runtime_error(p.string() + ": wrong column count");
    rows.push_back(std::move(r));
  }
  return rows;
}

Immersion read_geometry(const fs::path& p, const json& g) {
  if (g.at("kind") == "curve") {
    const auto rows = read_csv(p, 4);
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
      xs.push_back(r[1]);
      ys.push_back(r[2]);
    }
    return DiscreteCurve(std::move(xs), std::move(ys), g.at("closed").get<bool>());
  }
  const auto rows = read_csv(p, 3);
  std::vector<double> x, u;
  for (const auto& r : rows) {
    x.push_back(r[1]);
    u.push_back(r[2]);
  }
  const int m = g.at("m").get<int>();
  if (g.at("chart") == "radial") return AxisymProfile::radial(m, std::move(u), g.at("z_center").get<double>());
  const auto bc = g.at("boundary") == "periodic" ? ProfileBoundary::Periodic : ProfileBoundary::Neumann;
  return AxisymProfile(m, std::move(x), std::move(u), bc, g.at("period").get<double>());
}

json estimate_json(const flow::SingularTimeEstimate& e) {
  return {{"t_hat", e.t_hat},           {"sigma", e.sigma},          {"slope", e.slope},
          {"intercept", e.intercept},   {"tail_begin", e.tail_begin}, {"tail_count", e.tail_count}};
}

json class_json(const flow::SingularityClass& c) {
  return {{"type", flow::to_string(c.type)},
          {"s_min", c.s_min},
          {"s_max", c.s_max},
          {"s_mean", c.s_mean},
          {"s_last", c.s_last},
          {"ratio", c.ratio},
          {"trend", c.trend},
          {"floor_ok", c.floor_ok},
          {"compact_type", c.compact_type},
          {"tail_begin", c.tail_begin},
          {"pbar_vertex", c.pbar_vertex},
          {"pbar", {c.pbar.x, c.pbar.y}},
          {"picks", c.picks},
          {"s_values", c.s_values}};
}

flow::SingularityType parse_type(const std::string& s) {
  if (s == "TypeI") return flow::SingularityType::TypeI;
  if (s == "TypeII") return flow::SingularityType::TypeII;
  return flow::SingularityType::Indeterminate;
}

}  // namespace

std::vector<std::string> write_store(const fs::path& dir, const flow::FlowTrajectory& traj, const StoreInfo& info) {
  fs::create_directories(dir / "snapshots");
  std::vector<std::string> files;
  const auto& s = traj.snapshots();

  json meta;
  meta["version"] = kVersion;
  meta["config"] = json::parse(config_to_json(info.config));
  meta["geometry"] = geometry_meta(s.front().geom);
  meta["terminal"] = {{"event", flow::to_string(traj.terminal)}, {"detail", traj.terminal_detail}};
  meta["snapshots"] = s.size();
  meta["estimate"] = info.estimate ? estimate_json(*info.estimate) : json(nullptr);
  meta["estimate_error"] = info.estimate_error;
  meta["classification"] = info.classification ? class_json(*info.classification) : json(nullptr);
  write_text(dir / "metadata.json", meta.dump(2) + "\n");
  files.push_back("metadata.json");

  std::string series = "t,sup_II,measure,s\n";
  std::string index = "snapshot,t,sup_II,argmax,measure,arrival\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double sv = info.estimate ? s[k].sup_ii * s[k].sup_ii * (info.estimate->t_hat - s[k].t) : std::nan("");
    series += fmt17(s[k].t) + "," + fmt17(s[k].sup_ii) + "," + fmt17(s[k].measure) + "," +
              (info.estimate ? fmt17(sv) : std::string()) + "\n";
    index += std::to_string(k) + "," + fmt17(s[k].t) + "," + fmt17(s[k].sup_ii) + "," + std::to_string(s[k].argmax) +
             "," + fmt17(s[k].measure) + "," + (s[k].arrival ? "1" : "0") + "\n";
    write_text(dir / snap_name(k, false), geometry_csv(s[k].geom));
    files.push_back(snap_name(k, false));
    if (s[k].arrival) {
      write_text(dir / snap_name(k, true), geometry_csv(*s[k].arrival));
      files.push_back(snap_name(k, true));
    }
  }
  write_text(dir / "series.csv", series);
  write_text(dir / "snapshots/index.csv", index);
  files.push_back("series.csv");
  files.push_back("snapshots/index.csv");
  return files;
}

Store load_store(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw NotFound("store not found: " + dir.string());
  std::ifstream in(dir / "metadata.json");
  if (!in) throw NotFound("store has no metadata.json: " + dir.string());
  json meta;
  try {
    in >> meta;
  } catch (const std::exception& e) {
    throw std::runtime_error("unreadable metadata.json: " + std::string(e.what()));
  }
  Store st;
  st.info.config = parse_config(meta.at("config").dump());
  st.traj = flow::FlowTrajectory(st.info.config.flow);
  const json& g = meta.at("geometry");
  const auto rows = read_csv(dir / "snapshots/index.csv", 6);
  for (const auto& r : rows) {
    const std::size_t k = static_cast<std::size_t>(r[0]);
    Immersion geom = read_geometry(dir / snap_name(k, false), g);
    std::optional<Immersion> arr;
    if (r[5] != 0.0) arr = read_geometry(dir / snap_name(k, true), g);
    st.traj.append(flow::make_snapshot(r[1], std::move(geom), std::move(arr)));
  }
  const std::string ev = meta.at("terminal").at("event");
  for (auto e : {flow::TerminalEvent::Running, flow::TerminalEvent::CurvatureCap, flow::TerminalEvent::TimeLimit,
                 flow::TerminalEvent::StepLimit, flow::TerminalEvent::SingularState})
    if (flow::to_string(e) == ev) st.traj.terminal = e;
  st.traj.terminal_detail = meta.at("terminal").at("detail");
  if (!meta.at("estimate").is_null()) {
    const json& e = meta.at("estimate");
    flow::SingularTimeEstimate est;
    est.t_hat = e.at("t_hat");
    est.sigma = e.at("sigma");
    est.slope = e.at("slope");
    est.intercept = e.at("intercept");
    est.tail_begin = e.at("tail_begin");
    est.tail_count = e.at("tail_count");
    st.info.estimate = est;
  }
  st.info.estimate_error = meta.value("estimate_error", "");
  if (!meta.at("classification").is_null()) {
    const json& c = meta.at("classification");
    flow::SingularityClass sc;
    sc.type = parse_type(c.at("type"));
    sc.s_min = c.at("s_min");
    sc.s_max = c.at("s_max");
    sc.s_mean = c.at("s_mean");
    sc.s_last = c.at("s_last");
    sc.ratio = c.at("ratio");
    sc.trend = c.at("trend");
    sc.floor_ok = c.at("floor_ok");
    sc.compact_type = c.at("compact_type");
    sc.tail_begin = c.at("tail_begin");
    sc.pbar_vertex = c.at("pbar_vertex");
    sc.pbar = {c.at("pbar")[0].get<double>(), c.at("pbar")[1].get<double>()};
    sc.picks = c.at("picks").get<std::vector<std::size_t>>();
    sc.s_values = c.at("s_values").get<std::vector<double>>();
    st.info.classification = sc;
  }
  return st;
}

}  // namespace mcflab::cli
