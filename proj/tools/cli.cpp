#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "taclab/error.hpp"
#include "taclab/finite_kernel.hpp"
#include "taclab/montecarlo.hpp"
#include "taclab/parallel.hpp"
#include "taclab/prelimit.hpp"

namespace taclab::cli {

namespace {

const std::vector<std::pair<Command, std::string>> kCommands = {
    {Command::eval_kernel, "eval-kernel"}, {Command::tacnode, "tacnode"},       {Command::f2, "f2"},
    {Command::gcbo, "gcbo"},               {Command::converge_k, "converge-k"}, {Command::converge_n, "converge-n"},
    {Command::mc_compare, "mc-compare"},
};

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown field '" + it.key() + "'");
  }
}

template <class T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

double number(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return obj.at(key).get<double>();
}

cplx complex_value(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(where + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> number_list(const Json& obj, const char* key, const std::string& where) {
  std::vector<double> v;
  read(obj, key, v, where);
  return v;
}

EvalPoint parse_point(const Json& j, const std::string& where) {
  check_keys(j, {"s", "u", "t", "v"}, where);
  return {number(j, "s", where), number(j, "u", where), number(j, "t", where), number(j, "v", where)};
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i] < e[i - 1])) return false;
  }
  return true;
}

FiniteOptions finite_options(const GridConfig& g) {
  FiniteOptions o;
  o.circle_nodes = g.circle_nodes;
  o.line_nodes = g.line_nodes;
  o.grid_nodes = g.grid_nodes;
  return o;
}

Json model_json(const ModelParams& p) {
  Json j;
  j["n"] = p.n;
  j["m"] = p.m;
  j["a1"] = p.a1;
  j["a2"] = p.a2;
  j["nu"] = p.nu;
  if (p.K > 0) j["K"] = p.K;
  return j;
}

Report eval_kernel(const RunConfig& cfg) {
  Report r;
  const LimitKernel k(cfg.model, finite_options(cfg.grids));
  r.meta["model"] = model_json(cfg.model).dump();
  r.columns = {"s", "u", "t", "v", "value"};
  std::vector<EvalPoint> pts = cfg.points;
  if (pts.empty() && cfg.density.times.empty()) pts.push_back({0.4, 0.2, 0.6, -0.1});
  std::vector<std::size_t> sweep_start;
  for (double t : cfg.density.times) {
    sweep_start.push_back(pts.size());
    const int steps = static_cast<int>(std::llround((cfg.density.hi - cfg.density.lo) / cfg.density.step));
    for (int i = 0; i <= steps; ++i) {
      const double x = cfg.density.lo + i * cfg.density.step;
      pts.push_back({t, x, t, x});
    }
  }
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { vals[i] = k(pts[i]); });
  for (std::size_t i = 0; i < pts.size(); ++i) r.rows.push_back({pts[i].s, pts[i].u, pts[i].t, pts[i].v, vals[i]});
  for (std::size_t d = 0; d < cfg.density.times.size(); ++d) {
    const std::size_t b = sweep_start[d];
    const std::size_t e = d + 1 < sweep_start.size() ? sweep_start[d + 1] : pts.size();
    double mass = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double w = (i == b || i + 1 == e) ? 0.5 : 1.0;
      mass += w * cfg.density.step * vals[i];
    }
    r.footer["mass[t=" + fmt(cfg.density.times[d]) + "]"] = mass;
  }
  if (!cfg.density.times.empty()) r.footer["expected_mass"] = cfg.model.N();
  return r;
}

Report tacnode_cmd(const RunConfig& cfg) {
  Report r;
  const TacnodeKernel k(cfg.tacnode.sigma, cfg.grids.tacnode_nodes);
  r.meta["sigma"] = k.sigma();
  r.meta["sigma_tilde"] = k.sigma_tilde();
  r.meta["f2"] = k.f2();
  r.columns = {"tau1", "xi1", "tau2", "xi2", "value", "l_tac", "l_tac_resolvent"};
  std::vector<TacnodeCoords> pts = cfg.tacnode.points;
  if (pts.empty()) pts.push_back({cfg.tacnode.sigma, -0.3, 0.2, 0.4, -0.1});
  std::vector<std::vector<double>> rows(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto& c = pts[i];
    rows[i] = {c.tau1, c.xi1, c.tau2, c.xi2, k(c.tau1, c.xi1, c.tau2, c.xi2), k.l_tac(c.tau1, c.xi1, c.tau2, c.xi2),
               k.l_tac_resolvent(c.tau1, c.xi1, c.tau2, c.xi2)};
  });
  double gap = 0.0;
  for (const auto& row : rows) gap = std::max(gap, std::abs(row[5] - row[6]));
  r.rows = std::move(rows);
  r.footer["max_form_gap"] = gap;
  return r;
}

Report f2_cmd(const RunConfig& cfg) {
  Report r;
  std::vector<double> s = cfg.f2_s;
  if (s.empty()) {
    for (int i = -8; i <= 16; ++i) s.push_back(0.5 * i);
  }
  r.meta["nodes"] = cfg.grids.f2_nodes;
  r.columns = {"s", "f2", "one_minus_f2"};
  std::vector<double> v(s.size());
  parallel_for(s.size(), [&](std::size_t i) { v[i] = tw_f2(s[i], cfg.grids.f2_nodes); });
  bool monotone = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    r.rows.push_back({s[i], v[i], 1.0 - v[i]});
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] < s[i] && v[j] > v[i] + 1e-14) monotone = false;
    }
  }
  r.footer["monotone"] = monotone ? "PASS" : "FAIL";
  return r;
}

Report gcbo_cmd(const RunConfig& cfg) {
  Report r;
  const GcboSides g = gcbo_check(cfg.model, cfg.gcbo.z, cfg.gcbo.w, cfg.gcbo.truncation);
  r.meta["model"] = model_json(cfg.model).dump();
  r.meta["z"] = Json::array({cfg.gcbo.z.real(), cfg.gcbo.z.imag()}).dump();
  r.meta["w"] = Json::array({cfg.gcbo.w.real(), cfg.gcbo.w.imag()}).dump();
  r.meta["truncation"] = cfg.gcbo.truncation;
  r.columns = {"lhs_re", "lhs_im", "rhs_re", "rhs_im", "relative_gap"};
  const double gap = g.relative_gap();
  r.rows.push_back({g.lhs.real(), g.lhs.imag(), g.rhs.real(), g.rhs.imag(), gap});
  r.footer["verdict"] = gap < 1e-10 ? "PASS" : "FAIL";
  return r;
}

Report converge_k_cmd(const RunConfig& cfg) {
  Report r;
  const EvalPoint pt = cfg.points.empty() ? EvalPoint{0.4, 0.2, 0.6, -0.1} : cfg.points.front();
  const double limit = kernel_limit(pt, cfg.model, finite_options(cfg.grids));
  r.meta["model"] = model_json(cfg.model).dump();
  r.meta["point"] = Json::array({pt.s, pt.u, pt.t, pt.v}).dump();
  r.columns = {"K", "value", "limit", "abs_error", "rel_error"};
  PrelimitOptions po;
  po.line_nodes = cfg.grids.prelimit_line_nodes;
  std::vector<double> vals(cfg.ks.size());
  parallel_for(cfg.ks.size(), [&](std::size_t i) {
    ModelParams p = cfg.model;
    p.K = cfg.ks[i];
    vals[i] = kernel_at_K(pt, p, po);
  });
  std::vector<double> err;
  for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
    const double e = std::abs(vals[i] - limit);
    err.push_back(e);
    r.rows.push_back({double(cfg.ks[i]), vals[i], limit, e, e / std::abs(limit)});
  }
  r.footer["monotone"] = strictly_decreasing(err) ? "PASS" : "FAIL";
  return r;
}

Report converge_n_cmd(const RunConfig& cfg) {
  Report r;
  std::vector<TacnodeCoords> pts = cfg.tacnode.points;
  if (pts.empty()) pts.push_back({cfg.tacnode.sigma, -0.3, 0.2, 0.4, -0.1});
  r.columns = {"point", "sigma", "tau1", "xi1", "tau2", "xi2", "n", "finite", "limit", "abs_error"};
  const std::size_t nn = cfg.ns.size();
  std::vector<double> limits(pts.size());
  std::vector<double> finite(pts.size() * nn);
  parallel_for(pts.size() * (nn + 1), [&](std::size_t idx) {
    const std::size_t p = idx / (nn + 1);
    const std::size_t j = idx % (nn + 1);
    if (j == nn) {
      limits[p] = TacnodeKernel(pts[p].sigma, cfg.grids.tacnode_nodes)(pts[p].tau1, pts[p].xi1, pts[p].tau2, pts[p].xi2);
    } else {
      finite[p * nn + j] = finite_n_tacnode(cfg.ns[j], pts[p]);
    }
  });
  bool all = true;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    std::vector<double> err;
    for (std::size_t j = 0; j < nn; ++j) {
      const double e = std::abs(finite[p * nn + j] - limits[p]);
      err.push_back(e);
      const auto& c = pts[p];
      r.rows.push_back({double(p), c.sigma, c.tau1, c.xi1, c.tau2, c.xi2, double(cfg.ns[j]), finite[p * nn + j],
                        limits[p], e});
    }
    const bool ok = strictly_decreasing(err);
    all = all && ok;
    r.footer["monotone[point=" + std::to_string(p) + "]"] = ok ? "PASS" : "FAIL";
  }
  r.footer["monotone"] = all ? "PASS" : "FAIL";
  return r;
}

Report mc_compare_cmd(const RunConfig& cfg) {
  Report r;
  const McConfig& mc = cfg.mc;
  SampleOptions so;
  so.seed = mc.seed;
  so.bridge_correction = mc.bridge_correction;
  so.record_times = {mc.t};
  const std::vector<double> times = uniform_times(mc.times);
  // Snap t onto the grid when it is within rounding of a node.
  for (double x : times) {
    if (std::abs(x - mc.t) < 1e-9) so.record_times = {x};
  }
  const PathEnsemble ens = sample_noncolliding(cfg.model, times, mc.samples, so);
  const Histogram h = empirical_density(ens, so.record_times.front(), mc.bins, mc.lo, mc.hi);
  const LimitKernel k(cfg.model, finite_options(cfg.grids));
  const double t = so.record_times.front();
  const DensityReport rep = compare_density(h, [&](double x) { return equal_time_density(t, x - mc.shift, k); });
  r.meta["model"] = model_json(cfg.model).dump();
  r.meta["seed"] = mc.seed;
  r.meta["times"] = mc.times;
  r.meta["t"] = t;
  r.meta["shift"] = mc.shift;
  r.meta["bridge_correction"] = mc.bridge_correction ? "true" : "false";
  r.columns = {"x_lo", "x_hi", "count", "density", "sigma", "expected", "z"};
  for (std::size_t i = 0; i < h.bins(); ++i) {
    r.rows.push_back({h.edges[i], h.edges[i + 1], h.counts[i], h.density[i], h.sigma[i], rep.expected[i], rep.z[i]});
  }
  r.footer["proposals"] = ens.proposals;
  r.footer["accepted"] = ens.accepted;
  r.footer["acceptance_rate"] = ens.acceptance_rate();
  r.footer["acceptance_sigma"] = ens.acceptance_sigma();
  r.footer["histogram_mass"] = h.total_mass();
  r.footer["max_abs_z"] = rep.max_abs_z;
  r.footer["bins_exceeding_3sigma"] = rep.bins_exceeding_3sigma;
  r.footer["verdict"] = rep.pass() ? "PASS" : "FAIL";
  return r;
}

void write_meta(const Json& obj, std::ostream& os) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    os << "# " << it.key() << '=';
    if (it->is_string()) {
      os << it->get<std::string>();
    } else if (it->is_number_float()) {
      os << fmt(it->get<double>());
    } else {
      os << it->dump();
    }
    os << '\n';
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  for (const auto& [c, n] : kCommands) {
    if (n == name) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  for (const auto& [k, n] : kCommands) {
    if (k == c) return n;
  }
  return "?";
}

RunConfig parse_config(Command command, const Json& doc) {
  RunConfig cfg;
  cfg.command = command;
  cfg.model.n = 1;
  cfg.model.m = 1;
  cfg.model.a1 = -1.0;
  cfg.model.a2 = 1.0;
  cfg.model.nu = {-1.0, 1.0};
  if (command == Command::gcbo) cfg.model.K = 8;
  if (doc.is_null()) return cfg;

  check_keys(doc,
             {"command", "model", "points", "density", "tacnode", "f2", "grids", "mc", "gcbo", "converge", "output"},
             "config");
  if (doc.contains("command")) {
    std::string c;
    read(doc, "command", c, "config");
    if (parse_command(c) != command) throw ConfigError("config: command '" + c + "' does not match the subcommand");
  }
  if (doc.contains("model")) {
    const Json& m = doc["model"];
    check_keys(m, {"n", "m", "a1", "a2", "nu", "K"}, "model");
    read(m, "n", cfg.model.n, "model");
    read(m, "m", cfg.model.m, "model");
    read(m, "a1", cfg.model.a1, "model");
    read(m, "a2", cfg.model.a2, "model");
    read(m, "nu", cfg.model.nu, "model");
    read(m, "K", cfg.model.K, "model");
  }
  if (doc.contains("points")) {
    const Json& p = doc["points"];
    if (!p.is_array()) throw ConfigError("points: expected an array");
    for (std::size_t i = 0; i < p.size(); ++i) cfg.points.push_back(parse_point(p[i], "points[" + std::to_string(i) + "]"));
  }
  if (doc.contains("density")) {
    const Json& d = doc["density"];
    check_keys(d, {"t", "lo", "hi", "step"}, "density");
    cfg.density.times = number_list(d, "t", "density");
    read(d, "lo", cfg.density.lo, "density");
    read(d, "hi", cfg.density.hi, "density");
    read(d, "step", cfg.density.step, "density");
    if (!(cfg.density.step > 0.0) || !(cfg.density.hi > cfg.density.lo)) {
      throw ConfigError("density: need step > 0 and hi > lo");
    }
  }
  if (doc.contains("tacnode")) {
    const Json& t = doc["tacnode"];
    check_keys(t, {"sigma", "points", "grid"}, "tacnode");
    read(t, "sigma", cfg.tacnode.sigma, "tacnode");
    const double sigma = cfg.tacnode.sigma;
    if (t.contains("points")) {
      const Json& p = t["points"];
      if (!p.is_array()) throw ConfigError("tacnode.points: expected an array");
      for (std::size_t i = 0; i < p.size(); ++i) {
        const std::string where = "tacnode.points[" + std::to_string(i) + "]";
        check_keys(p[i], {"tau1", "xi1", "tau2", "xi2"}, where);
        cfg.tacnode.points.push_back({sigma, number(p[i], "tau1", where), number(p[i], "xi1", where),
                                      number(p[i], "tau2", where), number(p[i], "xi2", where)});
      }
    }
    if (t.contains("grid")) {
      const Json& g = t["grid"];
      check_keys(g, {"tau1", "xi1", "tau2", "xi2"}, "tacnode.grid");
      const auto t1 = number_list(g, "tau1", "tacnode.grid");
      const auto x1 = number_list(g, "xi1", "tacnode.grid");
      const auto t2 = number_list(g, "tau2", "tacnode.grid");
      const auto x2 = number_list(g, "xi2", "tacnode.grid");
      for (double a : t1)
        for (double b : x1)
          for (double c : t2)
            for (double d : x2) cfg.tacnode.points.push_back({sigma, a, b, c, d});
    }
  }
  if (doc.contains("f2")) {
    check_keys(doc["f2"], {"s"}, "f2");
    cfg.f2_s = number_list(doc["f2"], "s", "f2");
  }
  if (doc.contains("grids")) {
    const Json& g = doc["grids"];
    check_keys(g, {"circle_nodes", "line_nodes", "grid_nodes", "f2_nodes", "tacnode_nodes", "prelimit_line_nodes"},
               "grids");
    read(g, "circle_nodes", cfg.grids.circle_nodes, "grids");
    read(g, "line_nodes", cfg.grids.line_nodes, "grids");
    read(g, "grid_nodes", cfg.grids.grid_nodes, "grids");
    read(g, "f2_nodes", cfg.grids.f2_nodes, "grids");
    read(g, "tacnode_nodes", cfg.grids.tacnode_nodes, "grids");
    read(g, "prelimit_line_nodes", cfg.grids.prelimit_line_nodes, "grids");
  }
  if (doc.contains("mc")) {
    const Json& m = doc["mc"];
    check_keys(m, {"samples", "seed", "times", "t", "bins", "lo", "hi", "shift", "bridge_correction"}, "mc");
    read(m, "samples", cfg.mc.samples, "mc");
    read(m, "seed", cfg.mc.seed, "mc");
    read(m, "times", cfg.mc.times, "mc");
    read(m, "t", cfg.mc.t, "mc");
    read(m, "bins", cfg.mc.bins, "mc");
    read(m, "lo", cfg.mc.lo, "mc");
    read(m, "hi", cfg.mc.hi, "mc");
    read(m, "shift", cfg.mc.shift, "mc");
    read(m, "bridge_correction", cfg.mc.bridge_correction, "mc");
  }
  if (doc.contains("gcbo")) {
    const Json& g = doc["gcbo"];
    check_keys(g, {"z", "w", "truncation"}, "gcbo");
    if (g.contains("z")) cfg.gcbo.z = complex_value(g["z"], "gcbo.z");
    if (g.contains("w")) cfg.gcbo.w = complex_value(g["w"], "gcbo.w");
    read(g, "truncation", cfg.gcbo.truncation, "gcbo");
  }
  if (doc.contains("converge")) {
    const Json& c = doc["converge"];
    check_keys(c, {"K", "n"}, "converge");
    read(c, "K", cfg.ks, "converge");
    read(c, "n", cfg.ns, "converge");
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    check_keys(o, {"path", "format"}, "output");
    read(o, "path", cfg.out_path, "output");
    if (o.contains("format")) {
      std::string f;
      read(o, "format", f, "output");
      if (f == "csv") {
        cfg.format = Format::csv;
      } else if (f == "json") {
        cfg.format = Format::json;
      } else {
        throw ConfigError("output.format: expected csv or json");
      }
    }
  }
  return cfg;
}

Report run(const RunConfig& cfg) {
  cfg.model.validate();
  Report r;
  switch (cfg.command) {
    case Command::eval_kernel: r = eval_kernel(cfg); break;
    case Command::tacnode: r = tacnode_cmd(cfg); break;
    case Command::f2: r = f2_cmd(cfg); break;
    case Command::gcbo: r = gcbo_cmd(cfg); break;
    case Command::converge_k: r = converge_k_cmd(cfg); break;
    case Command::converge_n: r = converge_n_cmd(cfg); break;
    case Command::mc_compare: r = mc_compare_cmd(cfg); break;
  }
  r.command = command_name(cfg.command);
  return r;
}

void write_report(const Report& r, Format f, std::ostream& os) {
  if (f == Format::json) {
    Json j;
    j["command"] = r.command;
    j["meta"] = r.meta;
    j["columns"] = r.columns;
    j["rows"] = r.rows;
    j["footer"] = r.footer;
    os << j.dump(2) << '\n';
    return;
  }
  os << "# command=" << r.command << '\n';
  write_meta(r.meta, os);
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << '\n';
  }
  write_meta(r.footer, os);
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Kernels of non-colliding Brownian bridges and the tacnode process"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "override mc.seed");
  app.add_option("--threads", threads, "worker threads (default: TACLAB_THREADS or hardware)");
  app.fallthrough();
  std::vector<std::pair<CLI::App*, Command>> subs;
  const std::map<Command, std::string> help{
      {Command::eval_kernel, "limit kernel at points, optional equal-time density sweep"},
      {Command::tacnode, "extended tacnode kernel and its two forms"},
      {Command::f2, "Tracy-Widom F2 on a grid"},
      {Command::gcbo, "both sides of the Toeplitz/Fredholm identity"},
      {Command::converge_k, "finite-K kernel against the K = infinity limit"},
      {Command::converge_n, "finite-n kernel against the tacnode limit"},
      {Command::mc_compare, "Monte-Carlo histogram against the kernel diagonal"},
  };
  for (const auto& [c, n] : kCommands) subs.emplace_back(app.add_subcommand(n, help.at(c)), c);
  for (auto& s : subs) s.first->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int nthreads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (threads) {
    nthreads = *threads;
  } else if (const char* env = std::getenv("TACLAB_THREADS")) {
    try {
      nthreads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: TACLAB_THREADS is not an integer\n";
      return 2;
    }
  }
  set_thread_count(nthreads);

  try {
    Command command = Command::eval_kernel;
    for (auto& s : subs) {
      if (s.first->parsed()) command = s.second;
    }
    Json doc;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config '" + config_path + "'");
      try {
        doc = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    RunConfig cfg = parse_config(command, doc);
    if (seed) cfg.mc.seed = *seed;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format == "json" ? Format::json : Format::csv;
    const Report r = run(cfg);
    if (cfg.out_path.empty()) {
      write_report(r, cfg.format, std::cout);
    } else {
      std::ofstream out(cfg.out_path);
      if (!out) throw ConfigError("cannot open output '" + cfg.out_path + "'");
      write_report(r, cfg.format, out);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace taclab::cli
