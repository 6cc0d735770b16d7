// invperc: stochastic lattice model simulation and verification toolkit.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "invperc/io.hpp"
#include "invperc/runconfig.hpp"
#include "invperc/verify.hpp"

namespace {

using invperc::cli::RunConfig;

struct CommonOpts {
  std::string config_path;
  std::vector<int> dims;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  int replicas = 0;
  int jobs = 0;
  std::string analyses;
  std::string save_path;
  std::string render_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration; flags override");
  cmd->add_option("--dims", o.dims, "lattice extents, e.g. --dims 64,64")->delimiter(',');
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output base path");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--replicas", o.replicas, "independent seeds to run");
  cmd->add_option("--jobs", o.jobs, "worker threads for replicas");
  cmd->add_option("--analyze", o.analyses, "comma-separated analysis list");
  cmd->add_option("--save-config", o.save_path, "saved-configuration base path");
  cmd->add_option("--render", o.render_path, "SVG scene path");
}

RunConfig assemble(const std::string& model, const CommonOpts& o, CLI::App* cmd) {
  RunConfig cfg;
  if (!o.config_path.empty())
    cfg = RunConfig::from_json(
        nlohmann::json::parse(invperc::io::read_file(o.config_path)));
  cfg.model = model;
  if (cmd->count("--dims")) cfg.dims = o.dims;
  if (cmd->count("--seed")) cfg.seed = o.seed;
  if (cmd->count("--out")) cfg.out = o.out;
  if (cmd->count("--format")) cfg.format = o.format;
  if (cmd->count("--replicas")) cfg.replicas = o.replicas;
  if (cmd->count("--jobs")) cfg.jobs = o.jobs;
  if (cmd->count("--save-config")) cfg.save_path = o.save_path;
  if (cmd->count("--render")) cfg.render_path = o.render_path;
  if (cmd->count("--analyze")) {
    cfg.analyses.clear();
    std::string item;
    std::istringstream is(o.analyses);
    while (std::getline(is, item, ','))
      if (!item.empty()) cfg.analyses.push_back(item);
  }
  return cfg;
}

int execute(RunConfig cfg) {
  // an image output path implies a scene render
  for (const char* ext : {".svg", ".png"}) {
    std::string e = ext;
    if (cfg.render_path.empty() && cfg.out.size() > e.size() &&
        cfg.out.compare(cfg.out.size() - e.size(), e.size(), e) == 0)
      cfg.render_path = cfg.out.substr(0, cfg.out.size() - e.size()) + ".svg";
  }
  if (auto bad = cfg.validate()) {
    std::cerr << "error: invalid configuration field '" << *bad << "'\n";
    return 2;
  }
  auto bundle = invperc::cli::run(cfg);
  if (cfg.out.empty()) {
    std::cout << bundle.to_json().dump(2) << "\n";
  } else {
    for (auto& path : invperc::cli::persist(bundle, cfg))
      std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invperc: interchange, loop O(n), corner percolation and "
               "Poisson zoo simulations with cluster analytics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("invperc ") + invperc::cli::kVersion);

  // interchange
  auto* inter = app.add_subcommand("interchange", "random stirring to time beta");
  CommonOpts io_;
  double beta = 1.0;
  bool emit_cycles = false;
  std::string inter_lattice = "z2_window";
  add_common(inter, io_);
  inter->add_option("--beta", beta, "stopping time");
  inter->add_option("--lattice", inter_lattice, "z2_window | z2_torus | path | tree");
  inter->add_flag("--emit-cycles", emit_cycles, "write vertex lists per cycle");

  // corner
  auto* corner_cmd = app.add_subcommand("corner", "biased corner percolation window");
  CommonOpts co_;
  double p = 0.5, q = 0.5;
  add_common(corner_cmd, co_);
  corner_cmd->add_option("--p", p, "column sign bias");
  corner_cmd->add_option("--q", q, "row sign bias");

  // loopon
  auto* loop_cmd = app.add_subcommand("loopon", "loop O(n) face-flip chain");
  CommonOpts lo_;
  double x = 1.0, n = 1.0;
  long sweeps = 1000, sample_interval = 10;
  std::string loop_lattice = "hex";
  add_common(loop_cmd, lo_);
  loop_cmd->add_option("--x", x, "edge weight");
  loop_cmd->add_option("--n", n, "loop weight");
  loop_cmd->add_option("--sweeps", sweeps, "number of sweeps");
  loop_cmd->add_option("--sample-interval", sample_interval, "sweeps between samples");
  loop_cmd->add_option("--lattice", loop_lattice, "hex | z2_window | z2_torus");

  // zoo
  auto* zoo_cmd = app.add_subcommand("zoo", "Poisson zoo site percolation");
  CommonOpts zo_;
  double lambda = 0.1;
  std::string animal = "singleton";
  std::string zoo_lattice = "z2_window";
  add_common(zoo_cmd, zo_);
  zoo_cmd->add_option("--lambda", lambda, "animal intensity per vertex");
  zoo_cmd->add_option("--animal", animal,
                      "singleton | worm:geom:P[:CAP] | box:geom:P[:CAP] | shape:...");
  zoo_cmd->add_option("--lattice", zoo_lattice, "z2_window | z2_torus");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "analytics over a saved configuration");
  std::string an_in, an_out, an_list;
  analyze_cmd->add_option("--in", an_in, "saved configuration base path")->required();
  analyze_cmd->add_option("--out", an_out, "output base path");
  analyze_cmd->add_option("--analyses", an_list, "components,ends,mtp,heights");

  // render
  auto* render_cmd = app.add_subcommand("render", "SVG scene from a saved configuration");
  std::string rd_in, rd_out, rd_style = "heights";
  render_cmd->add_option("--in", rd_in, "saved configuration base path")->required();
  render_cmd->add_option("--out", rd_out, "SVG output path")->required();
  render_cmd->add_option("--style", rd_style, "plain | heights");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a named verification suite");
  std::string suite = "all";
  int scale = 1;
  std::string verify_out;
  verify_cmd->add_option("suite", suite, "suite name or 'all'");
  verify_cmd->add_option("--scale", scale, "workload multiplier")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", verify_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (inter->parsed()) {
      auto cfg = assemble("interchange", io_, inter);
      if (inter->count("--beta")) cfg.beta = beta;
      if (inter->count("--lattice")) cfg.lattice_kind = inter_lattice;
      if (inter->count("--emit-cycles")) cfg.emit_cycles = emit_cycles;
      return execute(cfg);
    }
    if (corner_cmd->parsed()) {
      auto cfg = assemble("corner", co_, corner_cmd);
      if (corner_cmd->count("--p")) cfg.p = p;
      if (corner_cmd->count("--q")) cfg.q = q;
      return execute(cfg);
    }
    if (loop_cmd->parsed()) {
      auto cfg = assemble("loopon", lo_, loop_cmd);
      if (loop_cmd->count("--x")) cfg.x = x;
      if (loop_cmd->count("--n")) cfg.n = n;
      if (loop_cmd->count("--sweeps")) cfg.sweeps = sweeps;
      if (loop_cmd->count("--sample-interval")) cfg.sample_interval = sample_interval;
      if (loop_cmd->count("--lattice"))
        cfg.lattice_kind = loop_lattice == "hex" ? "hex_patch" : loop_lattice;
      else if (cfg.lattice_kind == "z2_window")
        cfg.lattice_kind = "hex_patch";
      return execute(cfg);
    }
    if (zoo_cmd->parsed()) {
      auto cfg = assemble("zoo", zo_, zoo_cmd);
      if (zoo_cmd->count("--lambda")) cfg.lambda = lambda;
      if (zoo_cmd->count("--animal")) cfg.animal = animal;
      if (zoo_cmd->count("--lattice")) cfg.lattice_kind = zoo_lattice;
      return execute(cfg);
    }
    if (analyze_cmd->parsed()) {
      auto saved = invperc::io::load_config(an_in);
      std::vector<std::string> list;
      std::string item;
      std::istringstream is(an_list);
      while (std::getline(is, item, ','))
        if (!item.empty()) list.push_back(item);
      auto bundle = invperc::cli::analyze(saved, list);
      bundle.header = {{"tool", "invperc"},
                       {"version", invperc::cli::kVersion},
                       {"input", an_in}};
      if (an_out.empty()) {
        std::cout << bundle.to_json().dump(2) << "\n";
      } else {
        RunConfig sink;
        sink.out = an_out;
        for (auto& path : invperc::cli::persist(bundle, sink))
          std::cout << "wrote " << path << "\n";
      }
      return 0;
    }
    if (render_cmd->parsed()) {
      auto saved = invperc::io::load_config(rd_in);
      invperc::io::atomic_write(rd_out, invperc::cli::render_saved(saved, rd_style));
      std::cout << "wrote " << rd_out << "\n";
      return 0;
    }
    if (verify_cmd->parsed()) {
      auto results = invperc::verify::run_suites(suite, scale);
      nlohmann::json all = nlohmann::json::array();
      bool pass = true;
      for (auto& r : results) {
        for (auto& c : r.checks)
          std::printf("[%s] %s / %s%s%s\n", c.pass ? "PASS" : "FAIL",
                      r.suite.c_str(), c.name.c_str(),
                      c.detail.empty() ? "" : ": ",
                      c.detail.c_str());
        all.push_back(r.to_json());
        pass = pass && r.pass();
      }
      if (!verify_out.empty())
        invperc::io::atomic_write(verify_out, all.dump(2) + "\n");
      return pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
