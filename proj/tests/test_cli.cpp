#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "invperc/io.hpp"
#include "invperc/svg.hpp"
#include "invperc/runconfig.hpp"
#include "invperc/verify.hpp"

using namespace invperc;
using invperc::cli::RunConfig;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("invperc_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int counter() {
    static int c = 0;
    return ++c;
  }
};

std::string slurp(const std::string& path) { return io::read_file(path); }

std::string binary_path() {
  if (const char* bin = std::getenv("INVPERC_BIN")) return bin;
  // fall back to the sibling of this test executable
  auto self = fs::read_symlink("/proc/self/exe");
  return (self.parent_path() / "invperc").string();
}

int run_binary(const std::string& args) {
  std::string bin = binary_path();
  REQUIRE(fs::exists(bin));
  std::string cmd = bin + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("run configuration round-trips through json") {
  RunConfig cfg;
  cfg.model = "corner";
  cfg.lattice_kind = "z2_window";
  cfg.dims = {64, 128};
  cfg.p = 0.2;
  cfg.q = 0.8;
  cfg.seed = 99;
  cfg.analyses = {"slope", "parity"};
  cfg.out = "/tmp/x";
  cfg.replicas = 3;
  cfg.jobs = 2;
  cfg.emit_cycles = true;
  cfg.save_path = "/tmp/save";
  auto j = cfg.to_json();
  CHECK(RunConfig::from_json(j) == cfg);
  CHECK(RunConfig::from_json(nlohmann::json::parse(j.dump())) == cfg);
}

TEST_CASE("validation pinpoints the offending field") {
  RunConfig cfg;
  cfg.model = "corner";
  cfg.dims = {32, 32};
  cfg.p = 0.2;
  cfg.q = 0.8;
  CHECK(!cfg.validate().has_value());
  cfg.q = 1.0;
  CHECK(cfg.validate().value() == "q");
  cfg.q = 0.8;
  cfg.model = "martini";
  CHECK(cfg.validate().value() == "model");
  cfg.model = "zoo";
  cfg.animal = "gibberish";
  CHECK(cfg.validate().value() == "animal");
  cfg.animal = "singleton";
  cfg.lambda = -2;
  CHECK(cfg.validate().value() == "lambda");
}

TEST_CASE("identical config and seed give byte-identical csv bodies") {
  RunConfig cfg;
  cfg.model = "corner";
  cfg.dims = {96, 192};
  cfg.p = 0.2;
  cfg.q = 0.8;
  cfg.seed = 11;
  cfg.analyses = {"slope", "heights", "parity"};
  auto a = cli::run(cfg);
  auto b = cli::run(cfg);
  REQUIRE(a.tables.size() == b.tables.size());
  for (auto& [name, body] : a.tables) CHECK(body == b.tables.at(name));
  // headers may differ in timestamp only
  CHECK(a.header["config"] == b.header["config"]);
}

TEST_CASE("replica fan-out merges deterministically across thread counts") {
  RunConfig cfg;
  cfg.model = "loopon";
  cfg.lattice_kind = "hex_patch";
  cfg.dims = {6, 6};
  cfg.x = 1.0;
  cfg.n = 2.0;
  cfg.sweeps = 40;
  cfg.sample_interval = 20;
  cfg.seed = 5;
  cfg.replicas = 4;
  cfg.jobs = 1;
  auto serial = cli::run(cfg);
  cfg.jobs = 4;
  auto parallel = cli::run(cfg);
  CHECK(serial.tables.at("stats") == parallel.tables.at("stats"));
  CHECK(serial.report["replicas"] == parallel.report["replicas"]);
}

TEST_CASE("corner slope report averages to the theoretical value across replicas") {
  RunConfig cfg;
  cfg.model = "corner";
  cfg.dims = {512, 1024};
  cfg.p = 0.2;
  cfg.q = 0.8;
  cfg.seed = 100;
  cfg.replicas = 8;
  cfg.jobs = 4;
  cfg.analyses = {"slope"};
  auto bundle = cli::run(cfg);
  double sum = 0;
  int n = 0;
  for (auto& rep : bundle.report["replicas"]) {
    sum += rep["slope_mean"].get<double>();
    ++n;
  }
  REQUIRE(n == 8);
  CHECK(std::abs(sum / n - 1.0) < 0.1);
}

TEST_CASE("saved configurations round trip") {
  TempDir dir;
  nlohmann::json header{{"model", "loopon"}, {"kind", "hex_patch"},
                        {"dims", {4, 4}}, {"payload", "edge_bits"}};
  std::vector<char> bits{1, 0, 1, 1, 0, 0, 0, 1, 1, 0, 1};
  io::save_config(dir.file("cfg"), header, bits);
  auto loaded = io::load_config(dir.file("cfg"));
  CHECK(loaded.bits == bits);
  CHECK(loaded.header["model"] == "loopon");
  CHECK(loaded.header["bit_count"] == bits.size());
}

TEST_CASE("atomic writes leave no partial file behind") {
  TempDir dir;
  io::atomic_write(dir.file("x.txt"), "hello");
  CHECK(slurp(dir.file("x.txt")) == "hello");
  CHECK(!fs::exists(dir.file("x.txt.tmp")));
}

TEST_CASE("binary: determinism, exit codes, rendering") {
  TempDir dir;
  SUBCASE("same run twice is byte-identical") {
    std::string out1 = dir.file("a.csv"), out2 = dir.file("b.csv");
    CHECK(run_binary("interchange --dims 12,12 --beta 1.0 --seed 4 --out " + out1) == 0);
    CHECK(run_binary("interchange --dims 12,12 --beta 1.0 --seed 4 --out " + out2) == 0);
    CHECK(slurp(out1) == slurp(out2));
  }
  SUBCASE("usage errors exit 2") {
    CHECK(run_binary("unknown-model") == 2);
    CHECK(run_binary("corner --dims 16,16 --p 2.0 --q 0.8 --out " + dir.file("x")) == 2);
    CHECK(run_binary("loopon --lattice nonsense --dims 4,4 --out " + dir.file("y")) == 2);
  }
  SUBCASE("verify suites pass and write a report") {
    std::string rep = dir.file("verify.json");
    CHECK(run_binary("verify treap-oracle --out " + rep) == 0);
    auto j = nlohmann::json::parse(slurp(rep));
    CHECK(j.at(0).at("pass") == true);
    CHECK(run_binary("verify no-such-suite") == 2);
  }
  SUBCASE("render is deterministic and non-empty") {
    std::string base = dir.file("cfg");
    CHECK(run_binary("corner --dims 32,32 --p 0.3 --q 0.7 --seed 2 --out " +
                     dir.file("r") + " --save-config " + base) == 0);
    CHECK(run_binary("render --in " + base + " --out " + dir.file("s1.svg")) == 0);
    CHECK(run_binary("render --in " + base + " --out " + dir.file("s2.svg")) == 0);
    auto s1 = slurp(dir.file("s1.svg"));
    CHECK(s1 == slurp(dir.file("s2.svg")));
    CHECK(s1.find("<svg") != std::string::npos);
    CHECK(s1.find("<line") != std::string::npos);
  }
  SUBCASE("interchange render highlights the longest cycles") {
    std::string svg = dir.file("inter.svg");
    CHECK(run_binary("interchange --dims 25,25 --beta 1.0 --seed 9 --out " +
                     dir.file("ic") + " --render " + svg) == 0);
    auto s = slurp(svg);
    CHECK(s.find("<polyline") != std::string::npos);
    // two highlighted cycles in distinct colors
    CHECK(s.find("#d62728") != std::string::npos);
    CHECK(s.find("#1f77b4") != std::string::npos);
  }
  SUBCASE("analyze consumes saved configurations") {
    std::string base = dir.file("zoocfg");
    CHECK(run_binary("zoo --lattice z2_torus --dims 24,24 --lambda 0.4 --seed 6 --out " +
                     dir.file("z") + " --save-config " + base) == 0);
    std::string out = dir.file("an");
    CHECK(run_binary("analyze --in " + base + " --analyses components,mtp --out " + out) == 0);
    auto j = nlohmann::json::parse(slurp(out + ".json"));
    CHECK(j["report"].contains("component_count"));
    CHECK(j["report"]["mass_transport"].size() == 3);
    for (auto& m : j["report"]["mass_transport"]) CHECK(m["holds"] == true);
  }
}

TEST_CASE("oversized scenes are rejected with a downsampling hint") {
  svg::Document doc(100, 100, /*primitive_limit=*/3);
  doc.circle(1, 1, 1, "#000");
  doc.circle(2, 2, 1, "#000");
  doc.circle(3, 3, 1, "#000");
  CHECK_THROWS_WITH_AS(doc.circle(4, 4, 1, "#000"),
                       doctest::Contains("downsample"), std::runtime_error);
}

TEST_CASE("library verify suites all pass at unit scale") {
  for (auto& suite : verify::run_suites("all", 1)) {
    for (auto& c : suite.checks) {
      INFO(suite.suite, "/", c.name, ": ", c.detail);
      CHECK(c.pass);
    }
  }
}
