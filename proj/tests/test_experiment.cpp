#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "strf/error.hpp"
#include "strf/experiment.hpp"

using namespace strf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("strf_test_experiment_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c;
  c.N_max = 12;
  c.K_max = 20;
  c.M = 4;
  c.horizons = {2.0, 8.0};
  c.n_replicates = 300;
  c.mc_samples = 2000;
  c.gap_replicates = 50;
  c.xi = {-0.1, 0.0, 0.1};
  c.out = out.string();
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"model": {"d": 3, "alpha_s": 0.5, "svf": "log"}, "seed": 7,
                                  "horizons": [5, 50], "convex": {"body": "ball", "features": 32}})");
  CHECK(c.model.d == 3);
  CHECK(c.model.alpha_s == 0.5);
  CHECK(c.model.svf == Svf::log);
  CHECK(c.seed == 7u);
  CHECK(c.horizons == std::vector<double>{5, 50});
  CHECK(c.convex.body == "ball");
  CHECK(c.convex.features == 32);
  CHECK_FALSE(c.mode.has_value());

  const auto flat = parse_config(R"({"gamma": 0.0, "mode": "sphere"})");
  CHECK(flat.model.gamma == 0.0);
  CHECK(flat.mode == Mode::sphere);

  // serialized config parses back to the same config
  const auto again = parse_config(config_json(c));
  CHECK(config_json(again) == config_json(c));

  CHECK_THROWS_AS(parse_config(R"({"alpha": 0.3})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"beta": 1}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"convex": {"shape": "box"}})"), ValidationError);
  CHECK_THROWS_AS(parse_config("{not json"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"seed": "x"})"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/strf.json"), ValidationError);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(validate(c, Mode::sphere));
  c.mode = Mode::convex;
  CHECK_THROWS_AS(validate(c, Mode::sphere), ValidationError);
  c.mode.reset();
  c.model.alpha_s = 2.5;
  CHECK_THROWS_AS(validate(c, Mode::sphere), ValidationError);
  c = ExperimentConfig{};
  c.horizons = {0.5};
  CHECK_THROWS_AS(validate(c, Mode::sphere), ValidationError);
  c = ExperimentConfig{};
  c.format = "xml";
  CHECK_THROWS_AS(validate(c, Mode::sphere), ValidationError);
  c = ExperimentConfig{};
  c.threads = 0;
  CHECK_THROWS_AS(validate(c, Mode::sphere), ValidationError);
  c = ExperimentConfig{};
  c.model.svf = Svf::log;
  CHECK_THROWS_AS(cmd_cf(c), ValidationError);
  CHECK_THROWS_AS(run_command("nope", ExperimentConfig{}), ValidationError);

  CHECK(exit_code(ErrorKind::validation) == 2);
  CHECK(exit_code(ErrorKind::numerical) == 3);
  CHECK(exit_code(ErrorKind::consistency) == 4);
}

TEST_CASE("table rendering") {
  CsvTable t({"name", "value"});
  t.add({"a", "1.5"});
  t.add({"b", "inf"});
  t.add({"c", "-2e-3"});
  CHECK(render_table(t, "csv") == t.str());
  const auto j = nlohmann::json::parse(render_table(t, "json"));
  CHECK(j["columns"] == nlohmann::json::array({"name", "value"}));
  CHECK(j["rows"][0][0] == "a");
  CHECK(j["rows"][0][1] == 1.5);
  CHECK(j["rows"][1][1] == "inf");
  CHECK(j["rows"][2][1] == -2e-3);
  CHECK_THROWS_AS(render_table(t, "xml"), ValidationError);
}

TEST_CASE("resolved node counts") {
  ExperimentConfig c;
  CHECK(resolved_nodes(c, 10.0) == 200);
  CHECK(resolved_nodes(c, 100.0) == 840);
  CHECK(resolved_nodes(c, 1000.0) == 120);
  c.n_nodes = 300;
  CHECK(resolved_nodes(c, 1000.0) == 300);
}

TEST_CASE("commands write deterministic outputs") {
  for (const char* cmd : {"spectra", "cumulants", "cf", "converge", "sample"}) {
    CAPTURE(cmd);
    const auto d1 = scratch(std::string(cmd) + "_1"), d2 = scratch(std::string(cmd) + "_2");
    auto c1 = small_config(d1), c2 = small_config(d2);
    c2.threads = 3;
    const auto r1 = run_command(cmd, c1);
    const auto r2 = run_command(cmd, c2);
    CHECK(r1.files == r2.files);
    CHECK(r1.report == r2.report);
    REQUIRE(r1.files.back() == "manifest.json");
    for (const auto& f : r1.files) {
      CAPTURE(f);
      REQUIRE(fs::exists(d1 / f));
      if (f != "manifest.json") CHECK(slurp(d1 / f) == slurp(d2 / f));
    }
    const auto m = nlohmann::json::parse(slurp(d1 / "manifest.json"));
    CHECK(m["command"] == cmd);
    CHECK(m["library_version"] == library_version());
    CHECK(m["files"].size() + 1 == r1.files.size());
    CHECK(m["config"]["seed"] == 42);
    // rerunning into the same directory reproduces every byte, manifest included
    const auto before = slurp(d1 / "manifest.json");
    run_command(cmd, c1);
    CHECK(slurp(d1 / "manifest.json") == before);
    fs::remove_all(d1);
    fs::remove_all(d2);
  }
}

TEST_CASE("seed changes sampled output") {
  const auto d1 = scratch("seed_1"), d2 = scratch("seed_2");
  auto c1 = small_config(d1), c2 = small_config(d2);
  c2.seed = 43;
  cmd_sample(c1);
  cmd_sample(c2);
  CHECK(slurp(d1 / "samples.csv") != slurp(d2 / "samples.csv"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("json output format") {
  const auto d = scratch("json");
  auto c = small_config(d);
  c.format = "json";
  const auto r = cmd_cf(c);
  CHECK(r.files == std::vector<std::string>{"cf.json", "manifest.json"});
  const auto j = nlohmann::json::parse(slurp(d / "cf.json"));
  CHECK(j["columns"][0] == "T");
  CHECK(j["rows"].size() == 3u * 3u);
  fs::remove_all(d);
}

TEST_CASE("convex dry run writes grid tables only") {
  const auto d = scratch("convex");
  auto c = small_config(d);
  c.model.d = 1;
  c.model.alpha_s = 0.4;
  c.n_replicates = 0;
  const auto r = cmd_convex(c);
  CHECK(r.files == std::vector<std::string>{"convex_grid.csv", "indicator_ft.csv", "manifest.json"});
  c.mode = Mode::sphere;
  CHECK_THROWS_AS(cmd_convex(c), ValidationError);
  fs::remove_all(d);
}
