#include "lhcoh/cli.hpp"
#include "lhcoh/io.hpp"

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <sstream>

using namespace lhcoh;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lhcoh_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("index lists") {
  CHECK(parse_index_list("4") == std::vector<std::size_t>{4});
  CHECK(parse_index_list("1:4") == std::vector<std::size_t>{1, 2, 3, 4});
  CHECK(parse_index_list("2:9:3,1") == std::vector<std::size_t>{2, 5, 8, 1});
  CHECK_THROWS(parse_index_list("4:1"));
  CHECK_THROWS(parse_index_list("a"));
  CHECK_THROWS(parse_index_list("1,,2"));
  CHECK_THROWS(parse_index_list("1:2:0"));
}

TEST_CASE("usage errors exit with 2") {
  const std::string out = scratch("usage.csv").string();
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"toy", "--out", out}).code == kExitUsage);
  CHECK(run({"toy", "--mechanism", "ring", "--out", out}).code == kExitUsage);
  const auto bare = run({"toy", "--mechanism", "nearest", "--gamma", "1", "--out", out});
  CHECK(bare.code == kExitUsage);
  CHECK(bare.err.find("unit") != std::string::npos);
  CHECK(run({"toy", "--mechanism", "nearest", "--m", "0:3", "--out", out}).code == kExitUsage);
  CHECK(run({"toy", "--mechanism", "nearest", "--m", "33", "--out", out}).code == kExitUsage);
  CHECK(run({"detailed", "--config", "x.json", "--sigma", "30", "--out", out}).code == kExitUsage);
  CHECK(run({"--version"}).code == kExitClean);
}

TEST_CASE("config errors exit with 3") {
  const fs::path bad = scratch("bad.json");
  write_text_file(bad, "{ not json");
  const std::string out = scratch("cfg.csv").string();
  CHECK(run({"detailed", "--config", bad.string(), "--out", out}).code == kExitConfig);
  write_text_file(bad, R"({"label": "x"})");
  const auto r = run({"detailed", "--config", bad.string(), "--out", out});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("nu1_cm1") != std::string::npos);
  CHECK(run({"detailed", "--config", scratch("missing.json").string(), "--out", out}).code ==
        kExitConfig);
}

TEST_CASE("toy sweep writes CSV, plots and a replayable manifest") {
  const fs::path csv = scratch("toy.csv");
  const fs::path pt = scratch("pt.csv");
  const std::string svg = scratch("toy").string();
  const auto r = run({"toy", "--mechanism", "dipole", "--m", "1,2,4", "--out", csv.string(),
                      "--pt-out", pt.string(), "--pt-samples", "11", "--svg", svg});
  REQUIRE(r.code == kExitClean);
  const std::string text = read_text_file(csv);
  CHECK(text.rfind(std::string(kToyCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(fs::exists(svg + "_eta.svg"));
  CHECK(fs::exists(svg + "_pt.svg"));
  const std::string pt_text = read_text_file(pt);
  CHECK(pt_text.rfind("t_ps,P_m1,P_m4,P_m16,P_m32\n0,1,1,1,1\n", 0) == 0);

  const auto manifest = nlohmann::json::parse(read_text_file(csv.string() + ".manifest.json"));
  CHECK(manifest["command"] == "toy");
  CHECK(manifest["tool_version"] == kToolVersion);
  CHECK(manifest["outputs"].size() == 6);
  CHECK(manifest["outputs"][0]["digest"] == content_digest(text));
  CHECK(manifest["parameters"]["coupling"] == "10meV");

  const auto replay = run({"replay", csv.string() + ".manifest.json", "--out-dir",
                           scratch("replay").string()});
  CHECK(replay.code == kExitClean);
  CHECK(replay.out.find("DIFFERENT") == std::string::npos);
}

TEST_CASE("replay detects modified outputs") {
  const fs::path csv = scratch("toy2.csv");
  REQUIRE(run({"toy", "--mechanism", "nearest", "--m", "3", "--out", csv.string()}).code == 0);
  auto manifest = nlohmann::json::parse(read_text_file(csv.string() + ".manifest.json"));
  manifest["outputs"][0]["digest"] = "fnv1a64:0000000000000000";
  write_text_file(csv.string() + ".manifest.json", manifest.dump());
  const auto replay = run({"replay", csv.string() + ".manifest.json", "--out-dir",
                           scratch("replay2").string()});
  CHECK(replay.code == 1);
  CHECK(replay.out.find("DIFFERENT") != std::string::npos);
}

TEST_CASE("diverging rows exit with 4 and are annotated") {
  const fs::path csv = scratch("dark.csv");
  const auto r = run({"toy", "--mechanism", "pairwise", "--gamma-diss", "0/ns", "--m", "2,32",
                      "--out", csv.string()});
  CHECK(r.code == kExitPartial);
  const std::string text = read_text_file(csv);
  // Rows that diverge keep the finite partial efficiency of each route.
  const auto start = text.find("\n2,0.0625,");
  REQUIRE(start != std::string::npos);
  const std::string row = text.substr(start + 1, text.find('\n', start + 1) - start - 1);
  CHECK(row.ends_with(",nan,nan,nan"));
  const auto manifest = nlohmann::json::parse(read_text_file(csv.string() + ".manifest.json"));
  CHECK(manifest["row_annotations"].size() == 1);
  CHECK(manifest["exit_status"] == kExitPartial);
}

TEST_CASE("detailed sweep and shipped geometry") {
  const fs::path cfg = scratch("geometry.json");
  REQUIRE(run({"geometry", "--out", cfg.string()}).code == 0);
  const fs::path csv = scratch("detailed.csv");
  const auto r = run({"detailed", "--config", cfg.string(), "--kind", "asymmetric", "--m", "1:3",
                      "--sigma", "0cm-1,30cm-1", "--realizations", "3", "--seed", "5", "--workers",
                      "2", "--out", csv.string()});
  REQUIRE(r.code == kExitClean);
  const std::string text = read_text_file(csv);
  CHECK(text.rfind(std::string(kSweepCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  CHECK(r.out.find("sigma = 30 cm-1") != std::string::npos);
  const auto manifest = nlohmann::json::parse(read_text_file(csv.string() + ".manifest.json"));
  CHECK(manifest["config_digest"] == content_digest(read_text_file(cfg)));
  CHECK(manifest["master_seed"] == 5);
}
