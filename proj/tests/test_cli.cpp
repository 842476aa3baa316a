#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "pevsim/io.hpp"
#include "pevsim/report.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace pevsim;
using namespace pevsim::testing;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("pevsim_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(PEVSIM_CLI) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string stdout_text() const { return read_text(path("stdout.txt")); }

  static std::string fixture() {
    return " --network " + data_path("table1_network.json") + " --trips " + data_path("table1_trips_seed7.json");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EvaluateMatchesLibraryScore) {
  ASSERT_EQ(run("evaluate" + fixture() + " --stations 1,4 --out " + path("out")), 0);
  const json rep = parse_json_text(read_text(path("out/evaluation.json")), "report");
  EXPECT_EQ(rep["total_unsatisfied_soc"].get<double>(), kGoldenUStations14);
  EXPECT_EQ(rep["trips"].size(), 100u);
  EXPECT_NE(stdout_text().find("U = "), std::string::npos);
}

TEST_F(Cli, EvaluateRejectsUnknownStation) {
  EXPECT_EQ(run("evaluate" + fixture() + " --stations 1,99 --out " + path("out")), 2);
  EXPECT_NE(read_text(path("stderr.txt")).find("UnknownNode"), std::string::npos);
}

TEST_F(Cli, EvaluateEmptyTripsFile) {
  write_text(path("empty.json"), "[]\n");
  ASSERT_EQ(run("evaluate --network " + data_path("table1_network.json") + " --trips " + path("empty.json") +
                " --stations 2 --out " + path("out")),
            0);
  const json rep = parse_json_text(read_text(path("out/evaluation.json")), "report");
  EXPECT_EQ(rep["total_unsatisfied_soc"].get<double>(), 0.0);
  EXPECT_EQ(rep["fit"].get<double>(), 1.0);
}

TEST_F(Cli, EvaluateFromIncidenceFiles) {
  ASSERT_EQ(run("evaluate --incidence " + data_path("table1_incidence.csv") + " --lengths " +
                data_path("table1_lengths.csv") + " --trips " + data_path("single_trip.json") +
                " --stations 1 --out " + path("out")),
            0);
  const json rep = parse_json_text(read_text(path("out/evaluation.json")), "report");
  EXPECT_EQ(rep["total_unsatisfied_soc"].get<double>(), 2.0);
}

TEST_F(Cli, OptimizeWritesResultCurveAndDot) {
  ASSERT_EQ(run("optimize" + fixture() + " --k 2 --seed 7 --out " + path("out")), 0);
  const json res = parse_json_text(read_text(path("out/ga_result.json")), "result");
  ASSERT_EQ(run("oracle" + fixture() + " --k 2 --out " + path("oracle")), 0);
  const json oracle = parse_json_text(read_text(path("oracle/oracle.json")), "oracle");
  EXPECT_EQ(res["best_u"], oracle["best_u"]);
  EXPECT_EQ(res["best_stations"], oracle["best_stations"]);
  EXPECT_EQ(res["curve"].size(), 200u);
  EXPECT_EQ(res["config"]["k"], 2);
  EXPECT_EQ(parse_curve_csv(read_text(path("out/fit_curve.csv"))).size(), 200u);
  const std::string dot = read_text(path("out/network.dot"));
  for (const auto& s : res["best_stations"]) {
    EXPECT_NE(dot.find("  " + std::to_string(s.get<int>()) + " [area="), std::string::npos);
  }
  EXPECT_NE(dot.find("station=true"), std::string::npos);
}

TEST_F(Cli, OptimizeRejectsZeroGenerations) {
  EXPECT_EQ(run("optimize" + fixture() + " --k 2 --generations 0 --out " + path("out")), 2);
  EXPECT_FALSE(fs::exists(path("out/ga_result.json")));
}

TEST_F(Cli, OracleSingleTrip) {
  ASSERT_EQ(run("oracle --network " + data_path("table1_network.json") + " --trips " + data_path("single_trip.json") +
                " --k 1 --out " + path("out")),
            0);
  const json res = parse_json_text(read_text(path("out/oracle.json")), "oracle");
  EXPECT_EQ(res["best_stations"], json::array({4}));
  EXPECT_EQ(res["best_u"].get<double>(), 0.0);
}

TEST_F(Cli, OracleFullSet) {
  ASSERT_EQ(run("oracle" + fixture() + " --k 6 --out " + path("out")), 0);
  const json res = parse_json_text(read_text(path("out/oracle.json")), "oracle");
  EXPECT_EQ(res["best_stations"], json::array({1, 2, 3, 4, 5, 6}));
}

TEST_F(Cli, OracleSearchSpaceTooLarge) {
  ASSERT_EQ(run("gen-network --rows 5 --cols 6 --out " + path("grid.json")), 0);
  write_text(path("empty.json"), "[]");
  EXPECT_EQ(run("oracle --network " + path("grid.json") + " --trips " + path("empty.json") + " --k 15 --out " +
                path("out")),
            2);
  const std::string err = read_text(path("stderr.txt"));
  EXPECT_NE(err.find("SearchSpaceTooLarge"), std::string::npos);
  EXPECT_NE(err.find("155117520"), std::string::npos);
}

TEST_F(Cli, GenTripsReproducesGoldenFile) {
  ASSERT_EQ(run("gen-trips --network " + data_path("table1_network.json") + " --config " +
                data_path("table1_demand.json") + " --out " + path("trips.json")),
            0);
  EXPECT_EQ(read_text(path("trips.json")), read_text(data_path("table1_trips_seed7.json")));
  EXPECT_NE(stdout_text().find("residential -> commercial"), std::string::npos);
}

TEST_F(Cli, GenTripsZeroCountWarns) {
  write_text(path("cfg.json"), R"({"trip_count": 0, "default_weight": 1})");
  ASSERT_EQ(run("gen-trips --network " + data_path("table1_network.json") + " --config " + path("cfg.json") +
                " --out " + path("trips.json")),
            0);
  EXPECT_EQ(read_text(path("trips.json")), "[]\n");
  EXPECT_NE(read_text(path("stderr.txt")).find("warning"), std::string::npos);
}

TEST_F(Cli, GenTripsEmptyAreaClass) {
  ASSERT_EQ(run("gen-network --rows 1 --cols 1 --out " + path("one.json")), 0);
  write_text(path("cfg.json"),
             R"({"trip_count": 5, "pair_weights": [{"from": "residential", "to": "commercial", "weight": 1}]})");
  EXPECT_EQ(run("gen-trips --network " + path("one.json") + " --config " + path("cfg.json") + " --out " +
                path("trips.json")),
            2);
  EXPECT_NE(read_text(path("stderr.txt")).find("EmptyAreaClass"), std::string::npos);
}

TEST_F(Cli, MissingFileIsInputError) {
  EXPECT_EQ(run("evaluate --network " + path("nope.json") + " --trips " + path("nope.json") + " --stations 1"), 2);
  EXPECT_EQ(run("bogus-command"), 2);
}
