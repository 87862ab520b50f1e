#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "trajeval/app.hpp"
#include "trajeval/generators/generators.hpp"
#include "trajeval/random.hpp"

namespace trajeval::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir = new fs::path(testing::scratch_dir("cli"));
    const auto real = testing::city_fixture(45, 3);
    real_csv = testing::write_fixture(real, *dir, "real").string();
    syn_csv = testing::write_fixture(generators::GaussianJitterBlurrer(80.0, 0.1).blur(real, 2), *dir, "jitter").string();
    testing::write_city_layers(*dir / "layers");
    checkins = testing::write_fixture(testing::checkin_fixture(240, 5), *dir, "checkins").string();
    users = testing::write_fixture(testing::tul_fixture(6, 4, 300.0, 1), *dir, "users").string();
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir);
    delete dir;
  }
  static std::string out(const std::string& name) { return (*dir / name).string(); }

  static fs::path* dir;
  static std::string real_csv, syn_csv, checkins, users;
};

fs::path* Cli::dir = nullptr;
std::string Cli::real_csv, Cli::syn_csv, Cli::checkins, Cli::users;

TEST_F(Cli, Profile) {
  const auto r = invoke({"profile", "--dataset", real_csv, "--out", out("profile"), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(fs::path(out("profile")) / "profile.json"));
  const auto manifest = nlohmann::json::parse(slurp(fs::path(out("profile")) / "manifest.json"));
  EXPECT_EQ(manifest["command"], "profile");
  EXPECT_EQ(manifest["inputs"].size(), 1u);
  EXPECT_EQ(invoke({"profile", "--dataset", real_csv, "--out", out("p2"), "--format", "xml"}).code, 2);
}

TEST_F(Cli, GridSelectAndSweep) {
  const auto sel = invoke({"grid", "select", "--dataset", real_csv, "--out", out("select")});
  ASSERT_EQ(sel.code, 0) << sel.err;
  EXPECT_NE(sel.out.find("selected cell edge"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(out("select")) / "grid_candidates.csv"));

  const auto sweep = invoke({"grid", "sweep", "--dataset", real_csv, "--syn", real_csv, "--min-edge", "300",
                             "--max-edge", "400", "--step", "100", "--offsets", "2", "--metrics",
                             "g_rank,transition_probabilities", "--out", out("sweep")});
  ASSERT_EQ(sweep.code, 0) << sweep.err;
  EXPECT_EQ(slurp(fs::path(out("sweep")) / "sweep.csv"),
            "metric,edge_m,mean,std,n_offsets\n"
            "g_rank,300,1.000000,0.000000,4\ng_rank,400,1.000000,0.000000,4\n"
            "transition_probabilities,300,0.000000,0.000000,4\ntransition_probabilities,400,0.000000,0.000000,4\n");

  const auto lonely = invoke({"grid", "sweep", "--dataset", real_csv, "--out", out("sweep2")});
  EXPECT_EQ(lonely.code, 2);
  EXPECT_NE(lonely.err.find("--syn"), std::string::npos);
}

TEST_F(Cli, EvaluateIsByteReproducible) {
  const std::vector<std::string> base{"evaluate", "--dataset", real_csv,   "--syn",        syn_csv,
                                      "--preset", "use-case-b", "--layers", out("layers"), "--cell-edge",
                                      "400",      "--format",   "csv"};
  auto first = base, second = base;
  first.insert(first.end(), {"--out", out("eval1")});
  second.insert(second.end(), {"--out", out("eval2")});
  const auto a = invoke(first);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(invoke(second).code, 0);
  const auto report = slurp(fs::path(out("eval1")) / "report.csv");
  EXPECT_EQ(report, slurp(fs::path(out("eval2")) / "report.csv"));
  EXPECT_NE(report.find("jitter,"), std::string::npos);
  EXPECT_NE(a.out.find("Original"), std::string::npos);
  const auto m1 = nlohmann::json::parse(slurp(fs::path(out("eval1")) / "manifest.json"));
  const auto m2 = nlohmann::json::parse(slurp(fs::path(out("eval2")) / "manifest.json"));
  EXPECT_EQ(m1["config_hash"], m2["config_hash"]);
  EXPECT_EQ(m1["outputs"], m2["outputs"]);
}

TEST_F(Cli, EvaluateWithoutLayersIsPartial) {
  const auto r = invoke({"evaluate", "--dataset", real_csv, "--syn", syn_csv, "--preset", "use-case-b",
                         "--cell-edge", "400", "--out", out("partial")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("location_implausibility"), std::string::npos);
  const auto ok = invoke({"evaluate", "--dataset", real_csv, "--syn", syn_csv, "--preset", "use-case-b",
                          "--cell-edge", "400", "--allow-partial", "--out", out("partial")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("N/A"), std::string::npos);
}

TEST_F(Cli, UnknownPresetListsPresets) {
  const auto r = invoke({"evaluate", "--dataset", real_csv, "--syn", syn_csv, "--preset", "nope", "--out", out("x")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("use-case-a, use-case-b"), std::string::npos) << r.err;
  const auto missing = invoke({"evaluate", "--dataset", real_csv, "--syn", syn_csv, "--out", out("x")});
  EXPECT_EQ(missing.code, 2);
}

TEST_F(Cli, MalformedCsvNamesTheLine) {
  const auto bad = *dir / "bad.csv";
  std::ofstream(bad) << "user_id,traj_id,timestamp,x,y\nu,t,0,1,2\nu,t,60,oops,2\n";
  const auto r = invoke({"profile", "--dataset", bad.string(), "--out", out("bad")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(Cli, MiaScenarios) {
  const auto r = invoke({"attack", "mia", "--dataset", checkins, "--generator", "identity", "--seeds", "2",
                         "--targets-per-class", "30", "--out", out("mia")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("model identity / scenario main"), std::string::npos) << r.out;
  for (const char* f : {"attack.json", "decisions.csv", "histogram.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(fs::path(out("mia")) / f)) << f;
  const auto result = nlohmann::json::parse(slurp(fs::path(out("mia")) / "attack.json"));
  EXPECT_GE(result["accuracy"].get<double>(), 0.95);

  const auto again = invoke({"attack", "mia", "--dataset", checkins, "--generator", "identity", "--seeds", "2",
                             "--targets-per-class", "30", "--out", out("mia2")});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(slurp(fs::path(out("mia")) / "decisions.csv"), slurp(fs::path(out("mia2")) / "decisions.csv"));

  const auto released = invoke({"attack", "mia", "--dataset", checkins, "--scenario", "released_only", "--seeds",
                                "1", "--targets-per-class", "30", "--out", out("mia3")});
  EXPECT_EQ(released.code, 0) << released.err;

  const auto both = invoke({"attack", "mia", "--dataset", checkins, "--scenario", "released_only", "--aux",
                            checkins, "--out", out("mia4")});
  EXPECT_EQ(both.code, 2);
  const auto masked = invoke({"attack", "mia", "--dataset", checkins, "--scenario", "masked", "--out", out("mia5")});
  EXPECT_EQ(masked.code, 2);
}

TEST_F(Cli, TulAndPlot) {
  const auto r = invoke({"attack", "tul", "--dataset", users, "--generator", "identity", "--out", out("tul")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("legacy"), std::string::npos);
  EXPECT_NE(r.out.find("gap 0.0 pp"), std::string::npos) << r.out;

  const auto hist = invoke({"attack", "mia", "--dataset", checkins, "--seeds", "1", "--targets-per-class", "20",
                            "--out", out("plotsrc")});
  ASSERT_EQ(hist.code, 0) << hist.err;
  const auto p = invoke({"plot", (fs::path(out("plotsrc")) / "histogram.csv").string(), "--out", out("plot")});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(slurp(fs::path(out("plot")) / "histogram.svg").rfind("<svg", 0), 0u);
}

TEST_F(Cli, ConfigFilePrecedence) {
  const auto cfg = *dir / "cfg.json";
  std::ofstream(cfg) << R"({"format":"json"})";
  const auto r = invoke({"profile", "--dataset", real_csv, "--config", cfg.string(), "--out", out("cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(fs::path(out("cfg")) / "profile.json"));
  const auto flag = invoke(
      {"profile", "--dataset", real_csv, "--config", cfg.string(), "--format", "csv", "--out", out("cfg2")});
  ASSERT_EQ(flag.code, 0);
  EXPECT_TRUE(fs::exists(fs::path(out("cfg2")) / "profile.csv"));
  const auto bad = *dir / "bad_cfg.json";
  std::ofstream(bad) << R"({"colour":"red"})";
  EXPECT_EQ(invoke({"profile", "--dataset", real_csv, "--config", bad.string(), "--out", out("cfg3")}).code, 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"profile"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

}  // namespace
}  // namespace trajeval::cli
