#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace colcomm::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "colcomm");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("colcomm-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    unsetenv("COLCOMM_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

TEST_F(Cli, VerifyRegularVer) {
  const auto r = run_cli({"verify-regular", "--gadget", "ver", "--group", "ver"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "PASS, |S|=8, |g^-1(0)|=8, |g^-1(1)|=8, uniqueness checks=128\n");
}

TEST_F(Cli, VerifyRegularFailurePrintsWitness) {
  write("trivial.json", R"([{"row":[0,1,2,3],"col":[0,1,2,3]}])");
  const auto r = run_cli({"verify-regular", "--gadget", "ver", "--group", path("trivial.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("WITNESS: "), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  auto r = run_cli({"gen", "--N", "3", "--class", "1to1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("WITNESS: usage"), std::string::npos);
  EXPECT_EQ(run_cli({"gen", "--N", "16", "--class", "3to1"}).code, 2);
  EXPECT_EQ(run_cli({"gen", "--N", "131072", "--class", "1to1"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);

  write("bad.json", "{not json");
  r = run_cli({"classify", "--in", path("bad.json")});
  EXPECT_EQ(r.code, 2);

  write("bad_hex.json", R"({"n":4,"form":"full","z":["zz"]})");
  r = run_cli({"classify", "--in", path("bad_hex.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("WITNESS: format"), std::string::npos);
}

TEST_F(Cli, GenClassifyRoundTrip) {
  for (int seed = 0; seed < 100; ++seed) {
    for (const std::string kind : {"full", "bicol"}) {
      for (const auto& [cls, name] : {std::pair{"1to1", "OneToOne"}, std::pair{"2to1", "TwoToOne"}}) {
        const auto file = path("inst.json");
        ASSERT_EQ(run_cli({"gen", "--kind", kind, "--class", cls, "--N", "16", "--seed", std::to_string(seed),
                           "--out", file})
                      .code,
                  0);
        const auto r = run_cli({"classify", "--in", file});
        ASSERT_EQ(r.code, 0);
        EXPECT_EQ(r.out, std::string(name) + "\n") << kind << " " << cls << " seed " << seed;
      }
    }
  }
}

TEST_F(Cli, GenIsSeededAndEchoesSeed) {
  const auto a = run_cli({"gen", "--class", "2to1", "--N", "64", "--seed", "5"});
  const auto b = run_cli({"gen", "--class", "2to1", "--N", "64", "--seed", "5"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(io::json::parse(a.out).at("seed"), 5);

  setenv("COLCOMM_SEED", "5", 1);
  EXPECT_EQ(run_cli({"gen", "--class", "2to1", "--N", "64"}).out, a.out);
  setenv("COLCOMM_SEED", "banana", 1);
  EXPECT_EQ(run_cli({"gen", "--class", "2to1", "--N", "64"}).code, 2);
  unsetenv("COLCOMM_SEED");
  EXPECT_EQ(io::json::parse(run_cli({"gen", "--class", "2to1", "--N", "64"}).out).at("seed"), 1);
}

TEST_F(Cli, ReduceComposedTwoToOne) {
  const auto composed = path("c.json");
  ASSERT_EQ(run_cli({"gen", "--kind", "composed", "--class", "2to1", "--N", "4", "--seed", "3", "--out", composed}).code,
            0);
  EXPECT_EQ(run_cli({"classify", "--in", composed}).out, "TwoToOne\n");

  const auto reduced = path("r.json");
  auto r = run_cli({"reduce", "--gadget", "ver", "--n", "2", "--in", composed, "--out", reduced});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "length=256 input=TwoToOne output=TwoToOne\n");
  EXPECT_EQ(run_cli({"classify", "--in", reduced}).out, "TwoToOne\n");

  r = run_cli({"reduce", "--n", "2", "--in", composed});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(io::json::parse(r.out).at("x").size(), 256u);
  EXPECT_EQ(r.err, "length=256 input=TwoToOne output=TwoToOne\n");

  EXPECT_EQ(run_cli({"reduce", "--n", "3", "--in", composed}).code, 2);
  EXPECT_EQ(run_cli({"reduce", "--n", "2", "--in", composed, "--cap", "2"}).code, 2);
  EXPECT_EQ(run_cli({"reduce", "--n", "2", "--in", composed, "--cap", "2", "--force"}).code, 0);
}

TEST_F(Cli, VerifyClaim) {
  auto r = run_cli({"verify-claim", "--n", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "PASS, seed=1, inputs=16, pairs=256\n");
  r = run_cli({"verify-claim", "--n", "2", "--mode", "sampled", "--trials", "500", "--seed", "9"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("PASS, seed=9, inputs=", 0), 0u);
  EXPECT_NE(r.out.find(", pairs=500\n"), std::string::npos);
  EXPECT_EQ(run_cli({"verify-claim", "--n", "4"}).code, 2);
}

TEST_F(Cli, SimulateCsv) {
  auto r = run_cli({"simulate", "--protocol", "det", "--N", "16", "--trials", "50", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string l1, l2, l3;
  std::getline(lines, l1);
  std::getline(lines, l2);
  std::getline(lines, l3);
  EXPECT_EQ(l1, "# seed=2");
  EXPECT_EQ(l2, "protocol,N,trials,correct_rate,ci_low,ci_high,mean_cost");
  EXPECT_EQ(l3.rfind("det,16,50,1.000000,", 0), 0u) << l3;

  r = run_cli({"simulate", "--protocol", "dec2search", "--oracle", "adv", "--t", "2", "--d", "5", "--trials", "10"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("dec2search/adv,16,10,"), std::string::npos);
  EXPECT_NE(r.out.find(",14.000000\n"), std::string::npos);

  const auto a = run_cli({"simulate", "--protocol", "rand", "--balanced", "--trials", "400", "--workers", "1"});
  const auto b = run_cli({"simulate", "--protocol", "rand", "--balanced", "--trials", "400", "--workers", "3"});
  EXPECT_EQ(a.out, b.out);

  write("neither.json", R"({"n":4,"form":"full","z":["0","0","0","1","2","3","4","5","6","7","8","9","a","b","c","d"]})");
  EXPECT_EQ(run_cli({"simulate", "--protocol", "det", "--in", path("neither.json")}).code, 2);
  EXPECT_EQ(run_cli({"simulate", "--protocol", "dec2search", "--t", "0"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", "--protocol", "det", "--N", "8"}).code, 2);
}

TEST_F(Cli, Bench) {
  const auto r = run_cli({"bench", "--N", "16", "--trials", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) rows += line.rfind("#", 0) != 0 && line.rfind("protocol", 0) != 0;
  EXPECT_EQ(rows, 10);
  EXPECT_NE(r.out.find("det:1to1,16,20,1.000000"), std::string::npos);
  EXPECT_NE(r.out.find("dec2search/lex:2to1,16,20,"), std::string::npos);
}

}  // namespace
}  // namespace colcomm::cli
