#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace framekit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "framekit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("framekit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenerateThenConstant) {
  const auto sys_path = path("ex.json");
  ASSERT_EQ(invoke({"generate", "--kind", "example_basis_pair", "--n", "4", "--output", sys_path}).code, 0);
  const auto r = invoke({"constant", "--input", sys_path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_json(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["status"], "exact");
}

TEST_F(CliTest, AnalyzeOrthonormalBasis) {
  const auto p = write("onb.json", R"({"m": 3, "n": 3, "vectors": [[1,0,0],[0,1,0],[0,0,1]]})");
  const auto r = invoke({"analyze", "--input", p});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = parse_json(r.out)["frame"];
  EXPECT_EQ(j["bessel"].get<double>(), 1.0);
  EXPECT_EQ(j["lower"].get<double>(), 1.0);
  EXPECT_EQ(j["beta"].get<double>(), 1.0);
  EXPECT_EQ(invoke({"analyze", "--input", p, "--format", "table"}).code, 0);
}

TEST_F(CliTest, RoundTripMatchesInMemoryAnalysis) {
  const auto p = path("g.json");
  ASSERT_EQ(invoke({"generate", "--kind", "random_gaussian", "--n", "7", "--m", "3", "--seed", "5",
                    "--output", p})
                .code,
            0);
  const auto r = invoke({"analyze", "--input", p});
  ASSERT_EQ(r.code, 0);
  const auto sys = random_gaussian_system(7, 3, 5);
  const json expected = {{"x", to_json(spectral_summary(sys.x()))},
                         {"f", to_json(spectral_summary(sys.f()))}};
  EXPECT_EQ(parse_json(r.out), expected);
}

TEST_F(CliTest, GenerateFromSpecFile) {
  const auto spec = write("spec.json", R"({"kind": "harmonic_funtf", "n": 6, "m": 3})");
  const auto r = invoke({"generate", "--input", spec});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(frame_from_json(parse_json(r.out)), harmonic_funtf(6, 3));
}

TEST_F(CliTest, SeedDeterminesOutput) {
  const auto a = invoke({"generate", "--kind", "tight_equinorm_pair", "--n", "5", "--m", "2", "--seed", "9"});
  const auto b = invoke({"generate", "--kind", "tight_equinorm_pair", "--n", "5", "--m", "2", "--seed", "9"});
  const auto c = invoke({"generate", "--kind", "tight_equinorm_pair", "--n", "5", "--m", "2", "--seed", "10"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);

  const auto p = path("big.json");
  ASSERT_EQ(invoke({"generate", "--kind", "random_gaussian", "--n", "25", "--m", "2", "--output", p}).code, 0);
  const auto r1 = invoke({"constant", "--input", p, "--trials", "5", "--seed", "3"});
  const auto r2 = invoke({"constant", "--input", p, "--trials", "5", "--seed", "3"});
  EXPECT_EQ(r1.out, r2.out);
  EXPECT_EQ(parse_json(r1.out)["status"], "lower_bound");
}

TEST_F(CliTest, SplitAndWitness) {
  const auto p = path("pair.json");
  ASSERT_EQ(invoke({"generate", "--kind", "tight_equinorm_pair", "--n", "6", "--m", "3", "--output", p}).code, 0);
  const auto s = invoke({"split", "--input", p});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto j = parse_json(s.out);
  EXPECT_NEAR(j["optimal"]["objective"].get<double>(), 2.0, 1e-9);
  EXPECT_NEAR(j["unit"]["objective"].get<double>(), 2.0, 1e-9);
  EXPECT_EQ(j["explicit"]["method"], "explicit");

  const auto w = invoke({"witness", "--input", p});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_GT(parse_json(w.out)["certified_lower_bound"].get<double>(), 0.0);
}

TEST_F(CliTest, VerifySuiteOverSeeds) {
  const auto r = invoke({"verify", "--suite", "all", "--seeds", "1..20"});
  EXPECT_EQ(r.code, 0) << r.out;
  std::istringstream lines(r.out);
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line);) {
    const auto j = parse_json(line);
    EXPECT_EQ(j["status"], "pass") << line;
    ++count;
  }
  EXPECT_EQ(count, 5u * 20u + 1u);
  EXPECT_EQ(invoke({"verify", "--suite", "par_split", "--seeds", "1,2", "--format", "table"}).code, 0);
}

TEST_F(CliTest, VerifyExitCodeReflectsFailure) {
  EXPECT_EQ(invoke({"verify", "--suite", "khintchine", "--k1", "0.9", "--n-max", "5"}).code,
            cli::check_failed);
  EXPECT_EQ(invoke({"verify", "--suite", "khintchine", "--n-max", "8"}).code, cli::ok);
}

TEST_F(CliTest, VerifyOnInputFile) {
  const auto p = path("ex.json");
  ASSERT_EQ(invoke({"generate", "--kind", "example_basis_pair", "--n", "4", "--output", p}).code, 0);
  const auto r = invoke({"verify", "--input", p, "--suite", "par_split"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_json(r.out)["status"], "pass");
}

TEST_F(CliTest, ErrorCodes) {
  const auto bad = write("bad.json", "{\n \"vectors\": [[1, 0],\n}");
  const auto r = invoke({"analyze", "--input", bad});
  EXPECT_EQ(r.code, cli::malformed_input);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

  const auto mismatch = write("mm.json", R"({"x": {"vectors": [[1, 0]]}, "f": {"vectors": [[1]]}})");
  EXPECT_EQ(invoke({"constant", "--input", mismatch}).code, cli::schema);

  const auto p = path("big.json");
  ASSERT_EQ(invoke({"generate", "--kind", "random_gaussian", "--n", "6", "--m", "2", "--output", p}).code, 0);
  const auto cap = invoke({"constant", "--input", p, "--cutoff", "5", "--exact"});
  EXPECT_EQ(cap.code, cli::capacity);
  EXPECT_NE(cap.err.find("cutoff 5"), std::string::npos) << cap.err;
  EXPECT_EQ(invoke({"constant", "--input", p, "--cutoff", "5", "--trials", "0"}).code, cli::precondition);

  const auto neq = invoke({"witness", "--input", p});
  EXPECT_EQ(neq.code, cli::precondition);

  EXPECT_EQ(invoke({"analyze", "--input", path("missing.json")}).code, cli::io);
  EXPECT_EQ(invoke({"constant"}).code, cli::precondition);
  EXPECT_EQ(invoke({"bogus"}).code, cli::usage);
  EXPECT_EQ(invoke({}).code, cli::usage);
  EXPECT_EQ(invoke({"generate", "--kind", "nope", "--n", "2"}).code, cli::usage);
  EXPECT_EQ(invoke({"generate", "--kind", "harmonic_funtf", "--n", "2", "--m", "3"}).code, cli::precondition);
}

TEST_F(CliTest, HelpExitsCleanly) { EXPECT_EQ(invoke({"--help"}).code, cli::ok); }
