#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "oracles.hpp"
#include "rlam/cli.hpp"
#include "rlam/detfact.hpp"
#include "rlam/matrix_io.hpp"
#include "rlam/synth.hpp"

using namespace rlam;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rlam_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

nlohmann::json load(const std::string& p) {
  std::ifstream f(p);
  return nlohmann::json::parse(f);
}

}  // namespace

TEST_F(CliTest, DecompRsvdEndToEnd) {
  io::write_matrix(gen_lowrank(60, 40, 10, 1), path("in.bin"));
  const auto r = run({"decomp", "rsvd", "--k", "10", path("in.bin"), "--out-prefix", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  SvdFactors f;
  f.u = io::read_matrix(path("out.U.bin"));
  f.v = io::read_matrix(path("out.V.bin"));
  const auto d = io::read_matrix(path("out.d.csv"));
  f.d.assign(d.entries().begin(), d.entries().end());
  const auto a = io::read_matrix(path("in.bin"));
  EXPECT_LE(relative_error(a, reconstruct(f)), 1e-8);
  const auto man = load(path("out.manifest.json"));
  EXPECT_EQ(man["params"]["p"], 10);
  EXPECT_EQ(man["params"]["q"], 2);
  EXPECT_EQ(man["params"]["sdist"], "normal");
  EXPECT_EQ(man["outputs"].size(), 3u);
}

TEST_F(CliTest, InvalidFlagsExitTwo) {
  io::write_matrix(oracle::gaussian(10, 8, 2), path("in.bin"));
  EXPECT_EQ(run({"decomp", "rsvd", "--k", "0", path("in.bin")}).code, 2);
  EXPECT_EQ(run({"decomp", "rsvd", "--k", "3", "--sdist", "cauchy", path("in.bin")}).code, 2);
  EXPECT_EQ(run({"decomp", "rsvd", "--k", "3", "--bogus", path("in.bin")}).code, 2);
  EXPECT_EQ(run({"decomp", "rsvd", "--k", "abc", path("in.bin")}).code, 2);
  EXPECT_EQ(run({"decomp", "rid", "--k", "3", "--mode", "diag", path("in.bin")}).code, 2);
  EXPECT_EQ(run({"decomp", "rsvd", "--k", "3", path("missing.bin")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, ManifestReplayIsExact) {
  io::write_matrix(oracle::gaussian(40, 30, 3), path("in.bin"));
  ASSERT_EQ(run({"decomp", "rsvd", path("in.bin"), "--k", "5", "--seed", "17", "--out-prefix",
                 path("a")})
                .code,
            0);
  ASSERT_EQ(run({"replay", path("a.manifest.json"), "--out", path("b")}).code, 0);
  for (const char* role : {".U.bin", ".V.bin", ".d.csv"}) {
    EXPECT_EQ(io::read_bytes(path("a") + role), io::read_bytes(path("b") + role)) << role;
  }
  EXPECT_EQ(run({"decomp", "rsvd", path("in.bin"), "--k", "5", "--seed", "18", "--out-prefix",
                 path("c")})
                .code,
            0);
  EXPECT_NE(io::read_bytes(path("a.U.bin")), io::read_bytes(path("c.U.bin")));
}

TEST_F(CliTest, SeedIsPinnedInManifest) {
  io::write_matrix(oracle::gaussian(20, 10, 4), path("in.bin"));
  ASSERT_EQ(run({"decomp", "rid", path("in.bin"), "--k", "3", "--out-prefix", path("x")}).code, 0);
  const auto argv = load(path("x.manifest.json"))["argv"].get<std::vector<std::string>>();
  EXPECT_NE(std::find(argv.begin(), argv.end(), "--seed"), argv.end());
}

TEST_F(CliTest, AllDecompositionsWriteTheirFiles) {
  io::write_matrix(gen_lowrank(30, 20, 4, 5), path("in.bin"));
  const std::string in = path("in.bin");
  ASSERT_EQ(run({"decomp", "svd", in, "--out-prefix", path("s")}).code, 0);
  EXPECT_EQ(io::read_matrix(path("s.U.bin")).cols(), 20u);
  ASSERT_EQ(run({"decomp", "rpca", in, "--k", "3", "--whiten", "--out-prefix", path("p")}).code, 0);
  for (auto f : {"p.rotation.bin", "p.eigvals.csv", "p.summary.csv", "p.scores.bin", "p.center.csv",
                 "p.scale.csv", "p.loadings.bin"})
    EXPECT_TRUE(fs::exists(path(f))) << f;
  ASSERT_EQ(run({"decomp", "rpca", in, "--k", "3", "--no-center", "--no-scale", "--no-retx",
                 "--out-prefix", path("p2")})
                .code,
            0);
  EXPECT_FALSE(fs::exists(path("p2.scores.bin")));
  EXPECT_FALSE(fs::exists(path("p2.center.csv")));
  ASSERT_EQ(run({"decomp", "rrpca", in, "--trace", "--out-prefix", path("r")}).code, 0);
  EXPECT_TRUE(fs::exists(path("r.L.bin")));
  EXPECT_TRUE(fs::exists(path("r.trace.csv")));
  ASSERT_EQ(run({"decomp", "rid", in, "--k", "4", "--mode", "row", "--out-prefix", path("i")}).code, 0);
  EXPECT_TRUE(fs::exists(path("i.R.bin")));
  EXPECT_EQ(io::read_matrix(path("i.idx.csv")).rows(), 4u);
  ASSERT_EQ(run({"decomp", "rcur", in, "--k", "4", "--deterministic", "--out-prefix", path("c")}).code, 0);
  const auto c = io::read_matrix(path("c.C.bin"));
  const auto u = io::read_matrix(path("c.U.bin"));
  const auto r = io::read_matrix(path("c.R.bin"));
  EXPECT_LE(relative_error(io::read_matrix(in), matmul(matmul(c, u), r)), 1e-8);
}

TEST_F(CliTest, CompressReportsNrmse) {
  io::Image img{DenseMatrix(24, 16), 255, true};
  const auto base = gen_lowrank(24, 16, 16, 6);
  for (std::size_t i = 0; i < base.size(); ++i) img.pixels.data()[i] = std::round(128 + 20 * base.data()[i]);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels.data()[i] = std::clamp(img.pixels.data()[i], 0.0, 255.0);
  io::write_pgm(img, path("im.pgm"));
  const auto r = run({"compress", path("im.pgm"), "--k", "16", "--deterministic", "--out", path("o.pgm")});
  ASSERT_EQ(r.code, 0) << r.err;
  const double e = std::stod(r.out.substr(r.out.find('=') + 1));
  EXPECT_LE(e, 1e-6);
  EXPECT_TRUE(io::read_pgm(path("o.pgm")).binary);
  EXPECT_EQ(run({"compress", path("im.pgm"), "--k", "17"}).code, 2);
}

TEST_F(CliTest, GenAndBench) {
  ASSERT_EQ(run({"gen", "sparse", "--m", "30", "--n", "20", "--out-prefix", path("g")}).code, 0);
  const auto a = io::read_matrix(path("g.A.bin"));
  EXPECT_EQ(a, combine(1, io::read_matrix(path("g.L0.bin")), 1, io::read_matrix(path("g.S0.bin"))));
  ASSERT_EQ(run({"gen", "decaying", "--m", "30", "--n", "20", "--kind", "exp", "--rate", "0.5",
                 "--out", path("d.csv")})
                .code,
            0);
  EXPECT_NEAR(singular_values(io::read_matrix(path("d.csv")))[1], std::exp(-0.5), 1e-10);
  const auto r = run({"bench", "--sizes", "40", "--k", "5", "--q-list", "0,2", "--trials", "1",
                      "--out", path("b.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path("b.csv"));
  std::string header, baseline;
  std::getline(f, header);
  std::getline(f, baseline);
  EXPECT_EQ(header, "algorithm,m,n,k,p,q,median_seconds,speedup,rel_error");
  EXPECT_NE(baseline.find(",1,"), std::string::npos);
}
