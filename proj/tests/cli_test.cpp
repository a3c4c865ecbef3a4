// Runs the bipath executable on the files in samples/.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "bipath/io.hpp"

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(BIPATH_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(BIPATH_SAMPLES) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(CliTest, DecomposeTopInterval) {
  const CliRun r = run("decompose " + sample("top_interval.bipath"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "top[1, 2]\t1\n");
  const auto j = bipath::Json::parse(run("decompose --format json " + sample("top_interval.bipath")).out);
  EXPECT_EQ(j, bipath::Json::parse(R"([{"i":1,"j":2,"kind":"top","mult":1}])"));
}

TEST(CliTest, SliceOfB44HasLength21AndRoundTrips) {
  const CliRun r = run("slice " + sample("planted_b44.bipath"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "ZIGZAG 21 5");
  const auto module = bipath::parse_bipath(slurp(sample("planted_b44.bipath")));
  EXPECT_EQ(bipath::parse_zigzag(r.out), bipath::restrict_to_slice(module));
}

TEST(CliTest, DistanceOfAModuleToItselfIsZero) {
  const CliRun r = run("distance " + sample("planted_b44.bipath") + " " + sample("planted_b44.bipath"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0\n");
}

TEST(CliTest, DistanceJsonIsStable) {
  const std::string args = "distance --format json " + sample("planted_b32_a.bipath") + " " + sample("planted_b32_b.bipath");
  const CliRun first = run(args), second = run(args);
  EXPECT_EQ(first.status, 0);
  EXPECT_EQ(first.out, second.out);
  const auto j = bipath::Json::parse(first.out);
  EXPECT_EQ(j["d_B"], j["d_I"]);
  EXPECT_TRUE(j.contains("matching"));
}

TEST(CliTest, FiberReproducesTheExample) {
  const std::string rest = " " + sample("example.embed") + " " + sample("line_slope0.path") + " " +
                           sample("line_slope1.path") + " " + sample("line_slope_half.path");
  const CliRun m1 = run("fiber --format json " + sample("mlambda_1.grid") + rest);
  const CliRun mm1 = run("fiber --format json " + sample("mlambda_minus1.grid") + rest);
  ASSERT_EQ(m1.status, 0);
  ASSERT_EQ(mm1.status, 0);
  const auto a = bipath::Json::parse(m1.out), b = bipath::Json::parse(mm1.out);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_NE(a[0]["arc_code"], b[0]["arc_code"]);
  for (std::size_t k = 1; k < 4; ++k) EXPECT_EQ(a[k]["barcode"], b[k]["barcode"]);
}

TEST(CliTest, FiberAcceptsBifiltrations) {
  const CliRun r = run("fiber " + sample("three_points.bifilt") + " " + sample("corner.embed"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("left[0, 0]\t1"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run("validate " + sample("mlambda_1.grid") + " " + sample("example.embed")).status, 0);
  EXPECT_EQ(run("validate " + sample("noncommuting.grid")).status, 1);
  EXPECT_EQ(run("validate " + sample("zigzag.zz") + " --field 4").status, 2);
  EXPECT_EQ(run("decompose " + sample("planted_b44.bipath") + " --field 3").status, 2);
  EXPECT_EQ(run("decompose " + sample("missing.bipath")).status, 2);
  EXPECT_EQ(run("decompose " + sample("mlambda_1.grid")).status, 2);
  EXPECT_EQ(run("decompose --bogus " + sample("top_interval.bipath")).status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("distance " + sample("planted_b44.bipath") + " " + sample("top_interval.bipath")).status, 1);
}

TEST(CliTest, DecomposeZigzag) {
  const CliRun r = run("decompose " + sample("zigzag.zz"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "[0, 2]\t1\n[1, 4]\t2\n");
}

TEST(CliTest, OutWritesToFile) {
  const auto path = std::filesystem::temp_directory_path() / "bipath_cli_out_test.txt";
  std::filesystem::remove(path);
  const CliRun r = run("decompose " + sample("top_interval.bipath") + " --out " + path.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(slurp(path.string()), "top[1, 2]\t1\n");
  std::filesystem::remove(path);
}

TEST(CliTest, Selftest) {
  const CliRun r = run("selftest --seed 5 --trials 20");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(run("selftest --seed 5 --trials 20").out, r.out);
}

}  // namespace
