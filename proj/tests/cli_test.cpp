#include "gex/corpus.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

const std::string kCli = GEX_CLI;
const std::string kData = GEX_DATA_DIR;

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("gex_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + kCli + " " + args + " >" + (scratch() / "stdout").string() + " 2>" +
                    (scratch() / "stderr").string();
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return gex::corpus::read_file(p.string()); }

std::string tmp(const std::string& name) { return (scratch() / name).string(); }

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::string write(const std::string& name, const std::string& text) {
  std::ofstream(tmp(name), std::ios::binary) << text;
  return tmp(name);
}

}  // namespace

TEST(Cli, EvalExitCodes) {
  EXPECT_EQ(run("eval " + kData + "/corpus/gp-defining-collinearity.geo --triangle 3,4,5"), 0);
  EXPECT_NE(slurp(scratch() / "stdout").find("pass  assert colline(A, D, E);"), std::string::npos);

  std::string bad = slurp(kData + "/corpus/gp-ratio-7-9-10.geo");
  bad.replace(bad.find("2 *"), 3, "3 *");
  EXPECT_EQ(run("eval " + write("bad.geo", bad) + " --triangle 7,9,10"), 1);

  EXPECT_EQ(run("eval " + write("mal.geo", "triangle ABC;\nD = gergonne(A, B;\n")), 2);
  EXPECT_NE(slurp(scratch() / "stderr").find("2:18:"), std::string::npos);
}

TEST(Cli, EvalPrintsFifteenSignificantDigits) {
  ASSERT_EQ(run("eval " + kData + "/corpus/gp-defining-collinearity.geo --triangle 3,4,5"), 0);
  EXPECT_NE(slurp(scratch() / "stdout").find("D = point(3.10909090909091, 1.30909090909091)"), std::string::npos);
}

TEST(Cli, ExploreRejectsDepthThree) {
  EXPECT_EQ(run("explore --depth 3 --out " + tmp("x.json")), 2);
  EXPECT_FALSE(fs::exists(tmp("x.json")));
}

TEST(Cli, ExploreTripolarCatalogIsDeterministic) {
  std::string args = "explore --constraints 'ratio(a,b,c)=7:9:10' --depth 0 --seed 3 --out ";
  ASSERT_EQ(run(args + tmp("a.json")), 0);
  ASSERT_EQ(run(args + tmp("b.json"), "GEX_THREADS=2"), 0);
  std::string a = slurp(tmp("a.json"));
  EXPECT_EQ(a, slurp(tmp("b.json")));
  EXPECT_NE(a.find("\"text\": \"assert dist(A, D) = 2 * dist(C, D);\""), std::string::npos);
}

TEST(Cli, ExploreDepthOneFindsLlp) {
  ASSERT_EQ(run("explore --start gergonne-point --depth 1 --out " + tmp("d1.json")), 0);
  EXPECT_NE(slurp(tmp("d1.json")).find("\"text\": \"assert perp(line(B, C), line(D, center(W1)));\""),
            std::string::npos);
  EXPECT_NE(slurp(scratch() / "stdout").find("sequences 261"), std::string::npos);
}

TEST(Cli, CatalogValidatesAgainstSchema) {
  if (std::system("python3 -c 'import jsonschema' >/dev/null 2>&1") != 0) GTEST_SKIP() << "python3 jsonschema missing";
  ASSERT_EQ(run("explore --start gergonne-cevian --depth 0 --out " + tmp("s.json")), 0);
  std::string cmd = "python3 -c \"import json, jsonschema; jsonschema.validate(json.load(open('" + tmp("s.json") +
                    "')), json.load(open('" + kData + "/docs/catalog.schema.json')))\"";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}

TEST(Cli, CorpusPassesAndReportIsDeterministic) {
  ASSERT_EQ(run("corpus --samples 5 --seed 2 --json " + tmp("r1.json")), 0);
  std::string table = slurp(scratch() / "stdout");
  ASSERT_EQ(run("corpus --samples 5 --seed 2 --json " + tmp("r2.json"), "GEX_THREADS=3"), 0);
  EXPECT_EQ(table, slurp(scratch() / "stdout"));
  EXPECT_EQ(slurp(tmp("r1.json")), slurp(tmp("r2.json")));
  EXPECT_NE(slurp(tmp("r1.json")).find("\"passed\": true"), std::string::npos);
}

TEST(Cli, CorpusFailureExitsOne) {
  fs::create_directories(scratch() / "corp");
  std::string bad = slurp(kData + "/corpus/gp-ratio-7-9-10.geo");
  bad.replace(bad.find("2 *"), 3, "3 *");
  std::ofstream(scratch() / "corp" / "bad.geo") << bad;
  std::ofstream(scratch() / "corp" / "manifest.txt") << "bad bad.geo constrained equation mutation\n";
  EXPECT_EQ(run("corpus --samples 3 --dir " + (scratch() / "corp").string()), 1);
}

TEST(Cli, RenderDefiningPropertyFigure) {
  std::string fig = kData + "/data/figures/defining-property.geo";
  ASSERT_EQ(run("render " + fig + " --triangle 6,7,8 -o " + tmp("f1.svg")), 0);
  ASSERT_EQ(run("render " + fig + " --triangle 6,7,8 -o " + tmp("f2.svg")), 0);
  std::string svg = slurp(tmp("f1.svg"));
  EXPECT_EQ(svg, slurp(tmp("f2.svg")));
  EXPECT_EQ(count(svg, "class=\"triangle\""), 1u);
  EXPECT_EQ(count(svg, "class=\"circle\""), 1u);
  EXPECT_EQ(count(svg, "class=\"line\""), 3u);
  EXPECT_EQ(count(svg, "class=\"point gergonne\" data-name=\"D\""), 1u);
  EXPECT_NE(svg.find("fill=\"#1a9641\""), std::string::npos);
  // vertices A B C and D E F G
  EXPECT_EQ(count(svg, "<text "), 7u);
}

TEST(Cli, RenderRejectsInvalidTriangle) {
  EXPECT_EQ(run("render " + kData + "/data/figures/defining-property.geo --triangle 1,1,5 -o " + tmp("bad.svg")), 2);
}
