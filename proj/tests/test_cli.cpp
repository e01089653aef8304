#include "lab_io.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("liouville_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string put(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const auto out = (scratch() / "stdout.txt").string();
  const std::string cmd = std::string(LIOUVILLE_LAB_EXE) + " " + args + " > " + out + " 2>&1";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
}

}  // namespace

// --- schema parsing ---

TEST(Schema, FunctionRoundTrip) {
  const auto j = json::parse(R"({"n":2,"terms":[{"re":1,"im":-2,"alpha":[1,0],"xi":[0.5,-1]},{"re":3,"xi":[0,0]}]})");
  const auto f = parse_function(j);
  EXPECT_EQ(f.dim(), 2);
  EXPECT_EQ(f.terms().size(), 2u);
  const auto g = parse_function(to_json(f));
  ASSERT_EQ(g.terms().size(), f.terms().size());
  for (std::size_t k = 0; k < f.terms().size(); ++k) {
    EXPECT_EQ(g.terms()[k].c, f.terms()[k].c);
    EXPECT_EQ(g.terms()[k].alpha, f.terms()[k].alpha);
    EXPECT_EQ(g.terms()[k].xi, f.terms()[k].xi);
  }
}

TEST(Schema, Symbols) {
  const auto p = parse_symbol(json::parse(R"({"kind":"polynomial","coeffs":[{"alpha":[2],"re":1},{"alpha":[0],"re":-1}]})"));
  EXPECT_NEAR(std::abs(p(Point::Constant(1, 3.0)) - 8.0), 0, 1e-14);
  const auto l = parse_symbol(json::parse(
      R"({"kind":"levy","b":[0.5],"Q":[[2]],"atoms":[{"y":[2],"w":0.5}],"s":1,"c":[]})"));
  // -i b xi + Q xi^2 / 2 + w (1 - e^{i y xi})
  const double xi = 0.7;
  const Complex want = Complex(0, -0.5 * xi) + xi * xi + 0.5 * (1.0 - std::exp(Complex(0, 2 * xi)));
  EXPECT_LT(std::abs(l(Point::Constant(1, xi)) - want), 1e-14);
  const auto s = parse_symbol(json::parse(R"({"kind":"sampled","lo":[0],"step":[1],"count":[3],"values":[0,[1,1],2]})"));
  EXPECT_LT(std::abs(s(Point::Constant(1, 0.5)) - Complex(0.5, 0.5)), 1e-14);
  EXPECT_THROW(parse_symbol(json::parse(R"({"kind":"nope"})")), ConfigError);
  EXPECT_THROW(parse_symbol(json::parse(R"({"kind":"levy","b":[0],"Q":[[1,0]]})")), ConfigError);
}

TEST(Schema, WeightsAndZeros) {
  const auto w = parse_weight(json::parse(R"({"family":"product","n":1,"a":1,"b":0.5})"));
  EXPECT_NEAR(w.log_value(Point::Constant(1, 4.0)), 2.0, 1e-14);
  const auto s = parse_weight(json::parse(R"({"family":"sampled","n":1,"radial":true,"samples":[[[0],1],[[1],2],[[2],3]]})"));
  EXPECT_NEAR(s(Point::Constant(1, 1.0)), 2.0, 1e-12);
  EXPECT_THROW(parse_weight(json::parse(R"({"family":"sampled","n":1,"samples":[[0,1]]})")), ConfigError);
  const auto z = parse_zeros(json::parse(R"({"omega0":[1,0],"entries":[{"xi":[2,0],"eta":[0,0.5]}]})"));
  EXPECT_EQ(z.size(), 1u);
  EXPECT_EQ(z.dim(), 2);
  EXPECT_THROW(parse_zeros(json::parse(R"({"entries":[]})")), ConfigError);
}

TEST(Report, RowSchemaAndLogFloats) {
  Report rep;
  rep.command = "x";
  Row a;
  a.tag = "linear";
  a.lhs = 1;
  a.rhs = 2;
  a.margin = 1;
  Row b;
  b.tag = "log";
  b.log_domain = true;
  b.lhs = 3;
  b.rhs = -INFINITY;
  b.margin = INFINITY;
  rep.rows = {a, b};
  const auto j = rep.to_json();
  ASSERT_EQ(j["rows"].size(), 2u);
  for (const auto& r : j["rows"])
    for (const char* key : {"tag", "lhs", "rhs", "margin", "certified", "pass"}) EXPECT_TRUE(r.contains(key)) << key;
  EXPECT_EQ(j["rows"][0]["lhs"], 1.0);
  EXPECT_EQ(j["rows"][1]["lhs"]["log"], 3.0);
  EXPECT_EQ(j["rows"][1]["rhs"]["log"], "-inf");
  EXPECT_EQ(j["margins"].size(), 2u);
  EXPECT_TRUE(j["pass"]);
}

TEST(Report, UncertifiedCriticalRows) {
  Report rep;
  Row r;
  r.tag = "t";
  r.certified = false;
  r.log_domain = true;
  r.margin = 5;
  rep.rows = {r};
  EXPECT_TRUE(rep.pass());
  rep.rows[0].margin = 1e-4;
  EXPECT_FALSE(rep.pass());
  ASSERT_EQ(rep.failing().size(), 1u);
  rep.rows[0].informational = true;
  EXPECT_TRUE(rep.pass());
}

// --- end to end ---

TEST(Cli, ProfileMatchesClosedForm) {
  // g = e^{|x|^{1/2}}: S_g(r) = r^{-1/2} / sin(pi/4) for r >= 1, constant below
  const auto w = put("w.json", R"({"family":"product","n":1,"a":1,"b":0.5})");
  const auto out = (scratch() / "profile.csv").string();
  const auto svg = (scratch() / "profile.svg").string();
  const auto r = run("weights profile --config " + w + " --rmax 100 --out " + out + " --svg " + svg);
  ASSERT_EQ(r.status, 0) << r.out;
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r,I,J,S,certified");
  int rows = 0;
  while (std::getline(in, line)) {
    double rr, I, J, S, c;
    char sep;
    std::istringstream ls(line);
    ls >> rr >> sep >> I >> sep >> J >> sep >> S >> sep >> c;
    const double want = std::pow(std::max(rr, 1.0), -0.5) / std::sin(kPi / 4);
    EXPECT_NEAR(S, want, 1e-6 * want) << rr;
    ++rows;
  }
  EXPECT_GE(rows, 100);
  EXPECT_EQ(slurp(svg).rfind("<svg", 0), 0u);
}

TEST(Cli, BorderlineGammaOneDiverges) {
  const auto w = put("gamma1.json", R"({"family":"borderline","n":1,"gamma":1})");
  const auto r = run("weights check --config " + w);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("diverges"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("beurling-domar"), std::string::npos);
  const auto w2 = put("gamma2.json", R"({"family":"borderline","n":1,"gamma":2})");
  EXPECT_EQ(run("weights check --config " + w2).status, 0);
}

TEST(Cli, SemiEllipticBlowUp) {
  const auto out = (scratch() / "semi.json").string();
  const auto r = run("counterexample semi-elliptic --ell 1 --N 100 --out " + out);
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = load_json(out);
  bool found = false;
  for (const auto& row : j["rows"])
    if (row["tag"] == "blow-up N=100") {
      found = true;
      EXPECT_GT(row["margin"]["log"].get<double>(), 0);
      // sum_{k<=1000} e^{-k^3 5e-7} against 100/e
      double s = 0;
      for (int k = 1; k <= 1000; ++k) s += std::exp(-std::pow(double(k), 3) * 5e-7);
      EXPECT_NEAR(row["lhs"]["log"].get<double>(), std::log(s), 1e-12);
    }
  EXPECT_TRUE(found);
}

TEST(Cli, ConfigFileWithInlineInputs) {
  const auto cfg = put("conv.json", R"({"symbol":{"kind":"polynomial","coeffs":[{"alpha":[1],"re":1},{"alpha":[0],"re":-3}]},
    "weight":{"family":"product","n":1,"s":2},"gamma":[3],"y0":[1],"K":[[-1],[1]],"epsilon":1})");
  const auto r = run("multiplier converse --config " + cfg);
  EXPECT_EQ(r.status, 0) << r.out;
}

TEST(Cli, ExitCodesForBadInput) {
  EXPECT_EQ(run("weights check --weight " + (scratch() / "missing.json").string()).status, 2);
  EXPECT_EQ(run("weights check --config " + put("bad.json", R"({"family":"wat"})")).status, 2);
  EXPECT_EQ(run("weights check --config " + put("broken.json", "{not json")).status, 2);
  EXPECT_EQ(run("counterexample semi-elliptic --ell 0").status, 2);
  EXPECT_EQ(run("counterexample").status, 2);
  EXPECT_EQ(run("weights check").status, 2);
}

TEST(Cli, FailingCheckNamesItsTag) {
  // f = e^{2ix} is not annihilated by xi^2 - 1
  const auto m = put("m.json", R"({"kind":"polynomial","coeffs":[{"alpha":[2],"re":1},{"alpha":[0],"re":-1}]})");
  const auto f = put("f2.json", R"({"n":1,"terms":[{"re":1,"xi":[2]}]})");
  const auto r = run("multiplier tauberian --symbol " + m + " --function " + f);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("[m(D) f = 0]"), std::string::npos) << r.out;
}

TEST(Cli, DeterministicReports) {
  const auto a = (scratch() / "a.json").string(), b = (scratch() / "b.json").string();
  ASSERT_EQ(run("counterexample series --seed 5 --config " + put("s.json", R"({"demo_count":2000,"j":[10,100]})") +
                " --out " + a).status, 0);
  ASSERT_EQ(run("counterexample series --seed 5 --config " + (scratch() / "s.json").string() + " --out " + b).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}
