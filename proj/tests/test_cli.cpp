#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "heatkern/cli.hpp"
#include "heatkern/selftest.hpp"
#include "json.hpp"

using namespace heatkern;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "heatkern");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("heatkern_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("eval prints the value and a json record") {
    const Run r = run({"eval", "interval", "--alpha", "0", "--beta", "0", "--t", "1", "--x", "1", "--y", "1"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.rfind("0.709221319315", 0) == 0);
    const std::string second = r.out.substr(r.out.find('\n') + 1);
    const auto rec = nlohmann::json::parse(second);
    CHECK(rec.contains("domain"));
  }

  TEST_CASE("eval on the ball at large time") {
    const Run r = run({"eval", "ball", "--mu", "0", "--d", "2", "--t", "5", "--x", "0,0", "--y", "0,0"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.rfind("0.159154943", 0) == 0);
  }

  TEST_CASE("eval on the segment matches the interval") {
    const Run s = run({"eval", "simplex", "--kappa", "0.5,0.5", "--d", "1", "--t", "0.5", "--x", "0.3", "--y", "0.3"});
    const Run i = run({"eval", "interval", "--alpha", "0", "--beta", "0", "--t", "0.5", "--x", "-0.4", "--y", "-0.4"});
    REQUIRE(s.code == cli::kExitOk);
    REQUIRE(i.code == cli::kExitOk);
    CHECK(std::stod(s.out) == doctest::Approx(2.0 * std::stod(i.out)).epsilon(1e-10));
  }

  TEST_CASE("eval with both routes") {
    const Run r = run({"eval", "simplex", "--kappa", "1,0.5,0", "--d", "2", "--t", "0.4", "--x", "0.2,0.3", "--y", "0.1,0.6",
                       "--both"});
    CHECK(r.code == cli::kExitOk);
    std::istringstream line(r.out);
    double a = 0, b = 0, diff = 1;
    line >> a >> b >> diff;
    CHECK(std::abs(diff) < 1e-9);
    CHECK(a == doctest::Approx(b));
  }

  TEST_CASE("projector both routes") {
    const Run r = run({"projector", "ball", "--mu", "1", "--d", "2", "--n", "3", "--x", "0.2,0.3", "--y", "-0.5,0.1", "--both"});
    CHECK(r.code == cli::kExitOk);
    std::istringstream line(r.out);
    double a = 0, b = 0, diff = 1;
    line >> a >> b >> diff;
    CHECK(std::abs(diff) < 1e-9);
  }

  TEST_CASE("projector fixtures") {
    const auto dir = scratch("fixtures");
    std::filesystem::create_directories(dir);
    const auto file = dir / "basis.json";
    const Run r = run({"projector", "interval", "--alpha", "0.5", "--beta", "0", "--n", "2", "--x", "0.1", "--y", "0.2",
                       "--path", "oracle", "--write-fixtures", file.string()});
    CHECK(r.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(file));
    CHECK(j["schema"] == 1);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("usage errors exit 2 with a json error") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"eval", "ball", "--t", "1", "--x", "0", "--y", "0"},
             {"eval", "torus", "--t", "1", "--x", "0", "--y", "0"},
             {"eval", "interval", "--t", "1", "--x", "0,abc", "--y", "0"},
             {"envelope-scan", "ball", "--mu", "1", "--d", "2", "--t", ""},
             {"selftest", "--level", "medium"}}) {
      const Run r = run(args);
      CAPTURE(r.err);
      CHECK(r.code == cli::kExitUsage);
      if (!r.err.empty()) {
        const auto e = nlohmann::json::parse(r.err);
        CHECK(e.contains("error"));
        CHECK(e["kind"] == "usage");
      }
    }
  }

  TEST_CASE("domain and numerical errors exit 3") {
    Run r = run({"eval", "ball", "--mu", "1", "--d", "2", "--t", "1", "--x", "0.9,0.9", "--y", "0,0"});
    CHECK(r.code == cli::kExitNumeric);
    CHECK(nlohmann::json::parse(r.err)["kind"] == "domain");
    r = run({"eval", "interval", "--t", "1e-6", "--x", "0", "--y", "0"});
    CHECK(r.code == cli::kExitNumeric);
    r = run({"eval", "interval", "--t", "0.01", "--x", "0", "--y", "0", "--path", "oracle"});
    CHECK(r.code == cli::kExitNumeric);
    CHECK(nlohmann::json::parse(r.err)["kind"] == "numerical");
  }

  TEST_CASE("envelope scan writes its files and passes") {
    const auto dir = scratch("scan");
    const Run r = run({"envelope-scan", "interval", "--alpha", "0", "--beta", "1", "--pairs", "60", "--out", dir.string()});
    CHECK(r.code == cli::kExitOk);
    for (const char* f : {"samples.csv", "holdout.csv", "quarantine.csv", "report.json"}) CHECK(std::filesystem::exists(dir / f));
    const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(rep["passed"] == true);
    CHECK(rep["schema"] == 1);
    CHECK(slurp(dir / "samples.csv").rfind("u,logG,t,x1,y1\n", 0) == 0);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("negative control exits 4") {
    const auto dir = scratch("negative");
    const Run r = run({"envelope-scan", "ball", "--mu", "1", "--d", "2", "--pairs", "60", "--negative-control", "--out",
                       dir.string()});
    CHECK(r.code == cli::kExitInvariant);
    CHECK(nlohmann::json::parse(slurp(dir / "report.json"))["passed"] == false);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("scan output does not depend on the thread count") {
    const auto one = scratch("threads1");
    const auto eight = scratch("threads8");
    const std::vector<std::string> base{"envelope-scan", "simplex", "--kappa", "1,0.5,0", "--d", "2", "--pairs", "40"};
    auto a = base;
    a.insert(a.end(), {"--out", one.string(), "--threads", "1"});
    auto b = base;
    b.insert(b.end(), {"--out", eight.string(), "--threads", "8"});
    CHECK(run(a).code == cli::kExitOk);
    CHECK(run(b).code == cli::kExitOk);
    for (const char* f : {"samples.csv", "holdout.csv", "quarantine.csv", "report.json"}) CHECK(slurp(one / f) == slurp(eight / f));
    std::filesystem::remove_all(one);
    std::filesystem::remove_all(eight);
  }

  TEST_CASE("selftest") {
    const Run quick = run({"selftest", "--level", "quick"});
    CHECK(quick.code == cli::kExitOk);
    CHECK(quick.out.find("orthonormality") != std::string::npos);
    const auto full = selftest::manifest(selftest::Level::full);
    CHECK(std::find(full.begin(), full.end(), "simplex-d2-dual-path") != full.end());
    const auto q = selftest::manifest(selftest::Level::quick);
    CHECK(q.size() < full.size());
    const Run fault = run({"selftest", "--inject-fault"});
    CHECK(fault.code == cli::kExitInvariant);
    // the fault is switched off again afterwards
    CHECK(run({"selftest"}).code == cli::kExitOk);
  }
}
