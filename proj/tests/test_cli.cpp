#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "uaext/io.hpp"

using uaext::io::json;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = uaext::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "uaext_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string cole_bundle_path() {
  const std::string spec = write_file(
      "sqrt_spec.json",
      R"({"disk":{"boundary":16,"rings":2,"ring_size":8,"cap":6},"coefficients_poly":[[[0,0],[-1,0]],[[0,0]]]})");
  const std::string out = (scratch() / "sqrt.json").string();
  REQUIRE(run({"cole", "extend", "--spec", spec, "--out", out}).code == 0);
  return out;
}

}  // namespace

TEST_CASE("verify gce exits 0 on a passing bundle") {
  const auto r = run({"verify", "gce", "--bundle", cole_bundle_path()});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["certificate"]["passed"] == true);
  CHECK(j["manifest"]["command"] == "verify gce");
  CHECK(j["manifest"]["seed"] == uaext::kDefaultSeed);
  CHECK(j["manifest"]["tolerances"].contains("unital"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"verify", "gce", "--bundle", "x.json", "--no-such-flag"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"verify", "gce", "--bundle", (scratch() / "missing.json").string()}).code == 2);
  CHECK(run({"cole", "extend", "--spec", write_file("broken.json", "{not json")}).code == 2);
  CHECK(run({"verify", "gce", "--help"}).code == 0);
}

TEST_CASE("a bundle with corrupted row sums fails and names the clause") {
  json j = uaext::io::read_json_file(cole_bundle_path());
  auto& entry = j["bundle"].contains("t") ? j["bundle"]["t"]["rows"][0]["entries"][0] : j["t"]["rows"][0]["entries"][0];
  entry[1][0] = entry[1][0].get<double>() * 1.5;
  const std::string path = write_file("corrupt.json", j.dump());
  const auto r = run({"verify", "gce", "--bundle", path});
  CHECK(r.code == 1);
  CHECK(r.err.find("failed clause: unital") != std::string::npos);
  const json out = json::parse(r.out);
  bool unital_failed = false;
  for (const auto& c : out["certificate"]["clauses"])
    if (c["clause"] == "unital") unital_failed = !c["pass"].get<bool>();
  CHECK(unital_failed);
}

TEST_CASE("repeated runs are byte identical") {
  const std::string bundle = cole_bundle_path();
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"report", "--bundle", bundle},
        std::vector<std::string>{"report", "--bundle", bundle, "--format", "csv"},
        std::vector<std::string>{"gallery", "build", "basener", "--nr", "2", "--ntheta", "8", "--M", "16"},
        std::vector<std::string>{"boundary", "choquet", "--bundle", bundle, "--system", "a", "--witnesses"}}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  // Thread count does not change results.
  const auto one = run({"verify", "gce", "--bundle", bundle, "--threads", "1"});
  const auto four = run({"verify", "gce", "--bundle", bundle, "--threads", "4"});
  CHECK(one.out == four.out);
}

TEST_CASE("reconstruction and projection analysis of a quadratic extension") {
  const std::string bundle = cole_bundle_path();
  const auto r = run({"group", "reconstruct", "--bundle", bundle, "--h0", "p_q"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["matched"] == true);
  const auto p = run({"group", "analyze-projection", "--bundle", bundle});
  CHECK(p.code == 0);
  CHECK(json::parse(p.out)["is_bicontractive"] == true);
}

TEST_CASE("peak set command on the disk") {
  const std::string sys = (scratch() / "disk.json").string();
  REQUIRE(run({"gallery", "build", "disk", "--boundary", "16", "--rings", "2", "--ring-size", "8", "--cap", "4", "--out",
               sys})
              .code == 0);
  const json disk = uaext::io::read_json_file(sys);
  const std::string circle_label = disk["space"]["points"][0]["label"];
  const auto yes = run({"boundary", "peakset", "--system-file", sys, "--set", circle_label});
  CHECK(yes.code == 0);
  CHECK(json::parse(yes.out)["feasible"] == true);
}
