#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "epkit/cli.hpp"
#include "epkit/io.hpp"

namespace fs = std::filesystem;
using epkit::io::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"epkit"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  std::ostringstream out, err;
  const int code = epkit::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("epkit_cli_" + std::to_string(std::hash<std::string>{}(
                                                          std::to_string(reinterpret_cast<std::uintptr_t>(this)))));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& body) const {
    const fs::path p = dir / name;
    std::ofstream(p) << body;
    return p.string();
  }
};

}  // namespace

TEST_CASE("analyze on the trimer") {
  Scratch s;
  const Result r = run_cli({"analyze", "--input", s.write("t.json", R"({"model":"trimer","omega0":1,"g_b":1.3})")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["order"] == 3);
  CHECK(j["response_strength"].get<double>() == doctest::Approx(6.76).epsilon(1e-12));
}

TEST_CASE("analyze on a raw matrix file with an output path") {
  Scratch s;
  const std::string in = s.write("m.json", R"({"rows":2,"cols":2,"entries":[[0,0],[1,0],[0,0],[0,0]]})");
  const std::string out = (s.dir / "r.json").string();
  REQUIRE(run_cli({"analyze", "--input", in, "--out", out}).code == 0);
  const Json j = Json::parse(slurp(out));
  CHECK(j["order"] == 2);
  CHECK(j["response_strength"] == 1.0);
}

TEST_CASE("jordan emits the chain") {
  Scratch s;
  const Result r = run_cli({"jordan", "--input", s.write("d.json", R"({"model":"dimer","g_a":1.5})")});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["n"] == 2);
  CHECK(j["response_strength"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("compose from subsystem files and from the named system") {
  Scratch s;
  const std::string a = s.write("a.json", R"({"model":"dimer","omega0":1,"g_a":1.5})");
  const std::string b = s.write("b.json", R"({"model":"trimer","omega0":1,"g_b":1.3})");
  const std::string k = s.write("k.json", R"({"rows":3,"cols":2,"entries":[[1,0],0,0,0,0,0]})");
  const Result r = run_cli({"compose", "--a", a, "--b", b, "--k", k});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["order"] == 5);
  CHECK(j["generic"] == true);
  CHECK(j["response_strength"].get<double>() == doctest::Approx(std::sqrt(8.0) * 1.5 * 1.69).epsilon(1e-10));
  CHECK(j["response_upper_bound"].get<double>() == doctest::Approx(20.28));
  const double amp = std::hypot(j["coupling_amplitude"][0].get<double>(), j["coupling_amplitude"][1].get<double>());
  CHECK(amp == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-10));

  const Result named = run_cli(
      {"compose", "--input", s.write("dt.json", R"({"model":"dimer_trimer","omega0":1,"g_a":1.5,"g_b":1.3,"k":[1,0]})")});
  REQUIRE(named.code == 0);
  CHECK(Json::parse(named.out)["response_strength"] == j["response_strength"]);
}

TEST_CASE("compose with K = 0 exits 3 with a degenerate-coupling message") {
  Scratch s;
  const std::string a = s.write("a.json", R"({"model":"dimer","omega0":1,"g_a":1.5})");
  const std::string b = s.write("b.json", R"({"model":"trimer","omega0":1,"g_b":1.3})");
  const std::string k = s.write("k.json", R"({"rows":3,"cols":2,"entries":[0,0,0,0,0,0]})");
  const Result r = run_cli({"compose", "--a", a, "--b", b, "--k", k});
  CHECK(r.code == 3);
  CHECK(r.err.find("degenerate") != std::string::npos);
}

TEST_CASE("exit codes for parse, precondition and numerical failures") {
  Scratch s;
  CHECK(run_cli({"analyze", "--input", s.write("bad.json", "{not json")}).code == 2);
  CHECK(run_cli({"analyze", "--input", (s.dir / "missing.json").string()}).code == 2);
  CHECK(run_cli({"analyze"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"sweep", "--input", "x", "--points", "1"}).code == 2);
  CHECK(run_cli({"sweep", "--input", "x", "--mode", "sideways"}).code == 2);

  const std::string notep = s.write("n.json", R"({"rows":2,"cols":2,"entries":[0,0,0,1]})");
  CHECK(run_cli({"jordan", "--input", notep}).code == 3);

  // Nilpotent by the norm test, yet N has full rank: the chain cannot be built.
  const std::string near = s.write("near.json", R"({"rows":3,"cols":3,"entries":[0,1,0,0,0,1,1e-11,0,0]})");
  const Result r = run_cli({"jordan", "--input", near});
  CHECK(r.code == 4);
  CHECK(r.err.find("numerical failure") != std::string::npos);

  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
  Scratch s;
  const std::string in = s.write("dt.json", R"({"model":"dimer_trimer","omega0":1,"g_a":1.5,"g_b":1.3,"k":[1,0]})");
  const std::string o1 = (s.dir / "s1.csv").string();
  const std::string o2 = (s.dir / "s2.csv").string();
  REQUIRE(run_cli({"sweep", "--input", in, "--points", "17", "--trials", "4", "--out", o1}).code == 0);
  REQUIRE(run_cli({"sweep", "--input", in, "--points", "17", "--trials", "4", "--threads", "3", "--out", o2}).code == 0);
  CHECK(slurp(o1) == slurp(o2));
  CHECK(slurp(o1).rfind("epsilon,trial,max_splitting\n", 0) == 0);
  CHECK(fs::exists(s.dir / "s1.fit.json"));

  const Result stdout_run = run_cli({"sweep", "--input", in, "--points", "17", "--trials", "4"});
  REQUIRE(stdout_run.code == 0);
  CHECK(stdout_run.out == slurp(o1));
  CHECK(Json::parse(stdout_run.err).contains("slope"));

  const Result pres = run_cli({"sweep", "--input", in, "--mode", "preserving", "--seed", "3"});
  CHECK(pres.code == 0);
  const std::string tri = s.write("t.json", R"({"model":"trimer","g_b":1.3})");
  CHECK(run_cli({"sweep", "--input", tri, "--mode", "preserving"}).code == 3);
  CHECK(run_cli({"sweep", "--input", tri, "--fit-min", "1e-6", "--fit-max", "1e-3"}).code == 0);
}

TEST_CASE("reproduce-fig3 writes both tables and the fitted slopes") {
  Scratch s;
  const fs::path dir = s.dir / "fig3";
  const Result r = run_cli({"reproduce-fig3", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "fig3_generic.csv"));
  CHECK(fs::exists(dir / "fig3_preserving.csv"));
  const Json j = Json::parse(slurp(dir / "fig3_fit.json"));
  CHECK(j["generic"]["slope"].get<double>() == doctest::Approx(0.2).epsilon(0.1));
  CHECK(j["preserving"]["slope"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(0.06));
  CHECK(j == Json::parse(r.out));

  // 41 points x 8 trials plus the header.
  std::ifstream csv(dir / "fig3_generic.csv");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 41 * 8 + 1);
}
