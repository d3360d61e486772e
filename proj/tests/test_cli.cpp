#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpvf/json_io.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cpvf;
namespace fs = std::filesystem;

namespace {
struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / ("cpvf_cli_" + std::to_string(::getpid()))) { fs::create_directories(dir); }
  ~Scratch() { fs::remove_all(dir); }
  std::string put(const std::string& name, const std::string& text) const {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string at(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  std::string cmd = std::string(CPVF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kQuadratic = R"({"degree": 2, "coefficients": [[1, 0]]})";
}  // namespace

TEST_CASE("analyze z^2+1") {
  Scratch s;
  auto in = s.put("p.json", kQuadratic);
  REQUIRE(run("analyze " + in + " --out " + s.at("out")) == 0);
  auto model = read_json_file(s.at("out/diskmodel.json"));
  REQUIRE(model.at("homoclinics").size() == 1);
  CHECK(model.at("homoclinics")[0][0] == 1);
  CHECK(model.at("homoclinics")[0][1] == 0);
  CHECK(std::abs(model.at("homoclinics")[0][2].get<double>() - 3.14159265359) < 1e-9);
  auto inv = read_json_file(s.at("out/invariants.json"));
  CHECK(inv.at("taus").size() == 1);
  auto first = slurp(s.at("out/diskmodel.json"));
  REQUIRE(run("analyze " + in + " --out " + s.at("out")) == 0);
  CHECK(slurp(s.at("out/diskmodel.json")) == first);
}

TEST_CASE("input errors exit with 2") {
  Scratch s;
  CHECK(run("analyze " + s.put("bad.json", "{\"degree\": 2,")) == 2);
  CHECK(run("analyze " + s.put("d1.json", R"({"degree": 1, "coefficients": []})")) == 2);
  CHECK(run("analyze " + s.at("missing.json")) == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("plot " + s.put("p.json", kQuadratic) + " --mode sideways") == 2);
  CHECK(run("plot " + s.put("g.json", dump(to_json(decompose(fx::strip_three_cylinders())))) + " --mode phase") == 2);
}

TEST_CASE("enumerate") {
  Scratch s;
  auto m = s.put("m.json", dump(to_json(decompose(fx::cubic_cylinder()))));
  REQUIRE(run("enumerate " + m + " --out " + s.at("ev.json")) == 0);
  CHECK(read_json_file(s.at("ev.json")).size() == 2);
  auto none = s.put("h0.json", dump(to_json(fx::make(3, {}, {{0, 0}, {1, 1}, {2, 0}, {3, 2}}))));
  REQUIRE(run("enumerate " + none + " --out " + s.at("ev0.json")) == 0);
  CHECK(read_json_file(s.at("ev0.json")).empty());
  CHECK(run("enumerate " + s.put("x.json", dump(to_json(fx::make(3, {{0, 1}}, {{2, 0}, {3, 1}}))))) == 4);
}

TEST_CASE("verify") {
  Scratch s;
  auto in = s.put("p.json", kQuadratic);
  REQUIRE(run("verify " + in + " --event-index 1 --out " + s.at("r.json")) == 0);
  auto r = read_json_file(s.at("r.json"));
  CHECK(r.at("match") == true);
  CHECK(run("verify " + in + " --event-index 7") == 2);
  auto joining_cylinders = enumerate_rank1(decompose(fx::joining_cylinders()));
  auto chained = std::find_if(joining_cylinders.begin(), joining_cylinders.end(), [](const auto& e) { return e.broken.size() > 1; });
  REQUIRE(chained != joining_cylinders.end());
  auto ev = s.put("ev.json", dump(ojson::array({to_json(*chained)})));
  CHECK(run("verify " + in + " --events " + ev) == 2);
  CHECK(run("verify " + in + " --events " + s.put("junk.json", "[{\"broken\": 3}]")) == 2);
}

TEST_CASE("plot") {
  Scratch s;
  auto m = s.put("m.json", dump(to_json(decompose(fx::strip_three_cylinders()))));
  REQUIRE(run("plot " + m + " --out " + s.at("d.svg")) == 0);
  CHECK(slurp(s.at("d.svg")).find("<svg") != std::string::npos);
  auto p = s.put("p.json", kQuadratic);
  REQUIRE(run("plot " + p + " --mode phase --density 5 --out " + s.at("ph.svg")) == 0);
  CHECK(slurp(s.at("ph.svg")).find("separatrix homoclinic") != std::string::npos);
  CHECK(run("plot " + p + " --width -3") == 2);
}

TEST_CASE("decompose-rank") {
  Scratch s;
  auto a = s.put("a.json", dump(to_json(decompose(fx::simultaneous()))));
  auto b = s.put("b.json", dump(to_json(decompose(fx::simultaneous_after()))));
  REQUIRE(run("decompose-rank " + a + " " + b + " --out " + s.at("r.json")) == 0);
  auto r = read_json_file(s.at("r.json"));
  CHECK(r.at("found") == true);
  CHECK(r.at("steps").size() == 2);
  CHECK(run("decompose-rank " + b + " " + a) == 2);
}
