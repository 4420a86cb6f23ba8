#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <string>

#include "brdlab/json_io.hpp"

using namespace brdlab;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string file = "cli_test_output.txt";
  const std::string cmd = std::string(BRDLAB_CLI_PATH) + " " + args + " > " + file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(file);
  Result r{WIFEXITED(status) ? WEXITSTATUS(status) : -1,
           std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>())};
  std::remove(file.c_str());
  return r;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(cli("simulate --graph path:4 --delta 0.3").code == 0);
  CHECK(cli("simulate --graph path:0 --delta 0.3").code == 2);
  CHECK(cli("simulate --graph path:4 --delta 1.5").code == 2);
  CHECK(cli("simulate --graph bogus:3").code == 2);
  CHECK(cli("equilibria --graph path:25 --delta 0.5 --brute-force").code == 3);
  CHECK(cli("sweep --preset fig-nope").code == 2);
  CHECK(cli("no-such-command").code == 2);
}

TEST_CASE("simulate prints a trajectory summary") {
  const Result r = cli("simulate --graph path:4 --delta 0.3 --seed 5");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["active_set"].size() == 4);
  CHECK(j["rounds"].get<double>() > 0.0);
  CHECK(j["converged"] == true);
}

TEST_CASE("sweep writes the CSV header") {
  const Result r = cli("sweep --graph path:3 --deltas 0.2,0.4 --trials 2");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("delta,trial,seed,", 0) == 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 5);
}

TEST_CASE("spectrum and scenario listings") {
  const Result s = cli("spectrum --graph cycle:4");
  REQUIRE(s.code == 0);
  const Json j = Json::parse(s.out);
  CHECK(j["spectrum"].size() == 4);
  CHECK(j["lambda_min"].get<double>() == doctest::Approx(-2.0));
  CHECK(cli("scenario --name singlecomp").code == 0);
  CHECK(cli("presets").code == 0);
}

TEST_CASE("scenario simulation replays its schedule") {
  const Result r = cli("simulate --scenario chain:3:0.99");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["reshuffles"].size() == 3);
}
