#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "madness/cli.hpp"

namespace fs = std::filesystem;
using madness::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

/// A synthetic season written once per test binary run.
const fs::path& data_root() {
  static const fs::path root = [] {
    const fs::path p = fs::temp_directory_path() / ("madness_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(p);
    const auto r = call({"simulate", "--out", p.string(), "--seed", "3", "--conferences", "10",
                         "--teams-per-conference", "8", "--periods", "8"});
    REQUIRE(r.code == 0);
    return p;
  }();
  return root;
}

std::vector<std::string> with_data(std::vector<std::string> args) {
  args.insert(args.end(), {"--data-dir", data_root().string(), "--league", "women", "--season", "2019-20"});
  return args;
}

std::string season_dir() { return (data_root() / "women" / "2019-20").string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes for usage problems") {
  CHECK(call({}).code == 2);
  CHECK(call({"help"}).code == 0);
  CHECK(call({"--version"}).code == 0);
  CHECK(call({"rank", "--no-such-flag"}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"winprob", "--home", "a"}).code == 2);
  CHECK(call({"field", "--field-size", "65"}).code == 2);
}

TEST_CASE("missing or invalid input files exit with 1") {
  const auto r = call({"rank", "--teams", "/nonexistent/teams.csv", "--games", "/nonexistent/games.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
  CHECK(call(with_data({"winprob", "--home", "Team A01", "--away", "Nobody"})).code == 1);
}

TEST_CASE("simulate writes the data layout") {
  const std::string dir = season_dir();
  CHECK(fs::exists(dir + "/teams.csv"));
  CHECK(fs::exists(dir + "/games.csv"));
  CHECK(fs::exists(dir + "/truth.csv"));
  CHECK(fs::exists(dir + "/manifest.json"));
  int brackets = 0;
  for (const auto& e : fs::directory_iterator(dir + "/conf_brackets")) brackets += e.path().extension() == ".json";
  CHECK(brackets == 10);
}

TEST_CASE("rank lists every team once") {
  const auto r = call(with_data({"rank"}));
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# madness rank", 0) == 0);
  CHECK(r.out.find("rank,team,conference,strength") != std::string::npos);
  int rows = 0;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) rows += !line.empty() && std::isdigit(static_cast<unsigned char>(line[0]));
  CHECK(rows == 80);
}

TEST_CASE("winprob reports all methods by default and complements under a swap") {
  const auto a = call(with_data({"winprob", "--home", "Team A01", "--away", "Team B02", "--neutral"}));
  const auto b = call(with_data({"winprob", "--home", "Team B02", "--away", "Team A01", "--neutral"}));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  for (const char* m : {"conformal,", "linear,", "logistic,"}) CHECK(a.out.find(m) != std::string::npos);
  auto last_value = [](const std::string& text, const std::string& method) {
    const auto at = text.find("\n" + method + ",");
    const auto end = text.find('\n', at + 1);
    const auto line = text.substr(at + 1, end - at - 1);
    return std::stod(line.substr(line.rfind(',') + 1));
  };
  // Exact complements hold for the two parametric methods.
  for (const char* m : {"linear", "logistic"}) {
    CHECK(last_value(a.out, m) + last_value(b.out, m) == doctest::Approx(1.0).epsilon(2e-6));
  }
}

TEST_CASE("seeded simulation output is byte-identical across runs and thread counts") {
  const std::string bracket = season_dir() + "/conf_brackets/Conf_A.json";
  const auto one = call(with_data({"tournament", "--bracket", bracket, "--simulate", "20000", "--seed", "7"}));
  const auto two = call(with_data({"tournament", "--bracket", bracket, "--simulate", "20000", "--seed", "7", "--threads", "3"}));
  REQUIRE(one.code == 0);
  CHECK(one.out == two.out);
  CHECK(one.out.find("seed=7") != std::string::npos);
  const auto other = call(with_data({"tournament", "--bracket", bracket, "--simulate", "20000", "--seed", "8"}));
  CHECK(other.out != one.out);
  CHECK(call(with_data({"tournament", "--bracket", bracket, "--simulate", "-5"})).code == 2);
}

TEST_CASE("--out writes artifacts and a manifest with hashes") {
  const fs::path out = data_root() / "out_field";
  const auto r = call(with_data({"field", "--out", out.string()}));
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(out / "field.csv"));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("command") == "field");
  CHECK(manifest.at("version") == madness::cli::kVersion);
  const auto& outputs = manifest.at("outputs");
  REQUIRE(outputs.size() == 1);
  CHECK(outputs[0].at("fnv1a64") == madness::cli::fnv1a_hex(slurp(out / "field.csv")));
  CHECK(manifest.at("inputs").size() >= 2);
  for (const auto& e : fs::directory_iterator(out)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("field probabilities sum to the field size") {
  for (int size : {64, 68}) {
    const auto r = call(with_data({"field", "--field-size", std::to_string(size)}));
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    double total = 0;
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
      if (line.empty() || line[0] == '#' || line.rfind("team,", 0) == 0) continue;
      total += std::stod(line.substr(line.rfind(',') + 1));
      ++rows;
    }
    CHECK(rows == 80);
    CHECK(total == doctest::Approx(size).epsilon(1e-4));
  }
  const auto dist = call(with_data({"field", "--rank-dist", "Team A01"}));
  REQUIRE(dist.code == 0);
  CHECK(dist.out.find("tournament_rank,probability") != std::string::npos);
}

TEST_CASE("bracket requires a seed only for the random rule") {
  CHECK(call(with_data({"bracket", "--rule", "random"})).code != 0);
  CHECK(call(with_data({"bracket", "--rule", "median"})).code != 0);
  const auto seeded = call(with_data({"bracket", "--rule", "random", "--seed", "4"}));
  REQUIRE(seeded.code == 0);
  const auto doc = nlohmann::json::parse(seeded.out.substr(seeded.out.find('{')));
  CHECK(doc.at("regions").size() == 4);
  CHECK(call(with_data({"bracket", "--rule", "random", "--seed", "4"})).out == seeded.out);
  CHECK(call(with_data({"bracket", "--field-size", "68"})).code == 0);
}

TEST_CASE("cpd is a nondecreasing table") {
  const auto r = call(with_data({"cpd", "--home", "Team A01", "--away", "Team C03", "--grid", "-10:10:1"}));
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  double prev = -1;
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    if (line.empty() || line[0] == '#' || line.rfind("mov", 0) == 0) continue;
    const double pi = std::stod(line.substr(line.find(',') + 1));
    CHECK(pi >= prev);
    prev = pi;
    ++rows;
  }
  CHECK(rows == 21);
}

TEST_CASE("helpers") {
  CHECK(madness::cli::fmt6(0.1234567) == "0.123457");
  CHECK(madness::cli::fmt6(1.0) == "1");
  CHECK(madness::cli::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(madness::cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

}  // TEST_SUITE
