#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sprt/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = sprt::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(SPRT_TEST_TMPDIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::vector<std::string> kReference = {"--n", "100", "--theta0", "0.2", "--theta1", "-0.1", "--alpha", "0.00005", "--beta", "0.2"};
const std::vector<std::string> kSym = {"--n", "100", "--theta0", "0.1", "--theta1", "-0.1", "--alpha", "0.01", "--beta", "0.05"};

std::vector<std::string> with(std::string cmd, const std::vector<std::string>& flags, std::vector<std::string> extra = {}) {
  std::vector<std::string> v{std::move(cmd)};
  v.insert(v.end(), flags.begin(), flags.end());
  v.insert(v.end(), extra.begin(), extra.end());
  return v;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("closed-form") {
  SUBCASE("reference curve peaks near 33") {
    const Run r = cli(with("closed-form", kReference, {"--l-range", "1:100"}));
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 101);
    CHECK(rows[0] == std::vector<std::string>{"l", "p0", "p1", "ps"});
    std::size_t best = 0;
    double best_ps = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double ps = std::stod(rows[i][3]);
      if (ps > best_ps) {
        best_ps = ps;
        best = std::stoul(rows[i][0]);
      }
    }
    CHECK(best == 33);
    CHECK(rows[33][3] == "0.980261604034907");
  }
  SUBCASE("symmetric column is constant") {
    const Run r = cli(with("closed-form", kSym));
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 101);
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i][3] == rows[1][3]);
  }
  SUBCASE("json") {
    const Run r = cli(with("closed-form", kSym, {"--l", "4", "--json"}));
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["rows"].size() == 1);
    CHECK(j["rows"][0]["l"] == 4);
  }
  SUBCASE("invalid budget") {
    const Run r = cli({"closed-form", "--n", "10", "--theta0", "0.1", "--theta1", "-0.1", "--alpha", "0.6", "--beta", "0.6"});
    CHECK(r.code == 2);
    CHECK(r.err.find("alpha + beta must be < 1") != std::string::npos);
  }
  SUBCASE("l beyond n") {
    CHECK(cli(with("closed-form", kSym, {"--l", "101"})).code == 2);
    CHECK(cli(with("closed-form", kSym, {"--l-range", "5:2"})).code == 2);
  }
}

TEST_CASE("optimize") {
  SUBCASE("reference") {
    const Run r = cli(with("optimize", kReference));
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["case"] == "II");
    CHECK(j["l_opt_closed_form"].get<double>() == doctest::Approx(32.742032583017837));
    CHECK(std::abs(j["l_argmax"].get<int>() - 32.742) <= 2.0);
    CHECK(j["closed_form_agrees"] == true);
  }
  SUBCASE("symmetric") {
    const json j = json::parse(cli(with("optimize", kSym)).out);
    CHECK(j["note"] == "l-invariant");
    CHECK(j["l_opt_closed_form"].is_null());
    CHECK(j["l_min"].is_null());
    CHECK(j["l_argmax"] == 1);
  }
  SUBCASE("indistinguishable") {
    const json j = json::parse(cli({"optimize", "--n", "10", "--theta0", "0.01", "--theta1", "0", "--alpha", "0.001", "--beta", "0.001"}).out);
    CHECK(j["case"] == "I");
    CHECK(j["recommendation"] == "random guess");
    CHECK(j["p_s_max"].get<double>() <= 0.501);
  }
  SUBCASE("plateau") {
    const json j = json::parse(cli({"optimize", "--n", "100", "--theta0", "0.4", "--theta1", "0.45", "--alpha", "0.2", "--beta", "0.0001"}).out);
    CHECK(j["case"] == "III");
    CHECK(j["l_min_rounded"] == 15);
    CHECK(j["l_max_rounded"] == 98);
  }
}

TEST_CASE("unambiguous") {
  const Run ok = cli({"unambiguous", "--overlap", "0.9", "--n", "10", "--l", "2"});
  REQUIRE(ok.code == 0);
  const auto rows = csv_rows(ok.out);
  CHECK(rows[1][3] == "0.6513215599");
  CHECK(rows[1][4] == "0.6513215599");
  CHECK(rows[1][5] == "true");

  const Run orth = cli({"unambiguous", "--overlap", "0", "--n", "10", "--l", "5"});
  CHECK(csv_rows(orth.out)[1][3] == "1");

  const Run bad = cli({"unambiguous", "--overlap", "0.9", "--n", "10", "--l", "3"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("divide") != std::string::npos);

  const Run angle = cli({"unambiguous", "--theta-angle", "0.2", "--n", "6", "--l", "3", "--json"});
  REQUIRE(angle.code == 0);
  CHECK(json::parse(angle.out)["equal"] == true);
  CHECK(cli({"unambiguous", "--n", "6", "--l", "3"}).code == 2);
}

TEST_CASE("parse errors") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli(with("optimize", kSym, {"--bogus", "1"})).code == 2);
  CHECK(cli({"optimize", "--n", "10"}).code == 2);
  CHECK(cli({"simulate", "--n", "10", "--theta0", "0.1", "--theta1", "-0.1", "--alpha", "0.1", "--beta", "0.1", "--l", "1",
             "--truth", "2", "--trajectories", "5", "--seed", "1"}).code == 2);
  const Run help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("closed-form") != std::string::npos);
  const Run sub_help = cli({"simulate", "--help"});
  for (const char* flag : {"--n", "--theta0", "--theta1", "--alpha", "--beta", "--l", "--truth", "--trajectories", "--seed",
                           "--paths-out", "--summary-out", "--mean-out"}) {
    CHECK(sub_help.out.find(flag) != std::string::npos);
  }
}

TEST_CASE("simulate outputs, manifest and replay") {
  const fs::path dir = scratch("simulate");
  const auto args = with("simulate", kSym,
                         {"--l", "2", "--truth", "0", "--trajectories", "300", "--seed", "17", "--mean-out",
                          (dir / "mean.csv").string(), "--paths-out", (dir / "paths.csv").string(), "--summary-out",
                          (dir / "summary.json").string()});
  const Run r = cli(args);
  REQUIRE(r.code == 0);
  const json s = json::parse(slurp(dir / "summary.json"));
  CHECK(s["schema_version"] == 1);
  CHECK(s["horizon_batches"] == 50);
  CHECK(s["leftover_copies"] == 0);
  CHECK(s["horizon_estimate"]["n_trials"] == 300);
  CHECK(s.contains("first_crossing_estimate"));
  CHECK(s.contains("closed_form"));
  CHECK(s.contains("exact_horizon"));
  CHECK(csv_rows(slurp(dir / "mean.csv")).size() == 51);
  CHECK(csv_rows(slurp(dir / "paths.csv")).size() == 1 + 300 * 50);

  const fs::path manifest = dir / "summary.json.manifest.json";
  REQUIRE(fs::exists(manifest));
  const json m = json::parse(slurp(manifest));
  CHECK(m["command"] == "simulate");
  CHECK(m["seed"] == 17);

  const fs::path again = scratch("simulate_replay");
  const Run rr = cli({"replay", "--manifest", manifest.string(), "--output-dir", again.string()});
  REQUIRE(rr.code == 0);
  for (const char* f : {"summary.json", "mean.csv", "paths.csv"}) CHECK(slurp(dir / f) == slurp(again / f));

  // unwritable destination
  const Run io = cli(with("simulate", kSym, {"--l", "1", "--truth", "0", "--trajectories", "10", "--seed", "1",
                                             "--summary-out", (dir / "missing" / "x.json").string()}));
  CHECK(io.code == 3);
}

TEST_CASE("closed-form manifest replay") {
  const fs::path dir = scratch("closed");
  REQUIRE(cli(with("closed-form", kReference, {"--out", (dir / "curve.csv").string()})).code == 0);
  const fs::path again = scratch("closed_replay");
  REQUIRE(cli({"replay", "--manifest", (dir / "curve.csv.manifest.json").string(), "--output-dir", again.string()}).code == 0);
  CHECK(slurp(dir / "curve.csv") == slurp(again / "curve.csv"));
}

TEST_CASE("number formatting") {
  CHECK(sprt::cli::format_number(0.1) == "0.1");
  CHECK(sprt::cli::format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(sprt::cli::format_number(-2.5e-20) == "-2.5e-20");
}
