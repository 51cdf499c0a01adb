#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "primforms/cli.hpp"
#include "primforms/formula.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string binary() {
  const char* b = std::getenv("PRIMFORMS_CLI");
  REQUIRE_MESSAGE(b != nullptr, "PRIMFORMS_CLI must point at the primforms executable");
  return b;
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("primforms-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the executable through the shell; stderr is kept apart unless merged.
Result sh(const std::string& args, const std::string& env = "", bool merge = false) {
  std::string cmd = "cd '" + scratch().string() + "' && " + env + " '" + binary() + "' " + args +
                    (merge ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool has_line(const std::string& out, const std::string& re) {
  std::istringstream in(out);
  std::string line;
  std::regex r(re);
  while (std::getline(in, line))
    if (std::regex_search(line, r)) return true;
  return false;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("dims") {
  auto r = sh("dims --level 8 --max-weight 18");
  CHECK(r.code == 0);
  CHECK(has_line(r.out, R"(^8\s+18\s+1\s+4\s+4\s)"));

  auto z = sh("dims --level 1 --max-weight 10 --format csv");
  CHECK(z.code == 0);
  std::istringstream in(z.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "level,weight,class,predicted,computed,precision");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",1,0,0,") != std::string::npos);
  }
  CHECK(rows == 5);

  auto six = sh("dims --level 6 --max-weight 24 --format json");
  CHECK(six.code == 0);
  auto js = nlohmann::json::parse(six.out);
  bool seen = false;
  for (const auto& row : js)
    if (row["weight"] == 24 && row["class"] == "1") {
      CHECK(row["predicted"] == 2);
      CHECK(row["computed"] == 2);
      seen = true;
    }
  CHECK(seen);

  auto nine = sh("dims --level 9 --min-weight 20 --max-weight 20");
  CHECK(has_line(nine.out, R"(^9\s+20\s+P0\s)"));
  CHECK(has_line(nine.out, R"(^9\s+20\s+tw\s)"));
}

TEST_CASE("newforms") {
  auto r = sh("newforms --level 1 --weight 24");
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "radicand 144169"));
  CHECK(has_line(r.out, R"(a\(2\) = 540 \+ 12\*sqrt\(144169\))"));
  CHECK(has_line(r.out, R"(a\(2\) = 540 - 12\*sqrt\(144169\))"));
  CHECK(has_line(r.out, "^newforms: 2$"));
  CHECK(has_line(r.out, "precision [0-9]+"));

  auto d = sh("newforms --level 1 --weight 12 --terms 11");
  const char* tau[] = {"1", "-24", "252", "-1472", "4830", "-6048", "-16744", "84480", "-113643", "-115920", "534612"};
  for (int n = 1; n <= 11; ++n)
    CHECK(has_line(d.out, "^  a\\(" + std::to_string(n) + "\\) = " + tau[n - 1] + "$"));

  auto n9 = sh("newforms --level 9 --weight 8 --class P0");
  CHECK(n9.code == 0);
  CHECK(has_line(n9.out, R"(class \*  field Q\(sqrt\(10\)\))"));
  CHECK(has_line(n9.out, R"(a\(2\) = 6\*sqrt\(10\))"));
  CHECK(has_line(n9.out, R"(a\(2\) = -6\*sqrt\(10\))"));
}

TEST_CASE("charpoly") {
  auto a = sh("charpoly --level 8 --weight 18 --prime 3");
  CHECK(a.code == 0);
  CHECK(has_line(a.out, R"(^factored: \(X\^2 - 11592\*X - 117696240\)\*\(X\^2 \+ 952\*X - 140413680\)$)"));
  auto b = sh("charpoly --level 9 --weight 20 --class '*' --prime 2");
  CHECK(has_line(b.out, R"(^charpoly: X\^4 - 1446840\*X\^2 \+ 108573696000$)"));
  auto c = sh("charpoly --level 9 --weight 20 --class '*' --prime 7");
  CHECK(has_line(c.out, R"(^factored: \(X\^2 - 83136040\*X - 16216397509785200\)\^2$)"));
  auto d = sh("charpoly --level 1 --weight 12 --prime 2");
  CHECK(has_line(d.out, R"(^charpoly: X \+ 24$)"));
  CHECK(has_line(d.out, "precision [0-9]+"));

  auto bad = sh("charpoly --level 8 --weight 18 --prime 2", "", true);
  CHECK(bad.code == 2);
  CHECK(bad.out.find("error") != std::string::npos);
}

TEST_CASE("export") {
  auto j = sh("export --level 1 --weight 12");
  CHECK(j.code == 0);
  auto js = nlohmann::json::parse(j.out);
  REQUIRE(js.size() == 1);
  CHECK(js[0]["field_degree"] == 1);
  CHECK(js[0]["coefficients"].size() >= 12);
  CHECK(js[0]["coefficients"][2] == "-24");
  CHECK(js[0]["coefficients"][11] == "534612");
  for (const char* key : {"level", "weight", "class", "field_degree", "radicand", "coefficients", "charpoly_per_prime"})
    CHECK(js[0].contains(key));

  auto empty = sh("export --level 1 --min-weight 4 --max-weight 10");
  CHECK(empty.code == 0);
  auto e = nlohmann::json::parse(empty.out);
  CHECK(e.is_array());
  CHECK(e.empty());

  auto eight = sh("export --level 8 --weight 18");
  auto r = nlohmann::json::parse(eight.out);
  REQUIRE(r.size() == 4);
  std::multiset<std::string> rads;
  for (const auto& x : r) rads.insert(x["radicand"].get<std::string>());
  CHECK(rads == std::multiset<std::string>{"114", "114", "2146", "2146"});

  auto csv = sh("export --level 8 --weight 18 --format csv");
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 5);
}

TEST_CASE("verify") {
  auto full = sh("verify");
  CHECK(full.code == 0);
  std::smatch m;
  std::regex sum(R"(entries: (\d+), pass: (\d+), fail-annotated: (\d+), unsupported: (\d+))");
  REQUIRE(std::regex_search(full.out, m, sum));
  int E = std::stoi(m[1]), P = std::stoi(m[2]), A = std::stoi(m[3]), U = std::stoi(m[4]);
  CHECK(P + A + U == E);
  CHECK(E > 200);
  auto report = read_file(scratch() / "primforms-verify.jsonl");
  CHECK(std::count(report.begin(), report.end(), '\n') == E);
  auto first = nlohmann::json::parse(report.substr(0, report.find('\n')));
  CHECK(first.contains("id"));
  CHECK(first.contains("status"));

  auto one = sh("verify --entry lvl1-P24 --report ''");
  CHECK(one.code == 0);
  CHECK(has_line(one.out, R"(^lvl1-P24\s+PASS\s)"));

  auto missing = sh("verify --entry no-such-entry");
  CHECK(missing.code == 2);

  // corrupted copy: one coefficient off
  std::string text = read_file(pf::formula::default_dataset_path());
  auto at = text.find("C^4-1032*C^2*d");
  REQUIRE(at != std::string::npos);
  std::string bad = text;
  bad.replace(at + 4, 4, "1033");
  fs::path copy = scratch() / "corrupt.txt";
  std::ofstream(copy) << bad;
  auto c = sh("verify --dataset '" + copy.string() + "' --entry lvl6-P24-6");
  CHECK(c.code == 1);
  CHECK(has_line(c.out, R"(^lvl6-P24-6\s+FAIL\s)"));
  // and via the environment variable
  auto viaenv = sh("verify --entry lvl6-P24-6", "PRIMFORMS_DATASET='" + copy.string() + "'");
  CHECK(viaenv.code == 1);

  fs::path broken = scratch() / "broken.txt";
  std::ofstream(broken) << "# header\nlvl1-P12 | 1 | 12 | 1 | Delta1 | E4*(d | level1\n";
  auto b = sh("verify --dataset '" + broken.string() + "'", "", true);
  CHECK(b.code == 2);
  CHECK(b.out.find("line 2") != std::string::npos);
}

TEST_CASE("usage errors and determinism") {
  CHECK(sh("").code == 2);
  CHECK(sh("dims --level 5").code == 2);
  CHECK(sh("newforms --level 1 --weight 13").code == 2);
  CHECK(sh("newforms --level 1").code == 2);
  CHECK(sh("frobnicate").code == 2);
  CHECK(sh("--help").code == 0);
  auto a = sh("newforms --level 6 --weight 12 --terms 20");
  auto b = sh("newforms --level 6 --weight 12 --terms 20 --threads 1");
  CHECK(a.out == b.out);
  CHECK(a.out == sh("newforms --level 6 --weight 12 --terms 20").out);
}

TEST_CASE("in-process entry point") {
  std::ostringstream out, err;
  const char* argv[] = {"primforms", "charpoly", "--level", "1", "--weight", "12", "--prime", "2"};
  CHECK(pf::cli::run(8, argv, out, err) == pf::cli::ok);
  CHECK(out.str().find("charpoly: X + 24") != std::string::npos);

  pf::cli::RunConfig cfg;
  cfg.levels = {8};
  cfg.min_weight = 18;
  cfg.max_weight = 18;
  auto rows = pf::cli::dims_table(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].predicted == 4);
  CHECK(rows[0].computed == 4);
  cfg.levels = {7};
  CHECK_THROWS_AS(pf::cli::dims_table(cfg), pf::DomainError);
}
