#include "corpus.hpp"
#include "fanocpx/report.hpp"
#include "fanocpx/table.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace fanocpx;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(FANOCPX_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string pair_file(const std::string& name) { return std::string(FANOCPX_DATA_DIR) + "/pairs/" + name + ".json"; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("fanocpx_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::vector<json> lines(const std::string& s) {
  std::vector<json> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("analyze") {
  Result r = cli("analyze " + pair_file("no_201"));
  CHECK(r.code == 0);
  CHECK(r.out.find("terminal: yes") != std::string::npos);
  CHECK(r.out.find("smooth: yes") != std::string::npos);
  CHECK(r.out.find("table row: 2.01") != std::string::npos);

  r = cli("analyze --format json " + pair_file("sit_1A_0_2"));
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["terminal"] == false);
  CHECK(j["witnesses"]["terminal"]["lineality_point"] == json::array({0, 1}));
  // The JSON report is the one the library computes.
  const Table t = Table::load_default();
  CHECK(report_from_json(j) == analyze(corpus::sit_1A(0, 2), &t));
}

TEST_CASE("analyze exit codes") {
  CHECK(cli("analyze " + temp_file("bad.json", "{\"r\": 2,")).code == 2);
  CHECK(cli("analyze " + temp_file("shape.json", "{\"r\": 2}")).code == 2);
  CHECK(cli("analyze /nonexistent/pair.json").code == 2);
  // Two equal columns.
  json dup = pair_to_json(corpus::no_201());
  dup["d"] = json::array({json::array({0, 0, 0, 0, 0, 0}), json::array({0, 0, 0, 0, 0, 0})});
  Result r = cli("analyze " + temp_file("dup.json", dup.dump()));
  CHECK(r.code == 3);
  CHECK(r.out.find("error: columns not pairwise distinct") != std::string::npos);
}

TEST_CASE("classify") {
  const std::string audit = (std::filesystem::temp_directory_path() / "fanocpx_test_audit.jsonl").string();
  std::filesystem::remove(audit);
  Result a = cli("classify --constellation 2j --jobs 1 --audit " + audit);
  Result b = cli("classify --constellation 2j --jobs 2 --audit " + audit);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto ls = lines(a.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0]["type"] == "class");
  CHECK(ls[0]["table_row"].is_null());
  CHECK(ls[1]["type"] == "run");
  CHECK(ls[1]["exhausted"] == false);
  CHECK(ls.back()["type"] == "comparison");
  CHECK(ls.back()["extra"].size() == 1);
  std::ifstream in(audit);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(json::parse(line)["report"]["terminal"] == true);

  Result g = cli("classify --constellation 2i --constellation 2g");
  auto gl = lines(g.out);
  CHECK(gl.back()["matched"] == json::array({"2.11", "2.12"}));

  CHECK(cli("classify --constellation 2a --budget 0").code == 1);
  CHECK(cli("classify --constellation 2a --budget -3").code == 1);
  CHECK(cli("classify --constellation 7x").code == 1);
  CHECK(cli("classify").code == 1);
}

TEST_CASE("contract") {
  Result r = cli("contract --to-minimal --format json " + pair_file("no_201_plus"));
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["steps"].size() == 1);
  CHECK(j["steps"][0]["deleted"] == 6);
  CHECK(j["table_row"] == "2.01");
  CHECK(j["minimal"] == true);

  r = cli("contract --to-minimal " + pair_file("no_201"));
  CHECK(r.code == 0);
  CHECK(r.out.find("already combinatorially minimal") != std::string::npos);

  const std::string cmd = std::string(FANOCPX_CLI) + " contract --index 0 " + pair_file("no_201") + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  char buf[512] = {};
  REQUIRE(fgets(buf, sizeof buf, p));
  CHECK(WEXITSTATUS(pclose(p)) == 4);
  CHECK(std::string(buf).find("do not generate the whole space as a cone") != std::string::npos);
  CHECK(cli("contract " + pair_file("no_201")).code == 1);
}

TEST_CASE("table") {
  Result r = cli("table --format json");
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j.size() == 12);
  CHECK(j[0]["id"] == "2.01");
  CHECK(cli("table").out.find("2.12") != std::string::npos);
}
