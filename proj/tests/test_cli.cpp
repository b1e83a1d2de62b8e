#include <doctest.h>

#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "discotec/io.hpp"
#include "helpers.hpp"

using namespace discotec;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

CliResult run_cli(const std::string& args) {
  const std::string command =
      std::string(DISCOTEC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    result.output += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("discotec_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_text(const std::string& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture_csv() {
  return "model_0,model_1,model_2\n0,0,0\n0,0,1\n1,1,0\n1,1,1\n";
}

}  // namespace

TEST_CASE("cli rank reproduces the fixture scores") {
  TempDir dir;
  write_text(dir.file("pool.csv"), fixture_csv());

  SUBCASE("binary scores and stdout ranking") {
    const auto report_path = dir.file("report.json");
    const auto result = run_cli("rank " + dir.file("pool.csv") +
                                " --method binary --out " + report_path);
    CHECK(result.exit_code == 0);
    CHECK(result.output == "rank,model,score\n1,0,0\n2,1,0\n3,2,0.5\n");

    nlohmann::json doc = nlohmann::json::parse(read_file(report_path));
    const ScoreReport report = score_report_from_json(doc["score_report"]);
    CHECK(report.total == std::vector<double>{0.0, 0.0, 0.5});
    CHECK(doc["metadata"]["tool"] == "discotec");
  }

  SUBCASE("kl keeps the same ranking") {
    const auto result =
        run_cli("rank " + dir.file("pool.csv") + " --method kl");
    CHECK(result.exit_code == 0);
    CHECK(result.output.rfind("rank,model,score\n1,0,", 0) == 0);
    CHECK(result.output.find("\n3,2,") != std::string::npos);
  }

  SUBCASE("constraints promote model 2 to rank 1") {
    write_text(dir.file("cs.txt"), "ML 0 2\nCL 0 1\n");
    const auto result = run_cli("rank " + dir.file("pool.csv") +
                                " --method binary --constraints " +
                                dir.file("cs.txt"));
    CHECK(result.exit_code == 0);
    CHECK(result.output.rfind("rank,model,score\n1,2,0.5\n", 0) == 0);
  }

  SUBCASE("aari ranks through the negated total") {
    const auto result =
        run_cli("rank " + dir.file("pool.csv") + " --method aari");
    CHECK(result.exit_code == 0);
    CHECK(result.output.rfind("rank,model,score\n1,0,", 0) == 0);
  }
}

TEST_CASE("cli rank diagnoses malformed inputs with exit 2") {
  TempDir dir;
  write_text(dir.file("bad.csv"), "0,1\nx,1\n");
  CHECK(run_cli("rank " + dir.file("bad.csv")).exit_code == 2);

  write_text(dir.file("ragged.csv"), "0,1\n1\n");
  CHECK(run_cli("rank " + dir.file("ragged.csv")).exit_code == 2);

  CHECK(run_cli("rank " + dir.file("missing.csv")).exit_code == 2);
  CHECK(run_cli("rank").exit_code == 2);

  write_text(dir.file("pool.csv"), fixture_csv());
  CHECK(run_cli("rank " + dir.file("pool.csv") + " --method nope").exit_code ==
        2);
  write_text(dir.file("conflict.txt"), "ML 0 1\nCL 0 1\n");
  CHECK(run_cli("rank " + dir.file("pool.csv") + " --constraints " +
                dir.file("conflict.txt"))
            .exit_code == 2);
  write_text(dir.file("far.txt"), "ML 0 99\n");
  CHECK(run_cli("rank " + dir.file("pool.csv") + " --constraints " +
                dir.file("far.txt"))
            .exit_code == 2);
}

TEST_CASE("cli synth writes deterministic scenario files") {
  TempDir dir;
  const std::string base = "synth --scenario uniform --n 200 --k 10 --t 50 "
                           "--rho-max 0.9 --seed 7 ";
  CHECK(run_cli(base + "--out " + dir.file("a.csv") + " --truth-out " +
                dir.file("ta.csv"))
            .exit_code == 0);
  CHECK(run_cli(base + "--out " + dir.file("b.csv") + " --truth-out " +
                dir.file("tb.csv"))
            .exit_code == 0);
  CHECK(read_file(dir.file("a.csv")) == read_file(dir.file("b.csv")));
  CHECK(read_file(dir.file("ta.csv")) == read_file(dir.file("tb.csv")));

  const Ensemble pool = load_partitions_csv(dir.file("a.csv"));
  CHECK(pool.size() == 50);
  CHECK(pool.n() == 200);

  CHECK(run_cli("synth --scenario hub --n 60 --k 5 --t 8 --alpha 1.0 --seed 3 "
                "--out " +
                dir.file("hub.csv"))
            .exit_code == 0);
  nlohmann::json meta =
      nlohmann::json::parse(read_file(dir.file("hub.csv") + ".meta.json"));
  for (const auto& hub : meta["hub_of_model"]) CHECK(hub == "A");

  CHECK(run_cli("synth --scenario uniform --n 10 --k 20 --t 5 --out " +
                dir.file("bad.csv"))
            .exit_code == 2);
}

TEST_CASE("cli consensus exports the matrix and its mean") {
  TempDir dir;
  write_text(dir.file("pool.csv"), fixture_csv());

  const auto result = run_cli("consensus --partitions " + dir.file("pool.csv") +
                              " --out-matrix " + dir.file("c.csv"));
  CHECK(result.exit_code == 0);
  CHECK(result.output == "n=4 t=3 mu=0.5\n");
  const DataMatrix c = load_data_csv(dir.file("c.csv"));
  CHECK(c.row(0)[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto bin = run_cli("consensus --partitions " + dir.file("pool.csv") +
                           " --out-matrix " + dir.file("q.csv") + " --binarised");
  CHECK(bin.exit_code == 0);
  const DataMatrix q = load_data_csv(dir.file("q.csv"));
  const auto want = connectivity(Partition({0, 0, 1, 1}));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(q.row(i)[static_cast<std::size_t>(j)] == (want.get(i, j) ? 1 : 0));
    }
  }

  // identical models: consensus entries are exactly 0 or 1
  write_text(dir.file("same.csv"), "0,0,0\n0,0,0\n1,1,1\n");
  CHECK(run_cli("consensus --partitions " + dir.file("same.csv") +
                " --out-matrix " + dir.file("same_c.csv"))
            .exit_code == 0);
  const DataMatrix same = load_data_csv(dir.file("same_c.csv"));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double v = same.row(i)[static_cast<std::size_t>(j)];
      CHECK((v == 0.0 || v == 1.0));
    }
  }
}

TEST_CASE("cli bench runs the protocol end to end") {
  TempDir dir;
  // Two small scenario datasets on disk.
  REQUIRE(run_cli("synth --scenario uniform --n 60 --k 5 --t 10 --rho-max 0.9 "
                  "--seed 5 --out " +
                  dir.file("p1.csv") + " --truth-out " + dir.file("t1.csv"))
              .exit_code == 0);
  REQUIRE(run_cli("synth --scenario uniform --n 60 --k 5 --t 10 --rho-max 0.5 "
                  "--seed 6 --out " +
                  dir.file("p2.csv") + " --truth-out " + dir.file("t2.csv"))
              .exit_code == 0);
  write_text(dir.file("manifest.json"),
             R"({"datasets":[)"
             R"({"name":"d1","group":"g","partitions":"p1.csv","targets":"t1.csv"},)"
             R"({"name":"d2","group":"g","partitions":"p2.csv","targets":"t2.csv"}]})");

  const auto result = run_cli(
      "bench --datasets " + dir.file("manifest.json") +
      " --methods binary,kl,aari --repeats 3 --constrained-observations 0,6 "
      "--seed 9 --out " +
      dir.file("report.json"));
  CHECK(result.exit_code == 0);

  nlohmann::json doc = nlohmann::json::parse(read_file(dir.file("report.json")));
  CHECK(doc["protocol"]["methods"].size() == 3);
  CHECK(doc.contains("constraint_sweep"));
  CHECK(fs::exists(dir.file("report.json") + ".tables.csv"));
  CHECK(fs::exists(dir.file("report.json") + ".constraints.csv"));

  const std::string tables = read_file(dir.file("report.json") + ".tables.csv");
  CHECK(tables.rfind("method,group,", 0) == 0);
  CHECK(tables.find("binary,all,2,0,") != std::string::npos);

  // empty methods list
  CHECK(run_cli("bench --datasets " + dir.file("manifest.json") + " --out " +
                dir.file("r2.json"))
            .exit_code == 2);
}
