#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "toph/cli.hpp"

namespace {

using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = toph::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::vector<json> read_jsonl(const std::string& path) {
  std::vector<json> out;
  std::istringstream lines(read(path));
  std::string line;
  while (std::getline(lines, line)) out.push_back(json::parse(line));
  return out;
}

// CSV rows as string cells, header dropped.
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(read(path));
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("truncate examples") {
  write("cli_d.jsonl", "{\"id\":\"a\",\"probs\":[0.6,0.3,0.1]}\n");
  Run r = run({"truncate", "--method", "top-h", "--alpha", "0.4", "--input", "cli_d.jsonl", "--output", "cli_r.jsonl"});
  REQUIRE(r.code == 0);
  const auto records = read_jsonl("cli_r.jsonl");
  REQUIRE(records.size() == 1);
  CHECK(records[0]["schema_version"] == 1);
  CHECK(records[0]["selected"] == json::array({0}));
  CHECK(records[0]["gamma"].get<double>() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(records[0]["threshold"].get<double>() == doctest::Approx(0.359178).epsilon(1e-6));

  const json manifest = json::parse(read("cli_r.jsonl.manifest.json"));
  CHECK(manifest["schema_version"] == 1);
  CHECK(manifest["command"] == "truncate");
  CHECK(manifest["config"]["alpha"] == "0.4");

  write("cli_m.jsonl", "{\"id\":\"b\",\"probs\":[0.6,0.25,0.1,0.05]}\n");
  r = run({"truncate", "--method", "min-p", "--p-base", "0.1", "--input", "cli_m.jsonl"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["selected"] == json::array({0, 1, 2}));

  r = run({"truncate", "--trace", "--input", "cli_d.jsonl"});
  CHECK(json::parse(r.out)["trace"].size() == 2);
}

TEST_CASE("exit codes") {
  write("cli_d.jsonl", "{\"id\":\"a\",\"probs\":[0.6,0.3,0.1]}\n");
  Run r = run({"truncate", "--alpha", "1.5", "--input", "cli_d.jsonl"});
  CHECK(r.code == 1);
  CHECK(r.err.find("(0, 1)") != std::string::npos);

  CHECK(run({"truncate", "--method", "beam", "--input", "cli_d.jsonl"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"truncate"}).code == 1);

  write("cli_bad.jsonl", "{\"id\":\"a\",\"probs\":[0.5,0.5]}\n{\"id\":\"b\",\"probs\":[-1,2]}\n");
  r = run({"truncate", "--input", "cli_bad.jsonl"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run({"truncate", "--input", "cli_missing.jsonl"}).code == 2);

  r = run({"gap", "--n", "25", "--output", "cli_gap.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("20") != std::string::npos);

  write("cli_big.json", R"({"schema_version":1,"kind":"ccss","weights":["1","2","3","4","5","6","7","8","9"],"tau":"12","K":3})");
  CHECK(run({"decide", "--input", "cli_big.json"}).code == 3);
  write("cli_junk.json", "{\"kind\":");
  CHECK(run({"decide", "--input", "cli_junk.json"}).code == 2);
}

TEST_CASE("sample") {
  write("cli_coin.jsonl", "{\"id\":\"c\",\"probs\":[0.5,0.5]}\n{\"id\":\"one\",\"probs\":[0.9,0.1]}\n");
  std::vector<std::string> args{"sample", "--method", "top-k",       "--k",    "2",   "--num-samples",
                                "10000",  "--seed",   "42",          "--input", "cli_coin.jsonl", "--output",
                                "cli_s1.jsonl"};
  REQUIRE(run(args).code == 0);
  args.back() = "cli_s2.jsonl";
  REQUIRE(run(args).code == 0);
  CHECK(read("cli_s1.jsonl") == read("cli_s2.jsonl"));
  const auto lines = read_jsonl("cli_s1.jsonl");
  int ones = 0;
  for (int t : lines[0]["tokens"]) ones += t;
  CHECK(ones >= 4800);
  CHECK(ones <= 5200);

  REQUIRE(run({"sample", "--input", "cli_coin.jsonl", "--num-samples", "50", "--seed", "9", "--output",
               "cli_s3.jsonl"})
              .code == 0);
  for (int t : read_jsonl("cli_s3.jsonl")[1]["tokens"]) CHECK(t == 0);
}

TEST_CASE("gap") {
  Run r = run({"gap", "--family", "uniform", "--n", "10", "--trials", "20", "--output", "cli_u.csv"});
  REQUIRE(r.code == 0);
  const json summary = json::parse(read("cli_u.csv.summary.json"));
  CHECK(summary["mean"] == 1.0);
  CHECK(summary["variance"] == 0.0);
  CHECK(r.out.find("mean=1 ") != std::string::npos);

  write("cli_known.jsonl", "{\"id\":\"known\",\"probs\":[0.4,0.3,0.2,0.1]}\n");
  REQUIRE(run({"gap", "--input", "cli_known.jsonl", "--output", "cli_k.csv"}).code == 0);
  const auto rows = read_csv("cli_k.csv");
  REQUIRE(rows.size() == 1);
  CHECK(std::stod(rows[0][5]) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("sweep") {
  REQUIRE(run({"generate", "--family", "dirichlet", "--n", "30", "--trials", "50", "--seed", "3", "--output",
               "cli_ds.jsonl"})
              .code == 0);
  REQUIRE(run({"sweep", "--input", "cli_ds.jsonl", "--output", "cli_sw.csv"}).code == 0);
  const auto rows = read_csv("cli_sw.csv");
  REQUIRE(rows.size() == 9);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][2]) >= std::stod(rows[i - 1][2]));

  REQUIRE(run({"generate", "--family", "one-hot-mix", "--peak-mass", "0.95", "--n", "30", "--trials", "50",
               "--output", "cli_peak.jsonl"})
              .code == 0);
  REQUIRE(run({"sweep", "--input", "cli_peak.jsonl", "--alphas", "0.01", "--output", "cli_sw1.csv"}).code == 0);
  CHECK(std::stod(read_csv("cli_sw1.csv")[0][2]) == doctest::Approx(1.0).epsilon(0.05));

  // A single-alpha sweep is the aggregate of truncate.
  REQUIRE(run({"sweep", "--input", "cli_ds.jsonl", "--alphas", "0.4", "--output", "cli_sw2.csv"}).code == 0);
  REQUIRE(run({"truncate", "--alpha", "0.4", "--input", "cli_ds.jsonl", "--output", "cli_tr.jsonl"}).code == 0);
  double selected = 0;
  double gamma = 0;
  const auto lines = read_jsonl("cli_tr.jsonl");
  for (const json& line : lines) {
    selected += static_cast<double>(line["selected"].size());
    gamma += line["gamma"].get<double>();
  }
  const auto row = read_csv("cli_sw2.csv")[0];
  CHECK(std::stod(row[2]) == doctest::Approx(selected / lines.size()).epsilon(1e-12));
  CHECK(std::stod(row[3]) == doctest::Approx(gamma / lines.size()).epsilon(1e-12));

  CHECK(run({"sweep", "--input", "cli_ds.jsonl", "--alphas", "0.5,1.0", "--output", "cli_sw3.csv"}).code == 1);
}

TEST_CASE("hardness pipeline commands") {
  Run r = run({"reduce", "--weights", "3,5,7", "--tau", "15", "--K", "3", "--output", "cli_e.json"});
  REQUIRE(r.code == 0);
  const json e = json::parse(read("cli_e.json"));
  CHECK(e["schema_version"] == 1);
  CHECK(e["kind"] == "ecme");
  CHECK(e["K"] == 21);
  CHECK(e["constants"]["lambda_K"] == 6);
  CHECK(e["source"]["kind"] == "ccss");

  r = run({"verify", "--input", "cli_e.json", "--output", "cli_v.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("lower_margin=") != std::string::npos);
  CHECK(r.out.find("upper_margin=") != std::string::npos);
  const json report = json::parse(read("cli_v.json"));
  CHECK(report["mass_conserved"] == true);
  CHECK(report["narrow_range"] == true);
  CHECK(report["cardinality_lock"]["holds"] == true);

  r = run({"decide", "--input", "cli_e.json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("YES", 0) == 0);
  r = run({"decide", "--weights", "3,5,7", "--tau", "16", "--K", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "NO\n");

  write("cli_ccss.json", R"({"schema_version":1,"kind":"ccss","weights":["3","5","7"],"tau":"15","K":3})");
  r = run({"decide", "--input", "cli_ccss.json", "--mode", "full", "--output", "cli_dec.json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(read("cli_dec.json"))["yes"] == true);

  CHECK(run({"reduce", "--weights", "3,x", "--tau", "15", "--K", "3"}).code == 1);
}

TEST_CASE("replay reproduces outputs byte for byte") {
  REQUIRE(run({"gap", "--family", "dirichlet", "--n", "12", "--trials", "40", "--seed", "5", "--output",
               "cli_rg.csv"})
              .code == 0);
  REQUIRE(run({"replay", "--manifest", "cli_rg.csv.manifest.json", "--output", "cli_rg2.csv"}).code == 0);
  CHECK(read("cli_rg.csv") == read("cli_rg2.csv"));
  CHECK(read("cli_rg.csv.summary.json") == read("cli_rg2.csv.summary.json"));

  write("cli_nomanifest.json", "{}");
  CHECK(run({"replay", "--manifest", "cli_nomanifest.json"}).code == 2);
}
