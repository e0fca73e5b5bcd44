#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "bakerlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bakerlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  double at(std::size_t row, const std::string& column) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == column) return std::stod(rows.at(row).at(i));
    FAIL("no column " << column);
    return 0.0;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

Csv parse(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      csv.comments.push_back(line);
    } else if (csv.header.empty()) {
      csv.header = split(line);
    } else {
      csv.rows.push_back(split(line));
    }
  }
  return csv;
}

std::filesystem::path scratch() {
  const char* base = std::getenv("BAKERLAB_TEST_TMP");
  auto dir = std::filesystem::path(base ? base : std::filesystem::temp_directory_path().string()) / "cli_scratch";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  const auto path = scratch() / name;
  std::ofstream(path) << content;
  return path.string();
}

const std::string standard_json =
    R"({"modes":[{"k":[1,1],"re":0.25,"im":0},{"k":[-1,-1],"re":0.25,"im":0},)"
    R"({"k":[1,-1],"re":0.25,"im":0},{"k":[-1,1],"re":0.25,"im":0}],"cutoff":null,"time_shift":0})";

}  // namespace

TEST_CASE("spectrum") {
  const auto r2 = invoke({"spectrum", "--n", "2"});
  REQUIRE(r2.code == 0);
  const Csv c2 = parse(r2.out);
  REQUIRE(c2.rows.size() == 2);
  CHECK(c2.at(0, "theta") == doctest::Approx(0.0));
  CHECK(c2.at(1, "theta") == doctest::Approx(0.5));
  CHECK(c2.comments.front().rfind("# bakerlab ", 0) == 0);

  const auto bad = invoke({"spectrum", "--n", "3"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("even") != std::string::npos);

  const auto path = (scratch() / "s.csv").string();
  const auto r128 = invoke({"spectrum", "--n", "128", "--out", path});
  REQUIRE(r128.code == 0);
  CHECK(r128.out.empty());
  std::ifstream in(path);
  const Csv c = parse(std::string(std::istreambuf_iterator<char>(in), {}));
  REQUIRE(c.rows.size() == 128);
  for (std::size_t j = 0; j < c.rows.size(); ++j) CHECK(std::abs(c.at(j, "modulus_defect")) <= 1e-8);
  CHECK(std::filesystem::exists(path + ".manifest.json"));
}

TEST_CASE("egorov") {
  const auto obs = write_file("a.json", standard_json);
  const auto one = invoke({"egorov", "--n", "512", "--time", "3", "--delta", "0.05", "--obs", obs});
  REQUIRE(one.code == 0);
  const Csv c = parse(one.out);
  REQUIRE(c.rows.size() == 1);
  CHECK(c.at(0, "residual") >= 0.0);
  CHECK(c.at(0, "sigma") == 8.0);

  const auto refused = invoke({"egorov", "--n", "1024", "--eps", "0.5", "--time", "6"});
  CHECK(refused.code == 2);
  CHECK(refused.err.find("--force") != std::string::npos);

  const auto sweep = invoke({"egorov", "--n-list", "128,256,512", "--time", "2", "--obs", obs});
  REQUIRE(sweep.code == 0);
  const Csv s = parse(sweep.out);
  REQUIRE(s.rows.size() == 3);
  for (std::size_t i = 1; i < 3; ++i) CHECK(s.at(i, "residual") <= 1.1 * s.at(i - 1, "residual"));

  const auto sched = invoke({"egorov", "--n", "64", "--eps", "0.5", "--time", "1"});
  REQUIRE(sched.code == 0);
  CHECK(parse(sched.out).at(0, "delta") == doctest::Approx(0.1));
  CHECK(parse(sched.out).at(0, "admissible") == 1.0);
}

TEST_CASE("variance") {
  const auto obs = write_file("a.json", standard_json);
  const auto r = invoke({"variance", "--n-list", "64,128", "--obs", obs});
  REQUIRE(r.code == 0);
  const Csv c = parse(r.out);
  REQUIRE(c.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(c.at(i, "trace_bound") >= c.at(i, "s2"));

  const auto zero = write_file("zero.json", R"({"modes":[],"cutoff":null,"time_shift":0})");
  const auto z = invoke({"variance", "--n-list", "64", "--obs", zero});
  REQUIRE(z.code == 0);
  CHECK(parse(z.out).at(0, "s2") == 0.0);

  const auto dump = (scratch() / "diag.csv").string();
  const auto d = invoke({"variance", "--n-list", "64,128,256,512", "--obs", obs, "--dump-diagonal", dump});
  REQUIRE(d.code == 0);
  const Csv v = parse(d.out);
  REQUIRE(v.rows.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(v.at(i, "s2") <= 1.1 * v.at(i - 1, "s2"));
  std::ifstream in(dump);
  CHECK(parse(std::string(std::istreambuf_iterator<char>(in), {})).rows.size() == 64 + 128 + 256 + 512);

  CHECK(invoke({"variance", "--n-list", "64,66,2048"}).code == 2);
}

TEST_CASE("coherent") {
  const auto r = invoke({"coherent", "--n", "1024", "--q", "0.3", "--p", "0.4", "--sigma", "1", "--delta", "0.1",
                         "--gamma", "0.2"});
  REQUIRE(r.code == 0);
  const Csv c = parse(r.out);
  REQUIRE(c.rows.size() == 1);
  CHECK(c.at(0, "residual") <= 1e-8);
  CHECK(c.at(0, "pi_N_theta") == doctest::Approx(3.14159265358979 * 1024 * 0.01));

  const auto refused = invoke({"coherent", "--q", "0.5", "--p", "0.5"});
  CHECK(refused.code == 2);
  CHECK(refused.err.find("delta") != std::string::npos);
}

TEST_CASE("correlations") {
  const auto r = invoke({"correlations", "--tmax", "12"});
  REQUIRE(r.code == 0);
  const Csv c = parse(r.out);
  REQUIRE(c.rows.size() == 13);
  CHECK(std::abs(c.at(10, "K_ab")) <= 0.05 * c.at(0, "K_ab"));
  CHECK(c.at(10, "quadrature_error_estimate") <= 1e-6);

  // With M = 16 the nodes reach p = 1/2 after four inverse steps.
  CHECK(invoke({"correlations", "--tmax", "6", "--m", "16"}).code == 0);
  CHECK(invoke({"correlations", "--tmax", "6", "--m", "16", "--strict"}).code == 2);
}

TEST_CASE("quantise-check") {
  const auto r = invoke({"quantise-check", "--n-list", "8,16"});
  REQUIRE(r.code == 0);
  const Csv c = parse(r.out);
  REQUIRE(c.rows.size() == 6);
  for (std::size_t i = 0; i < c.rows.size(); ++i) CHECK(c.at(i, "max_entry_error") <= 1e-6);
}

TEST_CASE("determinism across thread counts") {
  const auto a = invoke({"egorov", "--n-list", "64,128", "--time", "2", "--threads", "1"});
  const auto b = invoke({"egorov", "--n-list", "64,128", "--time", "2", "--threads", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = invoke({"variance", "--n-list", "32,64", "--threads", "1"});
  const auto d = invoke({"variance", "--n-list", "32,64", "--threads", "3"});
  CHECK(c.out == d.out);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({"egorov", "--n", "64", "--n-list", "64"}).code == 2);
  CHECK(invoke({"egorov", "--n", "64", "--obs", "/nonexistent.json"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}
