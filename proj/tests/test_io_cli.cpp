#include "mmd/cli.hpp"
#include "mmd/io.hpp"

#include "mmd/datagen.hpp"
#include "mmd/statcore.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace mmd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mmdtest_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(std::vector<std::string> args, std::string* stdout_text = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("mmdtest");
  for (const auto& a : args) argv.push_back(a.c_str());

  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  const int code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old);
  if (stdout_text) *stdout_text = captured.str();
  return code;
}

}  // namespace

TEST_CASE("CSV matrix round trip and header detection") {
  TempDir tmp;
  SampleMatrix m(3, 2);
  m << 1.5, -2.25, 0.001953125, 7.0, 1e-17, 123456.75;
  const std::string path = tmp.file("m.csv");
  write_csv_matrix(path, m);
  const SampleMatrix back = read_csv_matrix(path);
  CHECK(back == m);

  SUBCASE("header row is skipped") {
    const std::string with_header = tmp.file("h.csv");
    write_text_file(with_header, "a,b\n1,2\n3,4\n");
    const SampleMatrix parsed = read_csv_matrix(with_header);
    CHECK(parsed.rows() == 2);
    CHECK(parsed(1, 1) == 4.0);
  }
  SUBCASE("ragged rows rejected") {
    const std::string bad = tmp.file("bad.csv");
    write_text_file(bad, "1,2\n3\n");
    CHECK_THROWS(read_csv_matrix(bad));
  }
  SUBCASE("non-numeric cell after the header rejected") {
    const std::string bad = tmp.file("bad2.csv");
    write_text_file(bad, "1,2\n3,x\n");
    CHECK_THROWS(read_csv_matrix(bad));
  }
  SUBCASE("missing file rejected") { CHECK_THROWS(read_csv_matrix(tmp.file("nope.csv"))); }
}

TEST_CASE("format_double round-trips") {
  for (double v : {1.0 / 3.0, 6.4e-17, -123456789.123456789, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("cli test subcommand") {
  TempDir tmp;
  const PairedDataset data = generate(GeneratorSpec::gaussian_mean_shift(10, 5, 0.3, 500, 7));
  const std::string x_path = tmp.file("x.csv");
  const std::string y_path = tmp.file("y.csv");
  write_csv_matrix(x_path, data.x());
  write_csv_matrix(y_path, data.y());

  SUBCASE("identical files are degenerate with exit 3") {
    std::string out;
    const int code = run({"test", "--method", "mmmd", "--kernel", "gaussian", "--bandwidth",
                          "median", "--alpha", "0.05", "--x", x_path, "--y", x_path},
                         &out);
    CHECK(code == 3);
    CHECK(out.find("\"degenerate\":true") != std::string::npos);
    CHECK(out.find("\"reject\":false") != std::string::npos);
  }

  SUBCASE("mean-shift data rejects and matches the library bit for bit") {
    std::string out;
    const int code = run({"test", "--method", "mmmd", "--kernel", "gaussian", "--bandwidth",
                          "median", "--alpha", "0.05", "--x", x_path, "--y", y_path},
                         &out);
    CHECK(code == 0);
    CHECK(out.find("\"reject\":true") != std::string::npos);

    const TestOutcome direct =
        mmd_test(data, {KernelFamily::Gaussian, BandwidthRule::median()}, 0.05);
    CHECK(out.find("\"statistic\":" + format_double(direct.statistic)) != std::string::npos);
  }

  SUBCASE("mmmmd with a scaled-median Gaussian bank uses the chi2_3 threshold") {
    std::string out;
    const int code = run({"test", "--method", "mmmd", "--x", x_path, "--y", y_path}, &out);
    CHECK(code == 0);
    std::string out3;
    const int code3 = run({"test", "--method", "mmmmd", "--kernels",
                           "gaussian:1,gaussian:2,gaussian:4", "--bandwidth-base", "median",
                           "--x", x_path, "--y", y_path},
                          &out3);
    CHECK(code3 == 0);
    CHECK(out3.find("\"threshold\":7.8147279032511") != std::string::npos);
  }

  SUBCASE("unequal sample sizes fail for paired methods, truncate for baselines") {
    SampleMatrix y_short = data.y().topRows(400);
    const std::string y_short_path = tmp.file("y_short.csv");
    write_csv_matrix(y_short_path, y_short);
    CHECK(run({"test", "--method", "mmmd", "--x", x_path, "--y", y_short_path}) == 2);
    CHECK(run({"test", "--method", "cross", "--x", x_path, "--y", y_short_path}) == 0);
  }

  SUBCASE("bad flags fail fast with exit 2") {
    CHECK(run({"test", "--method", "mmmd"}) == 2);                          // missing --x/--y
    CHECK(run({"test", "--method", "bogus", "--x", x_path, "--y", y_path}) == 2);
    CHECK(run({"test", "--method", "mmmd", "--bandwidth", "nonsense", "--x", x_path, "--y",
               y_path}) == 2);
    CHECK(run({"nonsense-subcommand"}) == 2);
  }

  SUBCASE("seeded shuffle is deterministic") {
    auto strip_runtime = [](std::string s) {
      const auto pos = s.find(",\"runtime_ns\":");
      return pos == std::string::npos ? s : s.substr(0, pos);
    };
    std::string a, b;
    run({"test", "--method", "mmmd", "--shuffle", "--seed", "5", "--x", x_path, "--y", y_path},
        &a);
    run({"test", "--method", "mmmd", "--shuffle", "--seed", "5", "--x", x_path, "--y", y_path},
        &b);
    CHECK(strip_runtime(a) == strip_runtime(b));
    CHECK(!a.empty());
  }
}

TEST_CASE("cli experiments write byte-identical files on rerun") {
  TempDir tmp;

  SUBCASE("simulate-null") {
    const std::string base1 = tmp.file("null1");
    const std::string base2 = tmp.file("null2");
    const std::vector<std::string> args = {"simulate-null", "--n",    "64",  "--d",
                                           "3",             "--reps", "50",  "--seed",
                                           "7",             "--out",  base1};
    CHECK(run(args) == 0);
    auto args2 = args;
    args2.back() = base2;
    CHECK(run(args2) == 0);
    CHECK(slurp(base1 + "_report.csv") == slurp(base2 + "_report.csv"));
    CHECK(slurp(base1 + "_samples.csv") == slurp(base2 + "_samples.csv"));
    CHECK(!slurp(base1 + "_samples.csv").empty());
  }

  SUBCASE("power with a JSON config") {
    const std::string config_path = tmp.file("power.json");
    write_text_file(config_path, R"({
      "generator": {"kind": "mean-shift", "d": 5, "j": 2, "eps": 0.4},
      "n_grid": [50, 100],
      "methods": ["mmmd", "linear"],
      "kernel": {"family": "gaussian", "bandwidth": "median"},
      "reps": 40, "alpha": 0.05, "seed": 3,
      "out": ")" + tmp.file("pw1") + R"("
    })");
    CHECK(run({"power", "--config", config_path}) == 0);
    const std::string first = slurp(tmp.file("pw1") + "_report.csv");
    CHECK(run({"power", "--config", config_path}) == 0);
    CHECK(slurp(tmp.file("pw1") + "_report.csv") == first);
    CHECK(first.find("mmmd,50,5,") != std::string::npos);

    const std::string summary = slurp(tmp.file("pw1") + "_summary.json");
    CHECK(summary.find("\"experiment\":\"power\"") != std::string::npos);
  }

  SUBCASE("check sn-limit exit codes") {
    std::string out;
    CHECK(run({"check", "sn-limit", "--n", "100000"}, &out) == 0);
    CHECK(out.find("S_n(100000)") != std::string::npos);
    CHECK(run({"check", "sn-limit", "--n", "100"}) == 1);  // far from the limit at n=100
  }
}
