#include "cli.hpp"
#include "otsense/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = otsense::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(OTSENSE_TEST_TMP) / "cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::string get(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("example then indices end to end") {
  const auto dir = scratch("e2e");
  const auto csv = (dir / "gauss.csv").string();
  auto r = run({"example", "--model", "linear-gaussian", "--n", "2000", "--seed", "42", "--out", csv});
  REQUIRE(r.code == 0);
  const auto table = otsense::read_csv(csv);
  CHECK(table.values.rows() == 2000);
  CHECK(table.header == std::vector<std::string>{"X1", "X2", "X3", "Y1", "Y2"});

  r = run({"indices", "--data", csv, "--inputs", "X1,X2,X3", "--outputs", "Y1,Y2", "--M", "20", "--solver", "exact",
           "--out", (dir / "exact").string(), "--plot"});
  REQUIRE(r.code == 0);
  const auto doc = otsense::read_results_json(dir / "exact" / "indices.json");
  REQUIRE(doc.estimate.inputs.size() == 3);
  for (const auto& in : doc.estimate.inputs) {
    REQUIRE(in.components.has_value());
    const double sum = in.components->advective + in.components->diffusive + in.components->residual;
    CHECK(sum >= in.index - 1e-12);
    if (in.components->residual > 0.0) CHECK(sum == doctest::Approx(in.index).epsilon(1e-12));
  }
  CHECK(fs::exists(dir / "exact" / "indices.svg"));
  CHECK(fs::exists(dir / "exact" / "separations.svg"));

  r = run({"threshold", "--data", csv, "--outputs", "Y1,Y2", "--M", "20", "--solver", "sinkhorn", "--epsilon",
           "0.001", "--out", (dir / "thr").string()});
  REQUIRE(r.code == 0);
  const auto thr = otsense::read_results_json(dir / "thr" / "indices.json");
  REQUIRE(thr.estimate.inputs.size() == 1);
  CHECK(thr.estimate.inputs[0].index >= 0.0);
  CHECK(thr.estimate.inputs[0].index <= 0.1);
}

TEST_CASE("other subcommands") {
  const auto dir = scratch("subs");
  const auto csv = (dir / "g.csv").string();
  REQUIRE(run({"example", "--n", "300", "--seed", "1", "--out", csv}).code == 0);
  auto r = run({"wb", "--data", csv, "--outputs", "4-5", "--M", "5", "--boot", "--R", "20", "--ci-type", "basic",
                "--dummy", "normal", "--out", (dir / "wb").string()});
  REQUIRE(r.code == 0);
  const auto wb = otsense::read_results_json(dir / "wb" / "indices.json");
  CHECK(wb.estimate.method == "wass-bures");
  CHECK(wb.threshold.has_value());
  CHECK(wb.estimate.bootstrap->type == otsense::CiType::basic);
  CHECK(get(dir / "wb" / "indices.json").find("\"ci\"") != std::string::npos);

  r = run({"smap", "--data", csv, "--inputs", "1-3", "--outputs", "Y1,Y2", "--M", "5", "--out", (dir / "smap").string()});
  REQUIRE(r.code == 0);
  CHECK(line_count(dir / "smap" / "smap.csv") == 3);

  r = run({"separations", "--data", csv, "--outputs", "Y1,Y2", "--M", "5", "--ranking", "2", "--plot", "--out",
           (dir / "sep").string()});
  REQUIRE(r.code == 0);
  CHECK(line_count(dir / "sep" / "separations.csv") == 11);
  CHECK(fs::exists(dir / "sep" / "separations.svg"));

  r = run({"example", "--model", "climate", "--n", "20", "--out", (dir / "c.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(otsense::read_csv(dir / "c.csv").header.size() == 27);
}

TEST_CASE("byte-identical output across thread counts") {
  const auto dir = scratch("determinism");
  const auto csv = (dir / "g.csv").string();
  REQUIRE(run({"example", "--n", "500", "--seed", "3", "--out", csv}).code == 0);
  for (const char* solver : {"exact", "sinkhorn"}) {
    std::string first;
    for (const char* threads : {"1", "3"}) {
      const auto out = (dir / (std::string(solver) + threads)).string();
      REQUIRE(run({"indices", "--data", csv, "--outputs", "Y1,Y2", "--M", "10", "--solver", solver, "--epsilon", "0.05",
                   "--boot", "--R", "10", "--seed", "8", "--dummy", "uniform", "--threads", threads, "--out", out})
                  .code == 0);
      const auto text = get(fs::path(out) / "indices.json");
      if (first.empty()) first = text;
      else CHECK(text == first);
    }
  }
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(run({}).code == 1);
  CHECK(run({"indices", "--bogus"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  auto r = run({"indices", "--data", (dir / "none.csv").string(), "--outputs", "Y1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("cannot open") != std::string::npos);
  CHECK(r.err.find('\n') == r.err.size() - 1);

  std::ofstream(dir / "bad.csv") << "a,b\n1,x\n";
  r = run({"indices", "--data", (dir / "bad.csv").string(), "--outputs", "b"});
  CHECK(r.code == 2);
  CHECK(r.err.find("non-numeric at row 2, column b") != std::string::npos);

  std::ofstream(dir / "flat.csv") << "a,b\n1,1\n1,2\n1,3\n1,4\n";
  CHECK(run({"indices", "--data", (dir / "flat.csv").string(), "--outputs", "b", "--M", "2"}).code == 2);
  std::ofstream(dir / "ok.csv") << "a,b\n1,1\n2,2\n3,3\n4,5\n";
  CHECK(run({"indices", "--data", (dir / "ok.csv").string(), "--outputs", "b", "--solver", "simplex"}).code == 1);
  CHECK(run({"indices", "--data", (dir / "ok.csv").string(), "--outputs", "c"}).code == 2);

  // a tiny epsilon underflows the plain kernel on a wide output range
  std::ofstream wide(dir / "wide.csv");
  wide << "a,b\n";
  for (int i = 0; i < 40; ++i) wide << i << "," << 1000.0 * i << "\n";
  wide.close();
  r = run({"indices", "--data", (dir / "wide.csv").string(), "--outputs", "b", "--M", "4", "--solver", "sinkhorn",
           "--epsilon", "1e-5", "--out", (dir / "wide").string()});
  CHECK(r.code == 3);
}

}  // TEST_SUITE
