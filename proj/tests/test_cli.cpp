#include "cli.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace reflect;
using reflect::cli::run_cli;

namespace {

struct Run {
  cli::CommandResult result;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.result = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  const Run r = run(args);
  return Json::parse(r.out);
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "reflect_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("kappa prints the condition number") {
  const Run r = run({"kappa", "H3"});
  CHECK(r.result.exit_code == 0);
  CHECK(r.out.find("6.3137") != std::string::npos);

  const Json j = run_json({"kappa", "F4 x T1"});
  CHECK(j.at("status") == "ok");
  CHECK(std::abs(j.at("result").at("kappa").get<double>() - 7.5957541127) < 1e-9);
  CHECK(j.at("result").at("argmax_component") == 0);
}

TEST_CASE("kappa accepts JSON and file group arguments") {
  const Json a = run_json({"kappa", R"({"components": [{"family": "E", "rank": 6}]})"});
  CHECK(std::abs(a.at("result").at("kappa").get<double>() - 7.5957541127) < 1e-9);
  const auto path = scratch("group.json");
  std::ofstream(path) << R"({"components": [{"family": "I", "order": 4}]})";
  const Json b = run_json({"kappa", "@" + path.string()});
  CHECK(b.at("result").at("kappa").get<double>() == doctest::Approx(1.0 + std::numbers::sqrt2));
}

TEST_CASE("usage errors exit with 2") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"kappa", "Q3"},
           {"kappa", "I2"},
           {"kappa"},
           {"nonsense"},
           {"maxfilter", "--group", "A2", "--x", "1,0", "--y", "1,0,0"},
           {"maxfilter", "--group", "A2", "--x", "1,zz,0", "--y", "1,0,0"},
           {"maxfilter", "--group", "A2", "--permutation", "3", "--x", "1,0,0", "--y", "1,0,0"},
           {"sweep", "A", "--ells", "10:1"},
           {"sweep", "E", "--ells", "10"},
           {"verify", "bogus"},
           {"enumerate", "A2", "--format", "xml"}}) {
    CAPTURE(args.front());
    const Run r = run(args);
    CHECK(r.result.exit_code == 2);
    CHECK(r.result.status == cli::Status::Error);
    CHECK_FALSE(r.err.empty());
  }
  const Json j = run_json({"kappa", "Q3"});
  CHECK(j.at("status") == "error");
  CHECK(j.at("exit_code") == 2);
  CHECK(j.at("error").get<std::string>().find("position 0") != std::string::npos);
}

TEST_CASE("computational errors exit with 1") {
  CHECK(run({"kappa", "M(3,3,3)"}).result.exit_code == 1);
  CHECK(run({"--cap", "10", "maxfilter", "--group", "B3", "--x", "1,2,3", "--y", "3,2,1", "--backend", "brute"})
            .result.exit_code == 1);
  const Json j = run_json({"--cap", "10", "enumerate", "B3"});
  CHECK(j.at("status") == "ok");
  CHECK(j.at("result").at("overflow") == true);
}

TEST_CASE("maxfilter backends agree") {
  const Json j = run_json({"maxfilter", "--group", "I4", "--x", "1,2", "--y", "-2,0.5", "--backend", "both"});
  const auto& values = j.at("result").at("values");
  CHECK(values.at("chamber").get<double>() == doctest::Approx(values.at("brute").get<double>()).epsilon(1e-12));

  const Json p = run_json({"maxfilter", "--permutation", "4", "--x", "3,1,4,1", "--y", "5,9,2,6"});
  CHECK(p.at("result").at("values").at("chamber").get<double>() == doctest::Approx(61.0));
  CHECK(p.at("result").at("rep_x").dump() == "[4.0,3.0,1.0,1.0]");
}

TEST_CASE("maxfilter reads vectors from files") {
  const auto x = scratch("x.csv");
  const auto y = scratch("y.csv");
  std::ofstream(x) << "1\n0\n-2\n";
  std::ofstream(y) << "0.5, 1\n1\n";
  const Json j = run_json({"maxfilter", "--group", "A3", "--x-file", x.string(), "--y-file", y.string()});
  CHECK(j.at("status") == "ok");
  CHECK(cli::read_vector_file(y.string()).size() == 3);
  CHECK_THROWS_AS(cli::read_vector_file(scratch("missing.csv").string()), UsageError);
  CHECK(cli::parse_vector("1, -2 3.5").size() == 3);
  CHECK_THROWS_AS(cli::parse_vector("1,abc"), ParseError);
}

TEST_CASE("verify suites pass") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"verify", "spectral", "--group", "B5"},
           {"verify", "duality", "--group", "E6", "--samples", "5000"},
           {"verify", "recursion", "--family", "D", "--max-ell", "20"},
           {"verify", "backends", "--group", "H3", "--pairs", "20"},
           {"verify", "isometry", "--group", "A3", "--pairs", "20"},
           {"verify", "asymptotic", "--family", "A", "--ells", "100:1600:x2"}}) {
    CAPTURE(args[1]);
    const Json j = run_json(args);
    CHECK(j.at("status") == "ok");
    CHECK(j.at("result").at("pass") == true);
  }
}

TEST_CASE("verify with default atom lists") {
  const Json j = run_json({"verify", "spectral"});
  CHECK(j.at("result").at("pass") == true);
  CHECK(j.at("result").at("rows").size() > 30);
}

TEST_CASE("sweep output") {
  const Run r = run({"sweep", "A", "--ells", "3:5", "--csv"});
  CHECK(r.result.exit_code == 0);
  CHECK(r.out.rfind("ell,kappa,kappa_over_ell\n3,", 0) == 0);

  const auto path = scratch("sweep.csv");
  const Json j = run_json({"sweep", "B", "--ells", "100:400:x2", "--out", path.string()});
  CHECK(j.at("result").at("points").size() == 3);
  CHECK(slurp(path).rfind("ell,kappa,kappa_over_ell\n100,", 0) == 0);
}

TEST_CASE("enumerate dumps elements") {
  const auto path = scratch("b3.bin");
  const Json j = run_json({"enumerate", "B3", "--out", path.string()});
  CHECK(j.at("result").at("order") == 48);
  CHECK(std::filesystem::file_size(path) == 48u * 9u * 8u);
}

TEST_CASE("templates with a Lipschitz probe") {
  const auto path = scratch("quotients.csv");
  const Json j = run_json({"--seed", "5", "templates", "I4", "--lipschitz", "500", "--quotients-out", path.string()});
  const auto& lip = j.at("result").at("lipschitz");
  CHECK(lip.at("upper").get<double>() / lip.at("lower").get<double>() ==
        doctest::Approx(1.0 + std::numbers::sqrt2).epsilon(0.01));
  CHECK(slurp(path).rfind("index,kind,quotient\n", 0) == 0);
}

TEST_CASE("seeded output is byte-identical") {
  const std::vector<std::string> args = {"--json", "--seed", "17", "templates", "B3", "--lipschitz", "300"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> cert = {"--json", "--seed", "3", "verify", "duality", "--group", "H3",
                                         "--samples", "2000"};
  CHECK(run(cert).out == run(cert).out);
}

TEST_CASE("tolerance report and help") {
  const Json j = run_json({"--tol-report", "kappa", "A2"});
  CHECK(j.at("result").contains("tolerances"));
  const Run h = run({"--help"});
  CHECK(h.result.exit_code == 0);
  CHECK(h.out.find("REFLECT_MAXFILTER_THREADS") != std::string::npos);
}

}  // TEST_SUITE
