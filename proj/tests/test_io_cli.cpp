#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fsos/io.hpp"
#include "helpers.hpp"

using namespace fsos;

namespace {

std::string fixture(const std::string& name) {
  return std::string(FSOS_FIXTURE_DIR) + "/" + name;
}

std::string temp_path(const std::string& name) {
  return std::string("io_cli_") + name;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(FSOS_CLI_PATH) + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("function files roundtrip in both representations") {
  testutil::TestRng rng(109);
  GroupSpec spec({4, 3});
  // sparse writer path
  FourierExpansion e(spec);
  e.set(static_cast<index_t>(0), cplx(1.5, 0));
  e.set(static_cast<index_t>(5), cplx(-0.25, 0.75));
  json j = expansion_to_json(e);
  CHECK(j.contains("coeffs"));
  LoadedFunction lf = function_from_json(j);
  REQUIRE(lf.coeffs);
  for (const auto& [chi, c] : e.entries()) CHECK(std::abs(lf.coeffs->coeff(chi) - c) < 1e-15);

  // dense writer path: |supp| >= |G|/4 switches to values
  GroupFunction f = testutil::random_complex_function(spec, rng);
  json dense = function_to_json(f);
  CHECK(dense.contains("values"));
  LoadedFunction lf2 = function_from_json(dense);
  REQUIRE(lf2.values);
  for (index_t x = 0; x < spec.order(); ++x)
    CHECK(std::abs(lf2.values->values()[static_cast<std::size_t>(x)] -
                   f.values()[static_cast<std::size_t>(x)]) < 1e-15);
}

TEST_CASE("certificate files roundtrip") {
  GroupSpec z6 = GroupSpec::cyclic(6);
  FsosCertificate cert;
  cert.spec = z6;
  FourierExpansion g(z6);
  g.set(static_cast<index_t>(0), cplx(0.5, 0));
  g.set(static_cast<index_t>(1), cplx(-0.5, 0.25));
  cert.squares = {g};
  cert.support = squares_support(z6, cert.squares);
  cert.reported_error = 1.25e-11;
  json j = certificate_to_json(cert);
  FsosCertificate back = certificate_from_json(j);
  CHECK(back.spec == z6);
  REQUIRE(back.squares.size() == 1);
  for (const auto& [chi, c] : g.entries()) CHECK(std::abs(back.squares[0].coeff(chi) - c) < 1e-15);
  CHECK(back.reported_error == cert.reported_error);
}

TEST_CASE("malformed inputs raise argument errors") {
  CHECK_THROWS_AS(group_from_json(json::array()), ArgumentError);
  json bad;
  bad["group"] = {6};
  CHECK_THROWS_AS(function_from_json(bad), ArgumentError);
  bad["values"] = {1, 2};  // wrong length
  CHECK_THROWS_AS(function_from_json(bad), ArgumentError);
}

TEST_CASE("cli: certify, verify and exit codes") {
  std::string cert = temp_path("z6_cert.json");
  REQUIRE(run_cli("certify --input " + fixture("z6.json") + " --output " + cert) == 0);
  CHECK(run_cli("verify --input " + fixture("z6.json") + " --cert " + cert) == 0);

  // corrupt one coefficient: the verifier must reject with exit 1
  json j = load_json_file(cert);
  j["squares"][0][0]["re"] = j["squares"][0][0]["re"].get<double>() + 0.001;
  save_json_file(temp_path("z6_bad.json"), j);
  CHECK(run_cli("verify --input " + fixture("z6.json") + " --cert " + temp_path("z6_bad.json")) ==
        1);

  // malformed input: exit 2
  CHECK(run_cli("verify --input no_such_file.json --cert " + cert) == 2);
  CHECK(run_cli("certify --input " + fixture("z6.json") + " --group 5,5") == 2);
}

TEST_CASE("cli: byte-identical outputs for identical inputs and flags") {
  std::string a = temp_path("det_a.json"), b = temp_path("det_b.json");
  REQUIRE(run_cli("certify --input " + fixture("z6.json") + " --output " + a) == 0);
  REQUIRE(run_cli("certify --input " + fixture("z6.json") + " --output " + b) == 0);
  CHECK(slurp(a) == slurp(b));

  REQUIRE(run_cli("transform --input " + fixture("z6.json") + " --output " + a) == 0);
  REQUIRE(run_cli("transform --input " + fixture("z6.json") + " --output " + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("cli: counterexample path exits 1") {
  json j;
  j["group"] = {4};
  j["values"] = {{1.0, 0.0}, {-0.5, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
  save_json_file(temp_path("neg.json"), j);
  CHECK(run_cli("certify --input " + temp_path("neg.json")) == 1);
  CHECK(slurp("cli_stdout.txt").find("counterexample") != std::string::npos);
}

TEST_CASE("cli: bench smoke run is deterministic apart from timing") {
  std::string a = temp_path("bench_a.csv"), b = temp_path("bench_b.csv");
  std::string flags = "bench --experiment deg --N 64 --deg 4 --trials 2 --seed 9 --output ";
  REQUIRE(run_cli(flags + a) == 0);
  REQUIRE(run_cli(flags + b) == 0);
  auto strip_seconds = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
      // group,trial,sparsity,seconds,error -> blank the seconds column
      std::size_t c3 = line.rfind(',');
      std::size_t c2 = line.rfind(',', c3 - 1);
      out += line.substr(0, c2) + line.substr(c3) + "\n";
    }
    return out;
  };
  CHECK(strip_seconds(slurp(a)) == strip_seconds(slurp(b)));
}

TEST_CASE("cli: pigeonhole, bound, sohs, structure smoke") {
  CHECK(run_cli("pigeonhole --n 3 --output " + temp_path("ph3.json")) == 0);
  CHECK(run_cli("bound --kind parrilo --N 1024 --d 8") == 0);
  CHECK(slurp("cli_stdout.txt").find("168") != std::string::npos);

  std::string cert = temp_path("toy_cert.json");
  json f;
  f["group"] = {6};
  f["coeffs"] = {{{"chi", {0}}, {"re", 1.0}, {"im", 0.0}},
                 {{"chi", {1}}, {"re", 0.5}, {"im", 0.0}},
                 {{"chi", {5}}, {"re", 0.5}, {"im", 0.0}}};
  save_json_file(temp_path("toy.json"), f);
  REQUIRE(run_cli("certify --input " + temp_path("toy.json") + " --output " + cert) == 0);
  CHECK(run_cli("sohs --cert " + cert) == 0);
  CHECK(run_cli("structure --input " + temp_path("toy.json")) == 0);
}
