#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "rankforge/io.hpp"
#include "rankforge/matrix.hpp"

using namespace rankforge;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string capture =
      "/tmp/rankforge_cli_capture_" + std::to_string(counter++) + ".txt";
  const std::string command =
      std::string(RANKFORGE_CLI_PATH) + " " + args + " >" + capture + " 2>&1";
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string golden(const std::string& name) {
  return std::string(RANKFORGE_GOLDEN_DIR) + "/" + name;
}

// Timings and float residual magnitudes vary run to run; the schema and the
// pass flags must not.
void normalize_report(json& doc) {
  for (auto& entry : doc.at("entries")) {
    entry["timing_ms"] = 0.0;
    for (auto& residual : entry.at("residuals")) residual["value"] = 0.0;
  }
  for (auto& [name, check] : doc.at("factor_checks").items())
    for (auto& residual : check.at("residuals")) residual["value"] = 0.0;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("exit codes across the golden corpus", "[cli]") {
  for (const char* name :
       {"zero_3x3.csv", "identity_3.mtx", "outer_rank1.csv",
        "rational_1x2.csv", "wide_2x3.mtx", "coord_3x3.mtx"}) {
    auto r = run_cli("rank " + golden(name));
    INFO(name << "\n" << r.output);
    CHECK(r.exit_code == 0);
  }
  for (const char* name : {"bad_header.mtx", "ragged.csv",
                           "dims_mismatch.mtx", "bad_token.csv"}) {
    auto r = run_cli("rank " + golden(name));
    INFO(name << "\n" << r.output);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("error:") != std::string::npos);
  }
  CHECK(run_cli("nosuchcommand " + golden("identity_3.mtx")).exit_code == 2);
  CHECK(run_cli("rank").exit_code == 2);
}

TEST_CASE("verify matches the golden json reports", "[cli]") {
  auto exact_run = run_cli("verify " + golden("identity_3.mtx") + " --json");
  REQUIRE(exact_run.exit_code == 0);
  json exact_doc = json::parse(exact_run.output);
  normalize_report(exact_doc);
  CHECK(exact_doc == load_json(golden("verify_identity_exact.json")));

  auto float_run =
      run_cli("verify " + golden("outer_rank1.csv") + " --mode float --json");
  REQUIRE(float_run.exit_code == 0);
  json float_doc = json::parse(float_run.output);
  normalize_report(float_doc);
  CHECK(float_doc == load_json(golden("verify_outer_float.json")));

  auto text_run = run_cli("verify " + golden("zero_3x3.csv"));
  CHECK(text_run.exit_code == 0);
  CHECK(text_run.output.find("overall pass") != std::string::npos);
}

TEST_CASE("factor files round-trip through the parser", "[cli]") {
  auto r = run_cli("qr " + golden("outer_rank1.csv") + " --out /tmp/rf_cli_qr");
  REQUIRE(r.exit_code == 0);
  auto q = parse_path("/tmp/rf_cli_qr_Q.mtx").to_matrix<Rational>();
  auto rr = parse_path("/tmp/rf_cli_qr_R.mtx").to_matrix<Rational>();
  CHECK(matmul(q, rr) == Matrix<Rational>{{3, 4}, {6, 8}});

  auto cur = run_cli("cur " + golden("identity_3.mtx") + " --out /tmp/rf_cli_cur");
  REQUIRE(cur.exit_code == 0);
  for (const char* suffix : {"_C", "_Uc", "_Rr"})
    CHECK(parse_path("/tmp/rf_cli_cur" + std::string(suffix) + ".mtx")
              .to_matrix<Rational>() == Matrix<Rational>::identity(3));

  auto rref_run =
      run_cli("rref " + golden("coord_3x3.mtx") + " --out /tmp/rf_cli_rref");
  REQUIRE(rref_run.exit_code == 0);
  auto a = parse_path(golden("coord_3x3.mtx")).to_matrix<Rational>();
  auto r0 = parse_path("/tmp/rf_cli_rref_R0.mtx").to_matrix<Rational>();
  auto e = parse_path("/tmp/rf_cli_rref_E.mtx").to_matrix<Rational>();
  CHECK(matmul(e, a) == r0);
}

TEST_CASE("shape-directed commands on a wide input", "[cli]") {
  CHECK(run_cli("lq " + golden("wide_2x3.mtx") + " --out /tmp/rf_cli_lq")
            .exit_code == 0);
  auto r = run_cli("qr " + golden("wide_2x3.mtx") + " --out /tmp/rf_cli_badqr");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("lq") != std::string::npos);
}

TEST_CASE("split writes both components", "[cli]") {
  {
    std::ofstream m("/tmp/rf_cli_split_a.csv");
    m << "1,2\n2,4\n";
    std::ofstream x("/tmp/rf_cli_split_x.csv");
    x << "1\n0\n";
  }
  auto r = run_cli(
      "split /tmp/rf_cli_split_a.csv /tmp/rf_cli_split_x.csv --out /tmp/rf_cli_split");
  REQUIRE(r.exit_code == 0);
  auto xr = parse_path("/tmp/rf_cli_split_XR.mtx").to_matrix<Rational>();
  auto xn = parse_path("/tmp/rf_cli_split_XN.mtx").to_matrix<Rational>();
  CHECK(xr == Matrix<Rational>{{Rational(1) / 5}, {Rational(2) / 5}});
  CHECK(xr + xn == Matrix<Rational>{{1}, {0}});
}

TEST_CASE("tolerance flag and environment fallback", "[cli]") {
  const std::string target = golden("outer_rank1.csv");
  CHECK(run_cli("rank " + target + " --mode float --tol 1e-8").exit_code == 0);
  CHECK(run_cli("rank " + target + " --tol 1e-8").exit_code == 2);  // exact

  // The env var is only consulted in float mode without --tol.
  auto ok = run_cli("rank " + target + " --mode float");
  CHECK(ok.exit_code == 0);
  const std::string env_cmd = "env RANKFORGE_TOL=1e-6 " +
                              std::string(RANKFORGE_CLI_PATH) + " rank " +
                              target + " --mode float";
  CHECK(std::system((env_cmd + " >/dev/null 2>&1").c_str()) == 0);
  const std::string bad_env = "env RANKFORGE_TOL=abc " +
                              std::string(RANKFORGE_CLI_PATH) + " rank " +
                              target + " --mode float >/dev/null 2>&1";
  const int status = std::system(bad_env.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}

TEST_CASE("json summaries for factor commands", "[cli]") {
  auto r = run_cli("subspaces " + golden("outer_rank1.csv") +
                   " --out /tmp/rf_cli_sub --json");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.output);
  CHECK(doc.at("command") == "subspaces");
  CHECK(doc.at("mode") == "exact");
  CHECK(doc.at("rank") == 1);
  CHECK(doc.at("pass") == true);
  CHECK(doc.at("files").size() == 4);

  auto rank_doc =
      json::parse(run_cli("rank " + golden("identity_3.mtx") + " --json").output);
  CHECK(rank_doc.at("row_rank") == 3);
  CHECK(rank_doc.at("col_rank") == 3);
}
