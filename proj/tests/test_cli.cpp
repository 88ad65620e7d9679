#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
  const char* cli = std::getenv("TESTEL_CLI");
  REQUIRE(cli != nullptr);
  std::string cmd;
  if (!stdin_data.empty()) {
    std::string tmp = "/tmp/testel_cli_stdin.json";
    FILE* f = std::fopen(tmp.c_str(), "w");
    REQUIRE(f);
    std::fwrite(stdin_data.data(), 1, stdin_data.size(), f);
    std::fclose(f);
    cmd = std::string(cli) + " " + args + " < " + tmp + " 2>/dev/null";
  } else {
    cmd = std::string(cli) + " " + args + " 2>/dev/null";
  }
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), out};
}

void check_certificate_schema(const nlohmann::json& j) {
  REQUIRE(j.contains("input"));
  REQUIRE(j.contains("context"));
  REQUIRE(j["context"].contains("kind"));
  REQUIRE(j["context"].contains("rank"));
  REQUIRE(j.contains("verdict"));
  REQUIRE(j.contains("reasons"));
  for (const auto& r : j["reasons"]) {
    REQUIRE(r.contains("rule"));
    REQUIRE(r.contains("paper_ref"));
    REQUIRE(r.contains("details"));
  }
}

}  // namespace

TEST_CASE("exit codes follow the verdict") {
  CHECK(run_cli("certify --group free-pro-p --rank 2 -p 3 \"[x1,x2]\"")
            .exit_code == 0);
  CHECK(run_cli("certify --group free-discrete --rank 2 \"x1^2*x2^3\"")
            .exit_code == 1);
  CHECK(run_cli("certify --group free-pro-p --rank 3 -p 2 \"[x1*x2,x2*x3]\"")
            .exit_code == 2);
  CHECK(run_cli("oracle --catalog heis:3 --check test-retract").exit_code == 0);
  CHECK(run_cli("almost-primitive --rank 2 -p 2 \"[x1,x2]\"").exit_code == 0);
  CHECK(run_cli("almost-primitive --rank 2 -p 2 \"x1^2\"").exit_code == 1);
  CHECK(run_cli("demushkin check -n 4 -p 3 -k 3 --alphas 3,3,1").exit_code == 0);
  CHECK(run_cli("demushkin check -n 4 -p 3 -k 3 --alphas 3,1,1").exit_code == 1);

  // Usage errors.
  CHECK(run_cli("certify --rank 2 -p").exit_code == 64);
  CHECK(run_cli("nonsense").exit_code == 64);
  CHECK(run_cli("certify --group free-pro-p --rank 2 -p 3 \"x9\"").exit_code ==
        64);
  CHECK(run_cli("certify --group free-pro-p --rank 2 \"x1\"").exit_code == 64);
}

TEST_CASE("JSON output validates against the certificate schema") {
  const std::vector<std::string> invocations = {
      "certify --group free-pro-p --rank 2 -p 3 --json \"[x1,x2]\"",
      "certify --group free-pro-p --rank 2 -p 2 --json \"x1\"",
      "certify --group free-discrete --rank 2 --json \"x1^2*x2^3\"",
      "certify --group free-discrete --rank 4 --json \"[x1,x2]*[x3,x4]\"",
      "certify --group free-pro-p --rank 3 -p 2 --json \"[x1*x2,x2*x3]\"",
      "almost-primitive --rank 2 -p 2 --json \"x1^2*x2^2\"",
      "arrange certify \"comm(comm(),comm())\" -p 2 --json",
      "surface certify -n 2 -p 3 -k 3 --exponents 3,3,1 --word "
      "\"[[x1,x2],x3]\" --json",
  };
  for (const auto& inv : invocations) {
    auto res = run_cli(inv);
    CAPTURE(inv);
    auto j = nlohmann::json::parse(res.out);
    check_certificate_schema(j);
  }
}

TEST_CASE("certify --json round trips through replay") {
  const std::vector<std::string> invocations = {
      "certify --group free-pro-p --rank 2 -p 3 --json \"[x1,x2]\"",
      "certify --group free-pro-p --rank 2 -p 2 --json \"x1*x2^2\"",
      "certify --group free-discrete --rank 2 --json \"x1^3*x2^6\"",
      "certify --group free-discrete --rank 2 --json \"x1^2*x2^3\"",
      "certify --group free-pro-p --rank 4 -p 3 --json \"x1^3*x2^3*[x3,x4]\"",
      "almost-primitive --rank 2 -p 2 --json \"[x1,x2]\"",
      "surface certify -n 2 -p 3 -k 3 --exponents 3,3,1 --word "
      "\"[[x1,x2],x3]\" --json",
  };
  for (const auto& inv : invocations) {
    auto cert = run_cli(inv);
    auto verdict =
        nlohmann::json::parse(cert.out)["verdict"].get<std::string>();
    auto replayed = run_cli("replay", cert.out);
    CAPTURE(inv);
    CHECK(replayed.exit_code == cert.exit_code);
    CHECK(replayed.out.find(verdict) != std::string::npos);
  }
}

TEST_CASE("subcommand surface") {
  CHECK(run_cli("arrange parse \"comm(pp(2,2),comm())\"").out ==
        "comm(pp(2,2),comm())\n");
  CHECK(run_cli("arrange expand \"comm()\"").out.find("x1*x2*x1^-1*x2^-1") !=
        std::string::npos);
  CHECK(run_cli("demushkin relator --case II -p 2 -d 3 -q 2 -f 2").out ==
        "<x1,x2,x3 | x1^2*x2^5*x3*x2^-1*x3^-1>\n");
  auto densify = run_cli("densify --group free-pro-p --rank 2 -p 2 --level 2 "
                         "--json \"x1^4\"");
  CHECK(densify.exit_code == 0);
  auto j = nlohmann::json::parse(densify.out);
  CHECK(j["t"] == "x1^4*x2^8");
  check_certificate_schema(j["certificate"]);
}
