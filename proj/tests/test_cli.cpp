#include <doctest.h>

#include "cli.hpp"
#include "cliffop/errors.hpp"

using namespace cliffop;
using cliffop::cli::ConfigError;
using cliffop::cli::RunConfig;

namespace {

RunConfig config(const char* text) { return RunConfig::from_json(Json::parse(text)); }

Json run_stripped(const char* command, const RunConfig& c) { return cli::strip_timing(cli::run(command, c).report); }

bool has_report(const Json& report, const std::string& name, const std::string& role) {
  for (const auto& r : report["reports"]) {
    if (r["name"] == name && r["role"] == role) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("verify-identities is deterministic and passes at the default tolerance") {
  const RunConfig c = config(R"J({"n": 3, "seed": 42})J");
  const auto a = cli::run("verify-identities", c);
  const auto b = cli::run("verify-identities", c);
  CHECK(a.exit_code == 0);
  CHECK(a.report["pass"] == true);
  CHECK(cli::strip_timing(a.report).dump() == cli::strip_timing(b.report).dump());
  for (const auto& r : a.report["reports"]) CHECK(r["sup_norm"].get<double>() <= 1e-9);

  const auto other = cli::run("verify-identities", config(R"J({"n": 3, "seed": 43})J"));
  CHECK(cli::strip_timing(other.report).dump() != cli::strip_timing(a.report).dump());
}

TEST_CASE("verify-identities across dimensions") {
  for (int n = 1; n <= 6; ++n) {
    RunConfig c;
    c.n = n;
    c.params["trials"] = 5;
    CHECK_MESSAGE(cli::run("verify-identities", c).exit_code == 0, "n = " << n);
  }
}

TEST_CASE("config echo re-runs identically") {
  const RunConfig c = config(
      R"J({"n": 2, "fields": {"f": {"e1": "1"}, "v": "-1", "phi": "1"}, "lambda": 1, "grid": {"samples": 5}, "tolerance": {"override": 1e-10}})J");
  const Json first = run_stripped("decompose", c);
  const RunConfig echoed = RunConfig::from_json(first["config"]);
  CHECK(echoed.to_json() == c.to_json());
  CHECK(run_stripped("decompose", echoed).dump() == first.dump());
}

TEST_CASE("decompose worked example") {
  const auto out =
      cli::run("decompose", config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "v": "-1", "phi": "1"}, "lambda": 1})J"));
  CHECK(out.exit_code == 0);
  const Json& r = out.report["results"];
  CHECK(r["mode"] == "full");
  const Signature sig(2);
  const Complex i(0.0, 1.0);
  const Multivector half_plus = 0.5 * (Multivector::scalar(sig, 1.0) + i * Multivector::basis(sig, 2));
  const Multivector half_minus = 0.5 * (Multivector::scalar(sig, 1.0) - i * Multivector::basis(sig, 2));
  CHECK(parse_multivector(r["g_plus"]["value_at_probe"].get<std::string>(), sig) == half_plus);
  CHECK(parse_multivector(r["g_minus"]["value_at_probe"].get<std::string>(), sig) == half_minus);
  CHECK(r["reassembly_residual"] == 0.0);
  CHECK(has_report(out.report, "riccati(f)", "precondition"));
  CHECK(has_report(out.report, "kernel(g_plus)", "conclusion"));
}

TEST_CASE("exit codes") {
  SUBCASE("numerical failure is exit 1 with the reports kept") {
    // phi is an eigenfunction for lambda = 0.8, not 2
    const auto out =
        cli::run("vector-transform",
                 config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "v": "-1", "phi": "exp(0.6*x2)"}, "lambda": 2})J"));
    CHECK(out.exit_code == 1);
    CHECK(out.report["pass"] == false);
    CHECK(out.report["error"]["kind"] == "precondition");
    CHECK(has_report(out.report, "schrodinger(phi)", "precondition"));
  }
  SUBCASE("blow-up") {
    const auto out = cli::run("riccati-separable", config(R"J({"n": 1, "v_list": ["1"], "intervals": [[0, 2]]})J"));
    CHECK(out.exit_code == 1);
    CHECK(out.report["error"]["kind"] == "blow_up");
    const double x = out.report["error"]["location"].get<double>();
    CHECK(x > 1.4);
    CHECK(x < 1.58);
  }
  SUBCASE("family gap failing its margin") {
    const auto out = cli::run("family-gap-demo", config(R"J({"n": 3, "margin": 1000})J"));
    CHECK(out.exit_code == 1);
    CHECK(out.report["results"]["family_gap"]["pass"] == false);
  }
  SUBCASE("passing commands") {
    CHECK(cli::run("riccati-check", config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "v": "-1"}})J")).exit_code == 0);
    CHECK(cli::run("riccati-check", config(R"J({"n": 2, "fields": {"phi": "exp(x1)*cos(x2) + 3"}})J")).exit_code == 0);
    CHECK(cli::run("euler-shift", config(R"J({"n": 2, "fields": {"h": {"e1": "1"}, "v": "-1", "phi": "exp(-2*x1)"}})J"))
              .exit_code == 0);
    CHECK(cli::run("euler-combine", config(R"J({"n": 2, "fields": {"phi1": "x1", "phi2": "x2", "v": "-1"}, "K": 2})J"))
              .exit_code == 0);
    CHECK(cli::run("remark51-demo", config(R"J({"n": 3})J")).exit_code == 0);
    CHECK(cli::run("riccati-separable", config(R"J({"n": 3, "v_list": ["-1", "-1", "-1"]})J")).exit_code == 0);
    CHECK(cli::run("darboux", config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "g": "1"}, "lambda": 1})J")).exit_code ==
          0);
    CHECK(
        cli::run("vector-transform",
                 config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "v": "-1", "phi": "exp(0.6*x2)"}, "lambda": 0.8})J"))
            .exit_code == 0);
    CHECK(cli::run("prop64",
                   config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "G": "exp(0.6*x2)"}, "k": 0, "lambda": 0.8})J"))
              .exit_code == 0);
    CHECK(
        cli::run(
            "decompose",
            config(
                R"J({"n": 3, "mode": "last_axis", "fields": {"f": {"e1": "1"}, "v": "-1", "phi": "1"}, "lambda": 1})J"))
            .exit_code == 0);
    CHECK(cli::run("decompose-cor72", config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "phi": "1"}, "lambda": 1})J"))
              .exit_code == 0);
  }
  SUBCASE("config errors") {
    CHECK_THROWS_AS(config(R"J({"n": 2, "bogus": 1})J"), ConfigError);
    CHECK_THROWS_AS(config(R"J({"n": 2, "grid": {"sample": 3}})J"), ConfigError);
    CHECK_THROWS_AS(config(R"J({"n": "two"})J"), ConfigError);
    CHECK_THROWS_AS(config(R"J({"n": 0})J"), ConfigError);
    CHECK_THROWS_AS(config(R"J({"mode": "diagonal"})J"), ConfigError);
    CHECK_THROWS_AS(cli::run("no-such-command", RunConfig{}), ConfigError);
    CHECK_THROWS_AS(cli::run("darboux", config(R"J({"n": 2, "fields": {"f": {"e1": "1"}}, "lambda": 1})J")),
                    ConfigError);
    CHECK_THROWS_AS(cli::run("darboux", config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "g": "1"}, "lambda": 0})J")),
                    ConfigError);
    CHECK_THROWS_AS(
        cli::run(
            "decompose",
            config(R"J({"n": 4, "mode": "full", "fields": {"f": {"e1": "1"}, "v": "-1", "phi": "1"}, "lambda": 1})J")),
        ConfigError);
  }
  SUBCASE("malformed expression reports its offset") {
    try {
      config(R"J({"n": 2, "fields": {"f": {"e1": "1 + x9"}}})J");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 4);
    }
  }
}

TEST_CASE("aliases run the same command") {
  const RunConfig c =
      config(R"J({"n": 2, "fields": {"f": {"e1": "1"}, "v": "-1", "phi": "exp(0.6*x2)"}, "lambda": 0.8})J");
  Json a = run_stripped("prop62", c);
  Json b = run_stripped("vector-transform", c);
  CHECK(a["command"] == "prop62");
  a.erase("command");
  b.erase("command");
  CHECK(a == b);
}

TEST_CASE("claims cover every command") {
  const char* expected[] = {"verify-identities",
                            "riccati-check",
                            "riccati-separable",
                            "euler-shift",
                            "euler-combine",
                            "remark51-demo",
                            "darboux",
                            "prop62",
                            "prop63",
                            "prop64",
                            "decompose",
                            "decompose-cor72"};
  for (const char* name : expected) {
    bool found = false;
    for (const auto& c : cli::commands()) found |= (c.name == name || c.alias == name) && !c.claim.empty();
    CHECK_MESSAGE(found, name);
  }
}
