#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chaos_bounds/cli.hpp"
#include "json.hpp"

using namespace chaos_bounds;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;

  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("chaos_bounds_" + name);
}

}  // namespace

TEST_CASE("bounds commands") {
  const auto hp = run({"bounds", "hawkes-poisson", "--lambda", "1", "--leb", "1e6", "--h", "0.5",
                       "--mark", "const:1"});
  REQUIRE(hp.code == kExitOk);
  CHECK(hp.json()["dw_bound"].get<double>() == doctest::Approx(0.064));
  CHECK(hp.json()["dk_bound"].get<double>() == doctest::Approx(0.2208444).epsilon(1e-6));

  const auto in = run({"bounds", "interference", "--lambda", "50", "--R", "1", "--alpha", "4",
                       "--power", "exp:1"});
  REQUIRE(in.code == kExitOk);
  CHECK(in.json()["dw_bound"].get<double>() == doctest::Approx(0.131932).epsilon(1e-5));

  const auto fc = run({"bounds", "first-chaos", "--m3", "0.1", "--m4", "100"});
  CHECK(fc.json()["vacuous"].get<bool>());

  const auto cp = run({"bounds", "compound", "--lambda", "1", "--leb", "1e4", "--offspring",
                       "poisson:0.5"});
  CHECK(cp.json()["dw_bound"].get<double>() == doctest::Approx(0.64));
}

TEST_CASE("domain errors exit with 2 and a one-line diagnostic") {
  const auto r = run({"bounds", "hawkes-binomial", "--lambda", "1", "--leb", "1e4", "--h", "2",
                      "--p", "0.6"});
  CHECK(r.code == kExitDomain);
  CHECK(r.out.empty());
  CHECK(r.err.find("sub-critical") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(run({"bounds", "interference", "--lambda", "50", "--alpha", "1"}).code == kExitDomain);
  CHECK(run({"moments", "gw", "--offspring", "poisson:2"}).code == kExitDomain);
  CHECK(run({"tail", "mdp-rate", "--a", "2", "--b", "1"}).code == kExitDomain);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"nonsense"}).code == kExitUsage);
  CHECK(run({"bounds", "hawkes-poisson", "--lambda", "1"}).code == kExitUsage);
  CHECK(run({"delta", "poisson", "--h", "abc", "--lambda-leb", "1"}).code == kExitUsage);
  CHECK(run({"verify", "moments", "--offspring", "poisson:0.5", "--seed", "12x"}).code ==
        kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("delta, tail and moments commands") {
  const auto d = run({"delta", "poisson", "--h", "0.5", "--lambda-leb", "1e4"});
  CHECK(d.json()["delta"].get<double>() == doctest::Approx(0.36027583).epsilon(1e-7));
  CHECK(d.json()["case"] == "(ii)");

  const auto b = run({"delta", "binomial", "--h", "2", "--p", "0.25", "--lambda-leb", "1e4"});
  CHECK(b.json()["delta"].get<double>() == doctest::Approx(0.7614800).epsilon(1e-4));

  const auto g = run({"delta", "mark-gamma", "--mark", "gauss:2"});
  CHECK(g.json()["gamma"].get<double>() == 0.5);
  CHECK(g.json()["check"]["holds"].get<bool>());
  CHECK(run({"delta", "mark-gamma", "--mark", "custom:1,1,1"}).code == kExitDomain);
  const auto custom = run({"delta", "mark-gamma", "--mark", "custom:1,1,8", "--gamma", "0",
                           "--m-max", "3"});
  CHECK(custom.json()["check"]["first_fail"] == 3);

  const auto m = run({"moments", "gw", "--offspring", "poisson:0.5", "--n", "4"});
  const auto moments = m.json()["moments"];
  const std::vector<double> expected{2, 8, 64, 832};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(moments[i].get<double>() == doctest::Approx(expected[i]).epsilon(1e-12));
  }

  const auto ins = run({"tail", "insurance", "--lambda", "1", "--h", "0.5", "--mu", "1", "--T",
                        "64", "--k", "2"});
  CHECK(ins.json()["bound"].get<double>() == doctest::Approx(0.7357589).epsilon(1e-7));
  CHECK(ins.json()["threshold"].get<double>() == 64.0);
  CHECK(run({"tail", "insurance", "--lambda", "1", "--h", "0.5", "--mu", "1", "--T", "64", "--k",
             "2", "--strict"})
            .code == kExitDomain);

  const auto bci = run({"tail", "bci", "--gamma", "0", "--delta", "100", "--x", "0,10"});
  CHECK(bci.json()["bounds"][0]["vacuous"].get<bool>());
  CHECK(bci.json()["bounds"][1]["bound"].get<double>() == doctest::Approx(7.453306e-6).epsilon(1e-6));

  const auto cu = run({"tail", "cumulant", "--offspring", "poisson:0.5", "--lambda-leb", "1e4"});
  CHECK(cu.json()["condition"]["all_pass"].get<bool>());
  CHECK(cu.json()["condition"]["per_m"].size() == 10);

  const auto iv = run({"tail", "interval", "--lambda", "1", "--h", "0.5", "--mu", "1", "--T",
                       "1e4", "--x", "10"});
  CHECK(iv.json()["prob_lower_bound"].get<double>() == doctest::Approx(0.99253121).epsilon(1e-8));

  CHECK(run({"tail", "nacc", "--gamma", "0", "--delta", "3"}).json()["upper"].get<double>() == 3.0);
  CHECK(run({"moments", "pmf", "--h", "0.5", "--k", "1"}).json()["pmf"].get<double>() ==
        doctest::Approx(std::exp(-0.5)));
  CHECK(run({"moments", "abel-plana", "--nu", "1", "--m", "2"}).json()["center"].get<double>() ==
        doctest::Approx(1.0));
  const double series =
      run({"moments", "series", "--h", "2", "--p", "0.25", "--m", "2"}).json()["value"].get<double>();
  const double exact = run({"moments", "gw", "--offspring", "binomial:2,0.25", "--n", "2"})
                           .json()["moments"][1]
                           .get<double>();
  CHECK(series == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("verify commands") {
  const auto m = run({"verify", "moments", "--offspring", "poisson:0.5", "--reps", "20000",
                      "--seed", "1"});
  CHECK(m.code == kExitOk);
  CHECK(m.json()["pass"].get<bool>());

  const auto g = run({"verify", "gauss", "--scenario", "compound-poisson", "--lambda-leb", "1e4",
                      "--reps", "2000", "--seed", "1"});
  CHECK(g.code == kExitOk);
  CHECK(g.json()["bounds"]["dk_bound"].get<double>() == doctest::Approx(0.04));

  CHECK(run({"verify", "gauss", "--scenario", "interference", "--alpha", "2", "--reps", "10"})
            .code == kExitDomain);
}

TEST_CASE("failed verifications exit with 3") {
  // A rare-jump compound Poisson window has far heavier standardized tails than a made-up
  // Gaussian-like concentration bound allows.
  const auto r = run({"verify", "bci", "--T", "0.01", "--gamma", "0", "--delta", "1e6",
                      "--x-grid", "9", "--reps", "100000", "--seed", "2"});
  CHECK(r.code == kExitVerification);
  CHECK_FALSE(r.json()["pass"].get<bool>());
}

TEST_CASE("verify output is byte-identical across worker counts") {
  const std::vector<std::string> base{"verify", "gauss", "--scenario", "hawkes", "--h", "0.5",
                                      "--T", "200", "--reps", "100", "--seed", "0x2a"};
  auto with_workers = [&](const char* w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w});
    return run(args);
  };
  const auto one = with_workers("1");
  CHECK(one.code == kExitOk);
  CHECK(with_workers("2").out == one.out);
  CHECK(with_workers("8").out == one.out);
  CHECK(one.json()["seed"] == 42);
}

TEST_CASE("seed sources") {
  const std::vector<std::string> base{"sample", "progeny", "--offspring", "poisson:0.5", "--reps",
                                      "20"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args).out;
  };
  CHECK(with({"--seed", "0x10"}) == with({"--seed", "16"}));
  CHECK(with({}) == with({"--seed", "0xC0FFEE"}));
  CHECK(with({"--seed", "1"}) != with({"--seed", "2"}));

  ::setenv("CHAOS_BOUNDS_SEED", "77", 1);
  const auto from_env = with({});
  const auto flag_wins = with({"--seed", "16"});
  ::unsetenv("CHAOS_BOUNDS_SEED");
  CHECK(from_env == with({"--seed", "77"}));
  CHECK(flag_wins == with({"--seed", "16"}));
}

TEST_CASE("sample commands write CSV") {
  const auto p = run({"sample", "progeny", "--offspring", "none", "--reps", "3"});
  CHECK(p.out == "seed_index,value\n0,1\n1,1\n2,1\n");
  const auto c = run({"sample", "cluster", "--T", "10", "--h", "0.3", "--reps", "5"});
  CHECK(c.out.rfind("seed_index,value\n", 0) == 0);
  CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 6);
  const auto i = run({"sample", "interference", "--lambda", "5", "--reps", "2"});
  CHECK(std::count(i.out.begin(), i.out.end(), '\n') == 3);
}

TEST_CASE("config files mirror flags and flags win") {
  const auto path = temp_file("config.json");
  {
    std::ofstream f(path);
    f << R"({"command": "delta poisson", "h": 0.1, "lambda-leb": 1e4})";
  }
  const auto from_config = run({"--config", path.string()});
  REQUIRE(from_config.code == kExitOk);
  CHECK(from_config.json()["delta"].get<double>() == doctest::Approx(10.0));
  const auto overridden = run({"delta", "poisson", "--h", "0.5", "--config", path.string()});
  CHECK(overridden.json()["case"] == "(ii)");
  std::filesystem::remove(path);
  CHECK(run({"--config", path.string()}).code == kExitUsage);
}

TEST_CASE("--output writes the report to a file") {
  const auto path = temp_file("report.json");
  const auto r = run({"delta", "poisson", "--h", "0.5", "--lambda-leb", "1e4", "--output",
                      path.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  std::ifstream f(path);
  const auto j = Json::parse(f);
  CHECK(j["case"] == "(ii)");
  std::filesystem::remove(path);
}
