#include "cfnc/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace cfnc;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("power sweep parsing") {
  CHECK(cli::parse_db_sweep("4") == std::vector<double>{4.0});
  CHECK(cli::parse_db_sweep("1:1:3") == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(cli::parse_db_sweep("0:2.5:5") == std::vector<double>{0.0, 2.5, 5.0});
  CHECK(cli::parse_db_sweep("0,3,9") == std::vector<double>{0.0, 3.0, 9.0});
  CHECK(cli::parse_db_sweep("0:0.1:0.3").size() == 4);
  CHECK_THROWS_AS(cli::parse_db_sweep("1:0:3"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_db_sweep("3:1:1"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_db_sweep("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_db_sweep("ten"), std::invalid_argument);
}

TEST_CASE("example reproduces the reference walk-through") {
  const auto r = run({"example"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("a(1) = [1,0,0]       rate = 0.484") != std::string::npos);
  CHECK(r.out.find("rate = 0.2231") != std::string::npos);
  CHECK(r.out.find("gamma_4 = 0.5935") != std::string::npos);
  CHECK(r.out.find("cut sizes: 0 2 1  -> not achievable") != std::string::npos);
  CHECK(r.out.find("max-min rate = 0.484") != std::string::npos);
  CHECK(r.out.find("det = 0  (singular)") != std::string::npos);
  CHECK(r.out.find("All values match the reference.") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"bogus"}).code == cli::kExitUsage);
  CHECK(run({"rankfail", "--trials", "0"}).code == cli::kExitUsage);
  CHECK(run({"compare", "--L", "2,3", "--trials", "5"}).code == cli::kExitUsage);
  CHECK(run({"compare", "--strategies", "warp", "--trials", "5"}).code == cli::kExitUsage);
  CHECK(run({"compare", "--rate-units", "dB", "--trials", "5"}).code == cli::kExitUsage);
  CHECK(run({"tables", "--h", "1,2", "--h", "3"}).code == cli::kExitUsage);
  CHECK(run({"tables", "--format", "xml"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("rankfail CSV") {
  const std::vector<std::string> args{"rankfail", "--L", "2,3", "--p-db", "1:1:3", "--trials", "300", "--seed", "5"};
  const auto a = run(args);
  REQUIRE(a.code == cli::kExitOk);
  const auto rows = lines(a.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "L,P_db,trials,rank_failure_prob,stderr");
  CHECK(rows[1].rfind("2,1,300,", 0) == 0);
  CHECK(rows[6].rfind("3,3,300,", 0) == 0);
  CHECK(run(args).out == a.out);
}

TEST_CASE("compare CSV") {
  const auto a = run({"compare", "--L", "3", "--p-db", "0:10:20", "--trials", "200", "--seed", "3"});
  REQUIRE(a.code == cli::kExitOk);
  const auto rows = lines(a.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "P_db,df_noise,round_h,local_opt,proposed,stderr_df,stderr_rh,stderr_lo,stderr_pr");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<double> cells;
    std::stringstream ss(rows[i]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(std::stod(c));
    REQUIRE(cells.size() == 9);
    CHECK(cells[4] >= cells[3]);
  }

  const auto subset = run({"compare", "--strategies", "proposed", "--p-db", "5", "--trials", "20"});
  REQUIRE(subset.code == cli::kExitOk);
  CHECK(lines(subset.out)[1].rfind("5,,,,", 0) == 0);
}

TEST_CASE("tables dump and round trip") {
  const auto ref = run({"tables", "--h", "0.9730,0.4674,0.5103", "--h", "-1.7291,0.7166,-0.5856", "--h",
                        "-0.3912,1.4407,-0.8115", "--rate-units", "nats"});
  REQUIRE(ref.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(ref.out);
  CHECK(doc["achievable"] == true);
  CHECK(std::abs(doc["bottleneck_rate"].get<double>() - 0.4846) < 1e-3);
  CHECK(std::abs(doc["relays"][1]["rates"][0].get<double>() - 0.7087) < 1e-3);
  CHECK(doc["determinant"].get<long long>() != 0);

  const auto one = nlohmann::json::parse(run({"tables", "--h", "2"}).out);
  CHECK(one["matrix"].size() == 1);
  CHECK(std::abs(one["matrix"][0][0].get<long long>()) == 1);

  const auto seeded = run({"tables", "--L", "2", "--seed", "17"});
  REQUIRE(seeded.code == cli::kExitOk);
  const auto first = nlohmann::json::parse(seeded.out);
  std::vector<std::string> again{"tables"};
  for (const auto& h : first["channels"]) {
    std::ostringstream os;
    os.precision(17);
    os << h[0].get<double>() << ',' << h[1].get<double>();
    again.push_back("--h");
    again.push_back(os.str());
  }
  const auto second = nlohmann::json::parse(run(again).out);
  CHECK(second == first);

  const auto csv = run({"tables", "--L", "2", "--seed", "17", "--format", "csv"});
  REQUIRE(csv.code == cli::kExitOk);
  CHECK(lines(csv.out)[0] == "kind,relay,index,value,c1,c2");
}

}  // TEST_SUITE
