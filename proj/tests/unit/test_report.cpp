#include <doctest.h>

#include <json.hpp>

#include <mrfanom/report_json.hpp>

#include "support/fixtures.hpp"

using namespace mrfanom;
using namespace mrfanom::test;
using nlohmann::json;

TEST_CASE("case report round-trips through JSON") {
  std::mt19937_64 rng(5);
  const auto ds = random_dataset(3, 3, 6, rng);
  const auto stats = location_stats(ds);
  StateField z(9, 6);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = 2; t < 5; ++t) z.z(s, t) = State::Positive;
  auto an = extract_anomalies(z, ds.grid);
  annotate_intensity(an, ds, stats);
  REQUIRE(an.size() == 1);
  const auto report = case_report(an[0], ds, stats);
  const auto text = to_json(report);
  CHECK(case_report_from_json(text) == report);
  CHECK(to_json(case_report_from_json(text)) == text);
  const auto j = json::parse(text);
  CHECK(j["sign"] == "+");
  CHECK(j["years"].size() == 3);
  CHECK(text.back() == '\n');
}

TEST_CASE("malformed case report") {
  CHECK(error_of([] { case_report_from_json("{not json"); }) == ErrorCode::ParseError);
  CHECK(error_of([] { case_report_from_json("{\"anomaly_id\": \"x\"}"); }) == ErrorCode::ParseError);
}

TEST_CASE("absent statistics are null") {
  AnomalyStats st;
  st.NP = 2;
  st.STSP = 3.5;
  const auto j = json::parse(to_json(st));
  CHECK(j["NP"] == 2);
  CHECK(j["STSP"] == 3.5);
  CHECK(j["STSN"].is_null());
  CHECK(j["IN"].is_null());
}

TEST_CASE("year sets use year labels") {
  StateField z(3, 4);
  z.z_aimr[2] = State::Positive;
  z.z(0, 1) = z.z(1, 1) = z.z(2, 1) = State::Positive;
  const auto sets = widespread_year_sets(z);
  const std::vector<int> years{1950, 1951, 1952, 1953};
  const auto j = json::parse(to_json(sets, years));
  CHECK(j["H"] == json::array({1952}));
  CHECK(j["HL"] == json::array({1951}));
  CHECK(j["L"].empty());
}

TEST_CASE("overlap, gain/loss, year stats and correlations") {
  OverlapReport o;
  o.H = {0};
  o.ZH = {0};
  o.h_in_zh = 1.0;
  const std::vector<int> years{2001, 2002};
  auto j = json::parse(to_json(o, years));
  CHECK(j["ZH"] == json::array({2001}));
  CHECK(j.dump().find("1.0") != std::string::npos);

  GainLossReport g{5, 4, 1, 0, 2, 3};
  j = json::parse(to_json(g));
  CHECK(j["N1"] == 5);
  CHECK(j["NL2"] == 3);

  YearAssignmentStats y;
  y.N1Y = 2.5;
  j = json::parse(to_json(y));
  CHECK(j["N1Y"] == 2.5);
  CHECK(j["N1H"].is_null());

  CorrelationReport c;
  c.st_spatial.positive = 0.9;
  j = json::parse(to_json(c));
  CHECK(j.dump().find("0.9") != std::string::npos);
}

TEST_CASE("run manifest") {
  RunManifest m;
  m.command = "fit";
  m.tool_version = "1.2.3";
  m.inputs = {{"data", "a.csv"}};
  m.config = {{"temporal.P", "0.9"}, {"spatial.mode", "prop"}};
  m.seed = 7;
  m.out_dir = "out";
  const auto j = nlohmann::ordered_json::parse(to_json(m));
  CHECK(j["command"] == "fit");
  CHECK(j["seed"] == 7);
  CHECK(j["inputs"]["data"] == "a.csv");
  CHECK(j["config"].begin().key() == "temporal.P");
  m.seed.reset();
  CHECK(json::parse(to_json(m))["seed"].is_null());
}

TEST_CASE("write_text creates directories") {
  TempDir dir;
  write_text(dir / "a/b/c.json", "{}\n");
  CHECK(read_file(dir / "a/b/c.json") == "{}\n");
}
