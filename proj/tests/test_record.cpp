#include <sstream>

#include "doctest.h"
#include "pathscape/errors.hpp"
#include "pathscape/record.hpp"
#include "pathscape/rng.hpp"

using namespace pathscape;

namespace {

ExperimentRecord sample_record() {
  ExperimentRecord r;
  r.command = "tree sample";
  r.params = {{"dim", 10}, {"x", 0.1}};
  r.set_stream(42, 1000);
  r.stats = {{"mean", 3.25}, {"se", 0.01}};
  return r;
}

}  // namespace

TEST_CASE("records round-trip through JSON") {
  const auto r = sample_record();
  const Json j = r.to_json();
  CHECK(j["command"] == "tree sample");
  CHECK(j["seed"] == 42);
  CHECK(j["replicas"] == 1000);
  CHECK(j["rng"] == std::string(kRngStreamTag));
  CHECK(j["mean"] == 3.25);
  CHECK(j["version"] == artifact_version());
  CHECK_FALSE(j.contains("wall_time"));
  const auto back = ExperimentRecord::from_json(Json::parse(j.dump()));
  CHECK(back.to_json().dump() == j.dump());
  CHECK(back.stats == r.stats);
  CHECK(back.seed == r.seed);
}

TEST_CASE("deterministic records carry no stream fields") {
  ExperimentRecord r;
  r.command = "moments first";
  r.params = {{"dim", 4}};
  r.stats = {{"mean", 4.0}};
  const Json j = r.to_json();
  CHECK_FALSE(j.contains("seed"));
  CHECK_FALSE(j.contains("rng"));
  r.wall_time = 0.5;
  CHECK(r.to_json()["wall_time"] == 0.5);
}

TEST_CASE("statistic names may not shadow record fields") {
  auto r = sample_record();
  r.stats["seed"] = 1;
  CHECK_THROWS_AS(r.to_json(), DomainError);
}

TEST_CASE("CSV quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_field("") == "");
}

TEST_CASE("CSV layout") {
  auto a = sample_record();
  ExperimentRecord b;
  b.command = "moments q0";
  b.params = {{"dim", 12}, {"note", "x,y"}};
  b.stats = {{"q0", 9}};
  std::ostringstream out;
  write_csv(out, {a, b});
  const std::string v = artifact_version();
  const std::string expected =
      "command,version,seed,replicas,rng,params.dim,params.x,mean,se,params.note,q0\r\n"
      "tree sample," + v + ",42,1000," + std::string(kRngStreamTag) + ",10,0.1,3.25,0.01,,\r\n"
      "moments q0," + v + ",,,,12,,,,\"x,y\",9\r\n";
  CHECK(out.str() == expected);
}
