#include <doctest.h>

#include <sstream>

#include "stocap/traffic.hpp"
#include "support.hpp"

using namespace stocap;

namespace {

ParsedEvents parse(const std::string& text) {
  std::istringstream in(text);
  return parse_events(in);
}

const char* kHeader = "timestamp,speed_kmh,length_m,valid\n";

VehicleEvent event(const char* ts, double speed, double length) {
  return {*parse_timestamp(ts), speed, length, true};
}

}  // namespace

TEST_CASE("timestamps") {
  auto t = parse_timestamp("2016-09-14T07:31:02.410");
  REQUIRE(t);
  CHECK(format_timestamp(*t) == "2016-09-14T07:31:02.410");
  CHECK(format_minute(floor_minute(*t)) == "2016-09-14T07:31:00");
  CHECK(parse_timestamp("2016-09-14 07:31:02Z"));
  CHECK_FALSE(parse_timestamp("2016-13-14T07:31:02"));
  CHECK_FALSE(parse_timestamp("yesterday"));
  CHECK_FALSE(parse_minute("2016-09-14T07:31:02"));
}

TEST_CASE("parse_events keeps a well-formed row") {
  auto p = parse(std::string(kHeader) + "2016-09-14T07:31:02.410,96.0,4.2,1\n");
  REQUIRE(p.events.size() == 1);
  CHECK(p.events[0].speed_kmh == 96.0);
  CHECK(p.events[0].length_m == 4.2);
}

TEST_CASE("parse_events drops duplicates, invalid and implausible rows") {
  auto p = parse(std::string(kHeader) +
                 "2016-09-14T07:31:02.410,96.0,4.2,1\n"
                 "2016-09-14T07:31:02.410,96.0,4.2,1\n"
                 "2016-09-14T07:31:03.000,90.0,4.0,0\n"
                 "2016-09-14T07:31:04.000,300.0,4.0,1\n"
                 "2016-09-14T07:31:05.000,90.0,31.0,1\n");
  CHECK(p.events.size() == 1);
  CHECK(p.dropped_duplicate == 1);
  CHECK(p.dropped_invalid == 1);
  CHECK(p.dropped_implausible == 2);
}

TEST_CASE("parse_events rejects negative speed with a line number") {
  auto p = parse(std::string(kHeader) + "2016-09-14T07:31:02,-5,4.2,1\n2016-09-14T07:31:03,x,4,1\n");
  CHECK(p.events.empty());
  CHECK(p.rejected_malformed == 2);
  REQUIRE(p.diagnostics.size() == 2);
  CHECK(p.diagnostics[0].line == 2);
  CHECK(p.diagnostics[1].line == 3);
}

TEST_CASE("parse_events sorts and fails on a bad header") {
  auto p = parse(std::string(kHeader) + "2016-09-14T07:31:05,90,4,1\n2016-09-14T07:31:01,80,4,1\n");
  REQUIRE(p.events.size() == 2);
  CHECK(p.events[0].timestamp < p.events[1].timestamp);
  CHECK_THROWS_AS(parse("time,speed\n"), CsvFormatError);
  CHECK_THROWS_AS(parse(""), CsvFormatError);
}

TEST_CASE("aggregate_minutes: harmonic speed and PCE") {
  std::vector<VehicleEvent> ev{event("2016-09-14T07:00:01", 80, 4), event("2016-09-14T07:00:30", 120, 4),
                               event("2016-09-14T07:02:10", 90, 10)};
  auto m = aggregate_minutes(ev);
  REQUIRE(m.size() == 3);
  CHECK(m[0].intensity == 2);
  CHECK(*m[0].mean_speed == doctest::Approx(96.0).epsilon(1e-12));
  CHECK(m[1].empty());
  CHECK(m[1].intensity == 0);
  CHECK_FALSE(m[1].mean_speed);
  CHECK(m[2].intensity == 2);
  CHECK(m[2].vehicle_count == 1);
}

TEST_CASE("aggregate_minutes: zero speeds count in intensity only") {
  std::vector<VehicleEvent> ev{event("2016-09-14T07:00:01", 0, 4), event("2016-09-14T07:00:02", 60, 4)};
  auto m = aggregate_minutes(ev);
  REQUIRE(m.size() == 1);
  CHECK(m[0].intensity == 2);
  CHECK(m[0].zero_speed_vehicles == 1);
  CHECK(*m[0].mean_speed == doctest::Approx(60.0));

  auto only_zero = aggregate_minutes({event("2016-09-14T07:00:01", 0, 4)});
  CHECK_FALSE(only_zero[0].mean_speed);
  CHECK(only_zero[0].intensity == 1);
}

TEST_CASE("rolling_aggregate") {
  auto m = test::make_minutes({90, 90, 90}, {10, 12, 14});
  auto w = rolling_aggregate(m, 3);
  REQUIRE(w.size() == 1);
  CHECK(w[0].intensity == 36);
  CHECK(*w[0].mean_speed == 90.0);
  CHECK(w[0].width == 3);

  CHECK(rolling_aggregate(test::make_minutes({90, 90, 90, 90, 90}, 5), 3).size() == 3);
  CHECK(rolling_aggregate(test::make_minutes({90, 90}, 5), 3).empty());

  auto gap = rolling_aggregate(test::make_minutes({90, NAN, 60}, 5), 3);
  CHECK(gap[0].partial);
  CHECK(*gap[0].mean_speed == 75.0);
}

TEST_CASE("minutes CSV round trip") {
  auto m = test::make_minutes({96.5, NAN, 41.25}, {20, 0, 18});
  std::stringstream buf;
  write_minutes_csv(buf, m);
  CHECK(buf.str().rfind("minute_start,intensity_pce,harmonic_speed_kmh,vehicle_count,empty_flag\n", 0) == 0);
  auto back = read_minutes_csv(buf);
  CHECK(back == m);
}

TEST_CASE("detect: constant free flow gives only censored records") {
  auto r = detect_breakdowns(test::make_minutes(std::vector<double>(30, 90.0), 30));
  CHECK(r.breakdowns.empty());
  CHECK(r.eligible_minutes == 28);
  CHECK(r.histogram.total() == 28);
  CHECK(r.histogram.count(90) == 28);
}

TEST_CASE("detect: hand-traced breakdown") {
  std::vector<double> speeds{85, 84, 86, 35, 20, 15, 20, 25};
  std::vector<int> flows{40, 41, 39, 30, 25, 20, 22, 24};
  auto r = detect_breakdowns(test::make_minutes(speeds, flows));
  REQUIRE(r.breakdowns.size() == 1);
  CHECK(r.breakdowns[0].breakdown_minute == test::minute_at(3));
  CHECK(r.breakdowns[0].breakdown_flow == 120);
  CHECK_FALSE(r.breakdowns[0].shifted_back);
  CHECK(r.ended_congested);
  CHECK(r.histogram.total() == 0);
}

TEST_CASE("detect: shift rule when the previous minute is below the discard speed") {
  std::vector<double> speeds{90, 90, 90, 90, 45, 30, 20, 20, 20};
  std::vector<int> flows{30, 31, 32, 33, 34, 20, 20, 20, 20};
  auto r = detect_breakdowns(test::make_minutes(speeds, flows));
  REQUIRE(r.breakdowns.size() == 1);
  CHECK(r.breakdowns[0].shifted_back);
  CHECK(r.breakdowns[0].breakdown_minute == test::minute_at(5));
  CHECK(r.breakdowns[0].breakdown_flow == 31 + 32 + 33);
}

TEST_CASE("detect: brief dip is discarded without a breakdown") {
  std::vector<double> speeds(12, 90.0);
  speeds[6] = 45.0;
  auto r = detect_breakdowns(test::make_minutes(speeds, 30));
  CHECK(r.breakdowns.empty());
  CHECK(r.discarded_minutes == 1);
  CHECK(r.classes[6] == MinuteClass::discarded);
  CHECK(r.histogram.total() == r.eligible_minutes - 1);
}

TEST_CASE("detect: recovery needs a five-minute mean above the recovery speed") {
  std::vector<double> speeds{90, 90, 90, 90, 20, 20, 20, 60, 80, 80, 80, 80, 80, 90, 90, 90};
  auto r = detect_breakdowns(test::make_minutes(speeds, 30));
  REQUIRE(r.breakdowns.size() == 1);
  CHECK_FALSE(r.ended_congested);
  // minutes 7..11 are the first five with a mean above 70
  CHECK(r.classes[10] == MinuteClass::congested);
  CHECK(r.classes[11] == MinuteClass::congested);
  CHECK(r.classes[12] == MinuteClass::censored);
}

TEST_CASE("detect: gap windows are discarded and counted") {
  std::vector<double> speeds(10, 90.0);
  speeds[4] = NAN;
  auto r = detect_breakdowns(test::make_minutes(speeds, 30));
  CHECK(r.gap_windows == 3);
  CHECK(r.discarded_minutes == 3);
}

TEST_CASE("detect: breakdown right at the start is skipped") {
  auto r = detect_breakdowns(test::make_minutes({30, 30, 30, 30, 90, 90, 90, 90, 90, 90}, 20));
  CHECK(r.breakdowns.empty());
  CHECK(r.skipped_breakdowns == 1);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("detect: config validation and contiguity") {
  DetectionConfig bad;
  bad.discard_speed = 30;
  CHECK_THROWS(detect_breakdowns(test::make_minutes({90, 90, 90}, 1), bad));
  auto m = test::make_minutes({90, 90, 90, 90}, 1);
  m.erase(m.begin() + 1);
  CHECK_THROWS(detect_breakdowns(m));
}

TEST_CASE("build_histogram") {
  std::vector<int> v{120, 120, 80};
  auto h = build_histogram(v);
  CHECK(h.count(80) == 1);
  CHECK(h.count(120) == 2);
  CHECK(h.total() == 3);
  CHECK(build_histogram({}).total() == 0);
  std::vector<int> many(6486, 50);
  CHECK(build_histogram(many).total() == 6486);
}
