#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "posenc/error.hpp"
#include "posenc/timecodec.hpp"

using namespace posenc;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("worked component values") {
  auto [s1, c1] = encode_component(3, 7);
  CHECK(close(s1, 0.434, 1e-3));
  CHECK(close(c1, -0.901, 1e-3));
  auto [s2, c2] = encode_component(54000, 86400);
  CHECK(close(s2, -0.707, 1e-3));
  CHECK(close(c2, -0.707, 1e-3));
  auto [s3, c3] = encode_component(236, 365);
  CHECK(close(s3, -0.796, 1e-3));
  CHECK(close(c3, -0.605, 1e-3));
  auto [s0, c0] = encode_component(0, 11);
  CHECK(s0 == 0.0);
  CHECK(c0 == 1.0);
  CHECK_THROWS_AS(encode_component(1, 0), ConfigError);
}

TEST_CASE("full timestamp example") {
  const Timestamp ts = parse_timestamp("2023-08-24", "15:00:00", 0);
  const auto tc = time_components(ts);
  CHECK(tc.day_of_year == 236);
  CHECK(tc.weekday == 3);
  CHECK(tc.second_of_day == 54000);
  const TimeVector v = encode_timestamp(ts);
  const double expect[6] = {-0.796, -0.605, 0.434, -0.901, -0.707, -0.707};
  for (int i = 0; i < 6; ++i) CHECK(close(v[i], expect[i], 1e-3));
}

TEST_CASE("Monday first of January") {
  // 2018-01-01 was a Monday
  const TimeVector v = encode_timestamp(parse_timestamp("2018-01-01", "00:00:00", 0));
  const double a = 2 * std::numbers::pi / 365;
  CHECK(close(v[0], std::sin(a), 1e-12));
  CHECK(close(v[1], std::cos(a), 1e-12));
  CHECK(close(v[0], 0.0172, 1e-4));
  CHECK(close(v[1], 0.99985, 1e-5));
  CHECK(v[2] == 0.0);
  CHECK(v[3] == 1.0);
  CHECK(v[4] == 0.0);
  CHECK(v[5] == 1.0);
}

TEST_CASE("calendar components against std::chrono") {
  using namespace std::chrono;
  for (int y : {1999, 2000, 2009, 2023, 2024}) {
    for (unsigned m = 1; m <= 12; ++m)
      for (unsigned d : {1u, 15u, 28u}) {
        const year_month_day ymd{year{y}, month{m}, day{d}};
        Timestamp ts{y, static_cast<int>(m), static_cast<int>(d), 13, 7, 9, 0};
        const auto tc = time_components(ts);
        const auto doy = (sys_days{ymd} - sys_days{year{y} / January / 1}).count() + 1;
        CHECK(tc.day_of_year == doy);
        CHECK(tc.days_in_year == (year{y}.is_leap() ? 366 : 365));
        CHECK(tc.weekday == static_cast<int>(weekday{sys_days{ymd}}.iso_encoding()) - 1);
        CHECK(tc.second_of_day == 13 * 3600 + 7 * 60 + 9);
      }
  }
  // last day of a leap year stays inside the period
  const auto tc = time_components(Timestamp{2024, 12, 31, 0, 0, 0, 0});
  CHECK(tc.day_of_year == 366);
  CHECK(tc.days_in_year == 366);
}

TEST_CASE("cyclic distances") {
  CHECK(close(cyclic_distance(encode_component(0, 24), encode_component(23, 24)), 0.03407, 1e-3));
  CHECK(close(cyclic_distance(encode_component(0, 24), encode_component(15, 24)), 1.7071, 1e-3));
  CHECK(cyclic_distance(encode_component(5, 24), encode_component(5, 24)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(cyclic_distance({0, 0}, {1, 0}), DataError);
}

TEST_CASE("component properties") {
  for (int t_max : {7, 8, 24, 365, 366, 86400}) {
    const auto zero = encode_component(0, t_max);
    if (t_max >= 8)
      CHECK(cyclic_distance(encode_component(t_max - 1, t_max), zero) <
            cyclic_distance(encode_component(t_max / 2, t_max), zero));
    for (int t = 0; t <= t_max; t += std::max(1, t_max / 97)) {
      const auto [s, c] = encode_component(t, t_max);
      CHECK(std::abs(s * s + c * c - 1.0) < 1e-9);
      const auto [s2, c2] = encode_component(t + 3 * t_max, t_max);
      CHECK(std::abs(s - s2) < 1e-9);
      CHECK(std::abs(c - c2) < 1e-9);
    }
    const auto full = encode_component(t_max, t_max);
    CHECK(std::abs(full.first - zero.first) < 1e-9);
    CHECK(std::abs(full.second - zero.second) < 1e-9);
  }
}

TEST_CASE("same time of day on consecutive days") {
  const auto a = encode_timestamp(parse_timestamp("2009-03-01", "07:30:00", 0));
  const auto b = encode_timestamp(parse_timestamp("2009-03-02", "07:30:00", 0));
  CHECK(a[4] == b[4]);
  CHECK(a[5] == b[5]);
}

TEST_CASE("timestamp parsing") {
  const Timestamp s = parse_timestamp("08-24", "00:00:19", 2009);
  CHECK(s == Timestamp{2009, 8, 24, 0, 0, 19, 0});
  const Timestamp l = parse_timestamp("2009-02-02", "12:00:01.5", 0);
  CHECK(l.micro == 500000);
  CHECK(parse_timestamp("2009-02-02", "12:00:01.000123", 0).micro == 123);
  CHECK(parse_timestamp("2009-02-02", "12:00:01.1234567", 0).micro == 123456);  // truncated
  CHECK(format_timestamp(l) == "2009-02-02 12:00:01.500000");
  CHECK(format_timestamp(s) == "2009-08-24 00:00:19");
  for (const auto& [d, t] : std::vector<std::pair<const char*, const char*>>{
           {"2009-02-30", "00:00:00"}, {"2009-13-01", "00:00:00"}, {"02-02", "24:00:00"},
           {"2009-02-02", "12:60:00"}, {"x", "00:00:00"}, {"2009-02-02", "1:2"},
           {"2009-02-02", "12:00:00."}, {"2009-2-2", "00:00:00"}}) {
    CHECK_THROWS_AS(parse_timestamp(d, t, 2009), DataError);
  }
  CHECK_THROWS_AS(parse_timestamp("02-29", "00:00:00", 2009), DataError);
  CHECK_NOTHROW(parse_timestamp("02-29", "00:00:00", 2008));
}

TEST_CASE("epoch seconds round trip") {
  const Timestamp t{2009, 2, 2, 23, 59, 58, 250000};
  CHECK(Timestamp::from_epoch_seconds(t.epoch_seconds()) == t);
  CHECK(Timestamp{1970, 1, 1, 0, 0, 0, 0}.epoch_seconds() == 0.0);
  CHECK(Timestamp{2009, 2, 3, 0, 0, 0, 0}.epoch_seconds() -
            Timestamp{2009, 2, 2, 0, 0, 0, 0}.epoch_seconds() ==
        86400.0);
}
