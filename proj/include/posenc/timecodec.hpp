#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>

namespace posenc {

/// Naive local calendar timestamp, as written in the event logs.
struct Timestamp {
  int year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int micro = 0;

  /// Seconds since 1970-01-01 00:00:00 on the proleptic Gregorian calendar,
  /// ignoring time zones.
  double epoch_seconds() const;
  static Timestamp from_epoch_seconds(double s);

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

/// Parses `YYYY-MM-DD HH:MM:SS[.ffffff]` or `MM-DD HH:MM:SS[.ffffff]`; the
/// short form takes its year from `default_year`. Throws DataError.
Timestamp parse_timestamp(std::string_view date, std::string_view time, int default_year);

/// Inverse of parse_timestamp's long form; the fraction is printed only when
/// nonzero.
std::string format_timestamp(const Timestamp& ts);

struct TimeComponents {
  int day_of_year = 1;  // 1-based ordinal
  int days_in_year = 365;
  int weekday = 0;  // Monday = 0
  int second_of_day = 0;
};

TimeComponents time_components(const Timestamp& ts);

/// (sin, cos) of 2*pi*t/t_max. Throws ConfigError when t_max <= 0.
std::pair<double, double> encode_component(int t, int t_max);

/// Day-of-year, weekday and second-of-day pairs, in that order.
using TimeVector = std::array<double, 6>;
TimeVector encode_timestamp(const Timestamp& ts);

/// 1 - a.b. Throws DataError on a zero vector.
double cyclic_distance(std::pair<double, double> a, std::pair<double, double> b);

}  // namespace posenc
