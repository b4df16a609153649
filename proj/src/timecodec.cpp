#include "posenc/timecodec.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "posenc/error.hpp"

namespace posenc {

namespace {

namespace chr = std::chrono;

int to_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw DataError("bad timestamp '" + std::string(whole) + "'");
  return v;
}

chr::sys_days civil_days(int y, int m, int d) {
  return chr::sys_days{chr::year{y} / chr::month{static_cast<unsigned>(m)} /
                       chr::day{static_cast<unsigned>(d)}};
}

}  // namespace

double Timestamp::epoch_seconds() const {
  const auto days = civil_days(year, month, day).time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second +
         micro * 1e-6;
}

Timestamp Timestamp::from_epoch_seconds(double s) {
  const auto whole = static_cast<long long>(std::floor(s));
  auto micro = static_cast<long long>(std::llround((s - static_cast<double>(whole)) * 1e6));
  long long secs = whole;
  if (micro >= 1'000'000) {
    micro -= 1'000'000;
    ++secs;
  }
  long long days = secs / 86400;
  long long sod = secs % 86400;
  if (sod < 0) {
    sod += 86400;
    --days;
  }
  const chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  Timestamp ts;
  ts.year = static_cast<int>(ymd.year());
  ts.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  ts.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
  ts.hour = static_cast<int>(sod / 3600);
  ts.minute = static_cast<int>(sod % 3600 / 60);
  ts.second = static_cast<int>(sod % 60);
  ts.micro = static_cast<int>(micro);
  return ts;
}

Timestamp parse_timestamp(std::string_view date, std::string_view time, int default_year) {
  const std::string whole = std::string(date) + " " + std::string(time);
  Timestamp ts;
  // date: YYYY-MM-DD or MM-DD
  if (date.size() == 10 && date[4] == '-' && date[7] == '-') {
    ts.year = to_int(date.substr(0, 4), whole);
    ts.month = to_int(date.substr(5, 2), whole);
    ts.day = to_int(date.substr(8, 2), whole);
  } else if (date.size() == 5 && date[2] == '-') {
    ts.year = default_year;
    ts.month = to_int(date.substr(0, 2), whole);
    ts.day = to_int(date.substr(3, 2), whole);
  } else {
    throw DataError("bad timestamp '" + whole + "'");
  }
  if (time.size() < 8 || time[2] != ':' || time[5] != ':')
    throw DataError("bad timestamp '" + whole + "'");
  ts.hour = to_int(time.substr(0, 2), whole);
  ts.minute = to_int(time.substr(3, 2), whole);
  ts.second = to_int(time.substr(6, 2), whole);
  if (time.size() > 8) {
    if (time[8] != '.' || time.size() == 9) throw DataError("bad timestamp '" + whole + "'");
    auto frac = time.substr(9);
    if (frac.size() > 6) frac = frac.substr(0, 6);
    ts.micro = to_int(frac, whole);
    for (std::size_t k = frac.size(); k < 6; ++k) ts.micro *= 10;
  }
  const chr::year_month_day ymd{chr::year{ts.year} / chr::month{static_cast<unsigned>(ts.month)} /
                                chr::day{static_cast<unsigned>(ts.day)}};
  if (!ymd.ok() || ts.hour > 23 || ts.minute > 59 || ts.second > 59 || ts.hour < 0 ||
      ts.minute < 0 || ts.second < 0)
    throw DataError("bad timestamp '" + whole + "'");
  return ts;
}

std::string format_timestamp(const Timestamp& ts) {
  char buf[40];
  if (ts.micro != 0)
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d.%06d", ts.year, ts.month, ts.day,
                  ts.hour, ts.minute, ts.second, ts.micro);
  else
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d", ts.year, ts.month, ts.day,
                  ts.hour, ts.minute, ts.second);
  return buf;
}

TimeComponents time_components(const Timestamp& ts) {
  const auto today = civil_days(ts.year, ts.month, ts.day);
  const auto jan1 = civil_days(ts.year, 1, 1);
  TimeComponents tc;
  tc.day_of_year = static_cast<int>((today - jan1).count()) + 1;
  tc.days_in_year = chr::year{ts.year}.is_leap() ? 366 : 365;
  tc.weekday = static_cast<int>(chr::weekday{today}.iso_encoding()) - 1;
  tc.second_of_day = ts.hour * 3600 + ts.minute * 60 + ts.second;
  return tc;
}

std::pair<double, double> encode_component(int t, int t_max) {
  if (t_max <= 0) throw ConfigError("t_max must be positive");
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(t % t_max) /
                       static_cast<double>(t_max);
  return {std::sin(angle), std::cos(angle)};
}

TimeVector encode_timestamp(const Timestamp& ts) {
  const auto tc = time_components(ts);
  const auto [ds, dc] = encode_component(tc.day_of_year, tc.days_in_year);
  const auto [ws, wc] = encode_component(tc.weekday, 7);
  const auto [ss, sc] = encode_component(tc.second_of_day, 86400);
  return {ds, dc, ws, wc, ss, sc};
}

double cyclic_distance(std::pair<double, double> a, std::pair<double, double> b) {
  if ((a.first == 0.0 && a.second == 0.0) || (b.first == 0.0 && b.second == 0.0))
    throw DataError("cyclic_distance: zero vector");
  return 1.0 - (a.first * b.first + a.second * b.second);
}

}  // namespace posenc
