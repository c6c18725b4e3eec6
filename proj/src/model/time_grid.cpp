#include "evflex/model/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace evflex {

using namespace std::chrono;

Timestamp parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const std::string buf(text);
  int consumed = 0;
  const int fields = std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s, &consumed);
  if (fields < 6) {
    s = 0;
    consumed = 0;
    if (std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d%n", &y, &mo, &d, &h, &mi, &consumed) < 5)
      throw std::invalid_argument("malformed timestamp '" + buf + "'");
  }
  const std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
  if (!(rest.empty() || rest == "Z")) throw std::invalid_argument("malformed timestamp '" + buf + "'");
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59)
    throw std::invalid_argument("timestamp out of range '" + buf + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

seconds TimeGrid::slot_length() const { return seconds{std::llround(delta_t_hours * 3600.0)}; }

Timestamp TimeGrid::end() const { return start + slot_length() * num_slots; }

SlotWindow snap_to_grid(Timestamp arrival, Timestamp departure, const TimeGrid& grid) {
  const auto slot = grid.slot_length().count();
  if (slot <= 0 || grid.num_slots < 1) throw std::invalid_argument("invalid time grid");
  if (arrival < grid.start || arrival >= grid.end())
    throw SnapError("arrival " + format_timestamp(arrival) + " outside the scheduling horizon");
  if (departure > grid.end() || departure < grid.start)
    throw SnapError("departure " + format_timestamp(departure) + " outside the scheduling horizon");
  if (departure <= arrival) throw SnapError("departure must be after arrival");

  const auto from_start_a = (arrival - grid.start).count();
  const auto from_start_d = (departure - grid.start).count();
  const auto a_ceil = static_cast<int>((from_start_a + slot - 1) / slot);
  const int a_floor = static_cast<int>(from_start_a / slot);
  int d_floor = static_cast<int>(from_start_d / slot);
  d_floor = std::min(d_floor, grid.num_slots - 1);
  if (d_floor < a_ceil || a_ceil >= grid.num_slots) return {a_floor, a_floor};
  return {a_ceil, d_floor};
}

}  // namespace evflex
