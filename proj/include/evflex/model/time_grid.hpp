#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evflex {

using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM[:SS]" (a trailing 'Z' is accepted), UTC.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

/// Uniform discretization of the scheduling horizon. Slot i covers
/// [start + i*delta_t, start + (i+1)*delta_t).
struct TimeGrid {
  double delta_t_hours = 0.25;
  int num_slots = 96;
  Timestamp start{};

  [[nodiscard]] std::chrono::seconds slot_length() const;
  [[nodiscard]] Timestamp end() const;
  [[nodiscard]] double horizon_hours() const { return delta_t_hours * num_slots; }

  bool operator==(const TimeGrid&) const = default;
};

/// Raised when a timestamp falls outside the grid; the message names the
/// offending field.
class SnapError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct SlotWindow {
  int arrival_slot = 0;
  int departure_slot = 0;

  bool operator==(const SlotWindow&) const = default;
};

/// Arrival rounds up to the next slot boundary, departure down to the slot
/// containing it. A window that collapses keeps the single slot containing
/// the arrival.
SlotWindow snap_to_grid(Timestamp arrival, Timestamp departure, const TimeGrid& grid);

}  // namespace evflex
