#pragma once

#include <cstddef>
#include <vector>

namespace reqbandit {

enum class EventKind { RequestDone, Selection };

// One completed action, stamped at its completion instant. Request events
// carry the cost; selection events carry the arm, its true mean and the
// observed reward.
struct TraceEvent {
  double time = 0.0;
  EventKind kind = EventKind::RequestDone;
  std::size_t set = 0;
  double cost = 0.0;
  std::size_t arm = 0;
  double mean = 0.0;
  double reward = 0.0;
};

struct SetRecord {
  std::size_t index = 0;
  double start = 0.0;  // clock when the request was issued
  double delay = 0.0;
  double cost = 0.0;
  std::size_t offered = 0;
  std::vector<std::size_t> selected;  // positions within the set, selection order
  double rate_before = 0.0;
  double rate_after = 0.0;
  bool completed = false;  // every event of the set lies within the horizon
};

struct Trace {
  double horizon = 0.0;
  double clock = 0.0;  // clock after the last processed set (may exceed horizon)
  std::vector<TraceEvent> events;
  std::vector<SetRecord> sets;

  // Appends the step's events that complete by the horizon.
  void append(const SetRecord& record, const std::vector<TraceEvent>& step_events);
};

// Q(t): selected means minus request costs over events stamped <= t.
double accumulated_mean_reward(const Trace& trace, double t);

}  // namespace reqbandit
