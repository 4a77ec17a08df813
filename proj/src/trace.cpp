#include "reqbandit/trace.hpp"

#include <algorithm>

namespace reqbandit {

void Trace::append(const SetRecord& record, const std::vector<TraceEvent>& step_events) {
  SetRecord kept = record;
  kept.completed = true;
  for (const auto& event : step_events) {
    if (event.time <= horizon) {
      events.push_back(event);
    } else {
      kept.completed = false;
    }
  }
  sets.push_back(std::move(kept));
}

double accumulated_mean_reward(const Trace& trace, double t) {
  double total = 0.0;
  for (const auto& event : trace.events) {
    if (event.time > t) break;
    total += event.kind == EventKind::Selection ? event.mean : -event.cost;
  }
  return total;
}

}  // namespace reqbandit
