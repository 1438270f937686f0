#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gresilience {

enum class EventKind {
  kStart,
  kEnd,
  kArrive,
  kImage,
  kDiscard,
  kSimilarity,
  kQueue,
  kClassify,
  kSlowdown,
  kSecondImage,
  kDecision,
  kArmMove,
  kPlace,
  kHumanStart,
  kHumanDone,
  kCorrection,
  kLearned,
  kDone,
  kMiss,
  kRestore,
  kEnergy,
};

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view s);

inline constexpr std::int64_t kSystemObject = -1;

struct Event {
  std::int64_t t_ms = 0;
  EventKind kind = EventKind::kStart;
  std::int64_t object_id = kSystemObject;
  std::vector<std::pair<std::string, std::string>> payload;

  Event& with(std::string key, std::string value);
  Event& with(std::string key, double value);
  Event& with(std::string key, std::int64_t value);
  Event& with(std::string key, int value) { return with(std::move(key), std::int64_t{value}); }
  Event& with(std::string key, bool value) { return with(std::move(key), std::int64_t{value ? 1 : 0}); }
  Event& with(std::string key, const char* value) { return with(std::move(key), std::string(value)); }

  std::optional<std::string_view> get(std::string_view key) const;
  // Throws IntegrityError when the key is missing or not numeric.
  double number(std::string_view key) const;
  std::string_view text(std::string_view key) const;

  friend bool operator==(const Event&, const Event&) = default;
};

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);
// Throws IntegrityError if `s` is not entirely a number.
double parse_number(std::string_view s);

// Append-only ordered trace of a simulation run.
class EventLog {
 public:
  // Throws InvariantError if ev is earlier than the last event.
  void append(Event ev);

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  // One record per line: `t_ms,kind,object_id,key=value;key=value`.
  std::string to_text() const;
  // One JSON object per line with the same fields.
  std::string to_jsonl() const;

  // Throws IntegrityError for malformed records or decreasing timestamps.
  static EventLog parse_text(std::string_view text);

  friend bool operator==(const EventLog&, const EventLog&) = default;

 private:
  std::vector<Event> events_;
};

// Throws IntegrityError when timestamps decrease.
void check_ordered(const std::vector<Event>& events);

// FNV-1a 64-bit digest of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace gresilience
