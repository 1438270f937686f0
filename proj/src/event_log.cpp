#include "gresilience/event_log.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include "json.hpp"

#include "gresilience/errors.hpp"

namespace gresilience {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 21> kKindNames{{
    {EventKind::kStart, "START"},
    {EventKind::kEnd, "END"},
    {EventKind::kArrive, "ARRIVE"},
    {EventKind::kImage, "IMAGE"},
    {EventKind::kDiscard, "DISCARD"},
    {EventKind::kSimilarity, "SIMILARITY"},
    {EventKind::kQueue, "QUEUE"},
    {EventKind::kClassify, "CLASSIFY"},
    {EventKind::kSlowdown, "SLOWDOWN"},
    {EventKind::kSecondImage, "IMAGE2"},
    {EventKind::kDecision, "DECISION"},
    {EventKind::kArmMove, "ARM_MOVE"},
    {EventKind::kPlace, "PLACE"},
    {EventKind::kHumanStart, "HUMAN_START"},
    {EventKind::kHumanDone, "HUMAN_DONE"},
    {EventKind::kCorrection, "CORRECTION"},
    {EventKind::kLearned, "LEARNED"},
    {EventKind::kDone, "DONE"},
    {EventKind::kMiss, "MISS"},
    {EventKind::kRestore, "RESTORE"},
    {EventKind::kEnergy, "ENERGY"},
}};

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IntegrityError("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

void check_token(const std::string& s) {
  if (s.find_first_of(",;=\n") != std::string::npos) {
    throw InvariantError("event payload token contains a separator: '" + s + "'");
  }
}

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "UNKNOWN";
}

EventKind parse_event_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  throw IntegrityError("unknown event kind '" + std::string(s) + "'");
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw InvariantError("number formatting failed");
  return std::string(buf.data(), ptr);
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IntegrityError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

Event& Event::with(std::string key, std::string value) {
  check_token(key);
  check_token(value);
  payload.emplace_back(std::move(key), std::move(value));
  return *this;
}

Event& Event::with(std::string key, double value) {
  return with(std::move(key), format_number(value));
}

Event& Event::with(std::string key, std::int64_t value) {
  return with(std::move(key), std::to_string(value));
}

std::optional<std::string_view> Event::get(std::string_view key) const {
  for (const auto& [k, v] : payload) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

double Event::number(std::string_view key) const {
  return parse_number(text(key));
}

std::string_view Event::text(std::string_view key) const {
  const auto v = get(key);
  if (!v) {
    throw IntegrityError(std::string(to_string(kind)) + " event at t_ms=" +
                         std::to_string(t_ms) + " lacks field '" + std::string(key) + "'");
  }
  return *v;
}

void EventLog::append(Event ev) {
  if (!events_.empty() && ev.t_ms < events_.back().t_ms) {
    throw InvariantError("event timestamps must be nondecreasing");
  }
  events_.push_back(std::move(ev));
}

std::string EventLog::to_text() const {
  std::string out;
  out.reserve(events_.size() * 64);
  for (const auto& e : events_) {
    out += std::to_string(e.t_ms);
    out += ',';
    out += to_string(e.kind);
    out += ',';
    out += std::to_string(e.object_id);
    out += ',';
    bool first = true;
    for (const auto& [k, v] : e.payload) {
      if (!first) out += ';';
      first = false;
      out += k;
      out += '=';
      out += v;
    }
    out += '\n';
  }
  return out;
}

std::string EventLog::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    nlohmann::ordered_json j;
    j["t_ms"] = e.t_ms;
    j["kind"] = to_string(e.kind);
    j["object_id"] = e.object_id;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : e.payload) p[k] = v;
    j["payload"] = std::move(p);
    out += j.dump();
    out += '\n';
  }
  return out;
}

EventLog EventLog::parse_text(std::string_view text) {
  std::vector<Event> events;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;

    std::array<std::string_view, 3> head;
    for (auto& field : head) {
      const std::size_t comma = line.find(',');
      if (comma == std::string_view::npos) {
        throw IntegrityError("line " + std::to_string(line_no) + ": expected 4 fields");
      }
      field = line.substr(0, comma);
      line.remove_prefix(comma + 1);
    }
    Event e;
    e.t_ms = parse_int(head[0], "t_ms");
    e.kind = parse_event_kind(head[1]);
    e.object_id = parse_int(head[2], "object_id");
    while (!line.empty()) {
      const std::size_t semi = line.find(';');
      const std::string_view kv = line.substr(0, semi);
      line = semi == std::string_view::npos ? std::string_view{} : line.substr(semi + 1);
      const std::size_t eq = kv.find('=');
      if (eq == std::string_view::npos) {
        throw IntegrityError("line " + std::to_string(line_no) + ": payload item without '='");
      }
      e.payload.emplace_back(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
    }
    events.push_back(std::move(e));
  }
  check_ordered(events);
  EventLog log;
  log.events_ = std::move(events);
  return log;
}

void check_ordered(const std::vector<Event>& events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t_ms < events[i - 1].t_ms) {
      throw IntegrityError("timestamps decrease at record " + std::to_string(i + 1) +
                           " (" + std::to_string(events[i - 1].t_ms) + " -> " +
                           std::to_string(events[i].t_ms) + ")");
    }
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gresilience
