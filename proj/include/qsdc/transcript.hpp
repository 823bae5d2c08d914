// Ordered public log of every classical announcement in a session.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qsdc {

using json = nlohmann::json;

enum class Party { Alice, Bob, Charlie };

enum class EventKind {
  SessionMeta,           // public coordination: group count, channel labels
  MeasurementAnnounced,  // "I have Bell-measured my pair" (no outcome)
  ResultDeclared,        // a measurement outcome, published
  Inference,             // a party derived something from public data
  KeyBit,                // key material gained (counts only, never values)
  Ciphertext,            // one-time-pad ciphertext bits
};

inline std::string to_string(Party p) {
  switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::Charlie: return "charlie";
  }
  return "?";
}

inline std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::SessionMeta: return "session-meta";
    case EventKind::MeasurementAnnounced: return "measurement-announced";
    case EventKind::ResultDeclared: return "result-declared";
    case EventKind::Inference: return "inference";
    case EventKind::KeyBit: return "key-bit";
    case EventKind::Ciphertext: return "ciphertext";
  }
  return "?";
}

struct Event {
  std::uint64_t seq;
  Party party;
  EventKind kind;
  json payload;
};

class Transcript {
 public:
  void append(Party party, EventKind kind, json payload) {
    events_.push_back({next_seq_++, party, kind, std::move(payload)});
  }

  // Appends another transcript's events, renumbering their sequence.
  void extend(const Transcript& other) {
    for (const Event& e : other.events_) append(e.party, e.kind, e.payload);
  }

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  static json event_json(const Event& e) {
    return json{{"seq", e.seq},
                {"party", to_string(e.party)},
                {"kind", to_string(e.kind)},
                {"payload", e.payload}};
  }

  // One JSON record per line.
  std::string to_ndjson() const {
    std::string out;
    for (const Event& e : events_) {
      out += event_json(e).dump();
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<Event> events_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace qsdc
