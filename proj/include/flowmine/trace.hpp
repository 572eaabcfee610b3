#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flowmine/message.hpp"

namespace flowmine {

using MsgId = std::uint32_t;
using Pos = std::uint32_t;

/// Interns message quadruples and component names so the mining passes can
/// work on small integers. Immutable entries: an id never changes meaning.
class MessageTable {
public:
  MsgId intern(const Message& m);
  std::optional<MsgId> find(const Message& m) const;
  const Message& message(MsgId id) const { return messages_[id]; }
  std::size_t size() const { return messages_.size(); }

  std::uint32_t src_comp(MsgId id) const { return src_comp_[id]; }
  std::uint32_t dest_comp(MsgId id) const { return dest_comp_[id]; }
  const std::string& component(std::uint32_t c) const { return components_[c]; }

  /// Structural causality: a's destination component is b's source component.
  bool causal(MsgId a, MsgId b) const { return dest_comp_[a] == src_comp_[b]; }

  /// Field-wise lexicographic order on message content; used wherever a
  /// deterministic order over message types is needed.
  bool content_less(MsgId a, MsgId b) const { return messages_[a] < messages_[b]; }

private:
  std::uint32_t intern_component(const std::string& name);

  std::vector<Message> messages_;
  std::vector<std::uint32_t> src_comp_;
  std::vector<std::uint32_t> dest_comp_;
  std::vector<std::string> components_;
  std::unordered_map<std::string, MsgId> by_text_;
  std::unordered_map<std::string, std::uint32_t> comp_by_name_;
};

/// An ordered sequence of message occurrences; the position of an event is
/// its index. Immutable after parsing.
struct Trace {
  std::string id;
  std::vector<MsgId> events;

  std::size_t size() const { return events.size(); }
};

/// A set of traces sharing one interning table, so message identity is
/// consistent across traces.
struct TraceSet {
  MessageTable table;
  std::vector<Trace> traces;

  /// Parses line-oriented trace text: each message line is
  /// `(<src>:<dest>:<cmd>:<req|resp>)`, optionally prefixed by an integer
  /// label (ignored; position is line order). `#` lines and blank lines are
  /// skipped. Throws ParseError (with line number) on malformed lines and
  /// DataError on an empty trace.
  Trace& add_from_text(std::string_view text, std::string id);
  Trace& add_from_file(const std::string& path);

  std::uint64_t total_events() const;
};

/// Canonical renderer; parse(render(t)) reproduces t.
std::string render_trace(const TraceSet& set, const Trace& t);

/// Normalized unordered component pair, as interned component ids.
struct InterfaceKey {
  std::uint32_t a = 0;  // a <= b
  std::uint32_t b = 0;

  bool operator==(const InterfaceKey&) const = default;
  auto operator<=>(const InterfaceKey&) const = default;
};

InterfaceKey interface_of(const MessageTable& table, MsgId m);

struct SliceEvent {
  Pos pos = 0;  // position in the owning trace
  MsgId msg = 0;
};

/// Interface slices of one trace, keyed deterministically. Every event lands
/// in exactly one slice and keeps its original position.
using Slices = std::map<InterfaceKey, std::vector<SliceEvent>>;

Slices slice(const TraceSet& set, const Trace& t);

}  // namespace flowmine
