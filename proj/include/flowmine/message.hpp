#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace flowmine {

enum class MessageKind { request, response };

std::string_view to_string(MessageKind kind);

/// A typed communication event between two components. Messages are compared
/// field-wise; two occurrences of the same quadruple are the same message type.
struct Message {
  std::string src;
  std::string dest;
  std::string cmd;
  MessageKind kind = MessageKind::request;

  bool operator==(const Message&) const = default;
  auto operator<=>(const Message&) const = default;
};

/// Renders "(src:dest:cmd:req)", the same form the trace parser accepts.
std::string to_string(const Message& m);

/// Parses "(src:dest:cmd:req|resp)". Throws ParseError on malformed input.
Message parse_message(std::string_view text);

/// Unordered pair of component names; the request and its response map to the
/// same interface.
struct InterfaceId {
  std::string a;  // a <= b
  std::string b;

  static InterfaceId of(const Message& m);

  bool operator==(const InterfaceId&) const = default;
  auto operator<=>(const InterfaceId&) const = default;
};

/// User-provided initial and terminal message sets. Both must be non-empty
/// for mining to proceed.
struct RoleConfig {
  std::vector<Message> initial;
  std::vector<Message> terminal;
};

}  // namespace flowmine
