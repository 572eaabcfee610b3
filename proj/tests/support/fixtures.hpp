#pragma once

// Shared test fixtures: the six-message CPU read alphabet used by the small
// worked-example traces, and helpers to build traces from digit strings.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "flowmine/message.hpp"
#include "flowmine/trace.hpp"

namespace fixtures {

using namespace flowmine;

// 1:(cpu0:cache:rd:req) 2:(cache:cpu0:rd:resp) 3:(cpu1:cache:rd:req)
// 4:(cache:cpu1:rd:resp) 5:(cache:mem:rd:req) 6:(mem:cache:rd:resp)
inline const std::array<Message, 7>& msgs() {
  static const std::array<Message, 7> m = {
      Message{},
      Message{"cpu0", "cache", "rd", MessageKind::request},
      Message{"cache", "cpu0", "rd", MessageKind::response},
      Message{"cpu1", "cache", "rd", MessageKind::request},
      Message{"cache", "cpu1", "rd", MessageKind::response},
      Message{"cache", "mem", "rd", MessageKind::request},
      Message{"mem", "cache", "rd", MessageKind::response},
  };
  return m;
}

inline std::string digits_to_text(std::string_view digits) {
  std::string out;
  for (char c : digits) {
    if (c < '1' || c > '6') continue;
    out += to_string(msgs()[std::size_t(c - '0')]);
    out += '\n';
  }
  return out;
}

inline TraceSet set_from_digits(std::string_view digits, std::string id = "t") {
  TraceSet s;
  s.add_from_text(digits_to_text(digits), std::move(id));
  return s;
}

inline RoleConfig fig_roles() {
  return RoleConfig{{msgs()[1], msgs()[3]}, {msgs()[2], msgs()[4]}};
}

constexpr std::string_view kTrace1 = "31154625621234";  // (3,1,1,5,4,6,2,5,6,2,1,2,3,4)
constexpr std::string_view kTrace4 = "135264156234";     // (1,3,5,2,6,4,1,5,6,2,3,4)

inline int digit_of(const TraceSet& s, MsgId id) {
  for (int d = 1; d <= 6; ++d)
    if (s.table.message(id) == msgs()[std::size_t(d)]) return d;
  return 0;
}

inline std::vector<int> to_digits(const TraceSet& s, const std::vector<MsgId>& seq) {
  std::vector<int> out;
  for (MsgId id : seq) out.push_back(digit_of(s, id));
  return out;
}

inline std::vector<MsgId> from_digits(const TraceSet& s, std::string_view digits) {
  std::vector<MsgId> out;
  for (char c : digits) {
    if (c < '1' || c > '6') continue;
    out.push_back(*s.table.find(msgs()[std::size_t(c - '0')]));
  }
  return out;
}

}  // namespace fixtures
