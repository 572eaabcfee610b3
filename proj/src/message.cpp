#include "flowmine/message.hpp"

#include <algorithm>

#include "flowmine/errors.hpp"

namespace flowmine {

std::string_view to_string(MessageKind kind) {
  return kind == MessageKind::request ? "req" : "resp";
}

std::string to_string(const Message& m) {
  std::string out;
  out.reserve(m.src.size() + m.dest.size() + m.cmd.size() + 12);
  out += '(';
  out += m.src;
  out += ':';
  out += m.dest;
  out += ':';
  out += m.cmd;
  out += ':';
  out += to_string(m.kind);
  out += ')';
  return out;
}

Message parse_message(std::string_view text) {
  auto fail = [&](const char* why) -> Message {
    throw ParseError(std::string(why) + ": '" + std::string(text) + "'");
  };

  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    fail("expected '(src:dest:cmd:req|resp)'");
  std::string_view body = text.substr(1, text.size() - 2);

  std::string fields[4];
  std::size_t field = 0;
  for (char c : body) {
    if (c == ':') {
      if (++field > 3) fail("too many fields");
    } else {
      fields[field] += c;
    }
  }
  if (field != 3) fail("expected four ':'-separated fields");
  for (const auto& f : fields)
    if (f.empty()) fail("empty field");

  Message m;
  m.src = fields[0];
  m.dest = fields[1];
  m.cmd = fields[2];
  if (fields[3] == "req")
    m.kind = MessageKind::request;
  else if (fields[3] == "resp")
    m.kind = MessageKind::response;
  else
    fail("kind must be 'req' or 'resp'");
  return m;
}

InterfaceId InterfaceId::of(const Message& m) {
  InterfaceId id{m.src, m.dest};
  if (id.b < id.a) std::swap(id.a, id.b);
  return id;
}

}  // namespace flowmine
