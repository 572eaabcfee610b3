#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "flowmine/errors.hpp"
#include "flowmine/synth.hpp"
#include "flowmine/trace.hpp"
#include "support/fixtures.hpp"

using namespace flowmine;
using namespace fixtures;

TEST_CASE("message parsing and rendering") {
  Message m = parse_message("(cpu0:cache:rd:req)");
  CHECK(m.src == "cpu0");
  CHECK(m.dest == "cache");
  CHECK(m.cmd == "rd");
  CHECK(m.kind == MessageKind::request);
  CHECK(to_string(m) == "(cpu0:cache:rd:req)");

  CHECK(parse_message("(mem:cache:rd:resp)").kind == MessageKind::response);

  CHECK_THROWS_AS(parse_message("(a:b:c:x)"), ParseError);
  CHECK_THROWS_AS(parse_message("(a:b:c)"), ParseError);
  CHECK_THROWS_AS(parse_message("a:b:c:req"), ParseError);
  CHECK_THROWS_AS(parse_message("(a::c:req)"), ParseError);
}

TEST_CASE("trace parsing assigns positions in line order") {
  TraceSet s;
  const Trace& t = s.add_from_text("(cpu0:cache:rd:req)\n(cache:cpu0:rd:resp)", "two");
  REQUIRE(t.size() == 2);
  CHECK(s.table.message(t.events[0]) == msgs()[1]);
  CHECK(s.table.message(t.events[1]) == msgs()[2]);
}

TEST_CASE("empty trace is rejected") {
  TraceSet s;
  CHECK_THROWS_WITH_AS(s.add_from_text("", "e"), doctest::Contains("empty trace"), DataError);
  CHECK_THROWS_AS(s.add_from_text("# only a comment\n\n", "e"), DataError);
}

TEST_CASE("labels are cosmetic, comments and blanks are skipped") {
  TraceSet s;
  const Trace& t = s.add_from_text("# header\n1 (cpu0:cache:rd:req)\n\n42 (cache:cpu0:rd:resp)\r\n(cpu0:cache:rd:req)\n",
                                   "labeled");
  REQUIRE(t.size() == 3);
  CHECK(s.table.message(t.events[0]) == msgs()[1]);
  CHECK(s.table.message(t.events[1]) == msgs()[2]);
  CHECK(s.table.message(t.events[2]) == msgs()[1]);
}

TEST_CASE("malformed line reports its line number") {
  TraceSet s;
  try {
    s.add_from_text("(cpu0:cache:rd:req)\n(bad line\n", "bad");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("the fourteen-line example trace parses with expected endpoints") {
  TraceSet s = set_from_digits(kTrace1, "t1");
  const Trace& t = s.traces[0];
  REQUIRE(t.size() == 14);
  CHECK(s.table.message(t.events[0]) == msgs()[3]);
  CHECK(s.table.message(t.events[13]) == msgs()[4]);
}

TEST_CASE("interface identity is unordered and kind-independent") {
  TraceSet s = set_from_digits("1253", "t");
  MsgId m1 = *s.table.find(msgs()[1]);
  MsgId m2 = *s.table.find(msgs()[2]);
  MsgId m5 = *s.table.find(msgs()[5]);
  CHECK(interface_of(s.table, m1) == interface_of(s.table, m2));
  CHECK(interface_of(s.table, m1) != interface_of(s.table, m5));
  CHECK(InterfaceId::of(msgs()[1]) == InterfaceId::of(msgs()[2]));
  CHECK(InterfaceId::of(msgs()[5]).a == "cache");
  CHECK(InterfaceId::of(msgs()[5]).b == "mem");
}

TEST_CASE("slicing the interleaved example trace") {
  TraceSet s = set_from_digits(kTrace4, "t4");
  Slices slices = slice(s, s.traces[0]);
  REQUIRE(slices.size() == 3);

  std::map<std::vector<int>, std::vector<Pos>> seqs;
  for (const auto& [iface, events] : slices) {
    std::vector<int> digits;
    std::vector<Pos> positions;
    for (const auto& e : events) {
      digits.push_back(digit_of(s, e.msg));
      positions.push_back(e.pos);
    }
    seqs[digits] = positions;
  }
  CHECK(seqs.count(std::vector<int>{1, 2, 1, 2}));
  CHECK(seqs.count(std::vector<int>{3, 4, 3, 4}));
  CHECK(seqs.count(std::vector<int>{5, 6, 5, 6}));
}

TEST_CASE("slice of the first example trace keeps original positions") {
  TraceSet s = set_from_digits(kTrace1, "t1");
  Slices slices = slice(s, s.traces[0]);
  InterfaceKey cpu0_cache = interface_of(s.table, *s.table.find(msgs()[1]));
  const auto& events = slices.at(cpu0_cache);
  std::vector<Pos> positions;
  for (const auto& e : events) positions.push_back(e.pos);
  CHECK(positions == std::vector<Pos>{1, 2, 6, 9, 10, 11});
}

TEST_CASE("single-message trace yields one slice") {
  TraceSet s = set_from_digits("1", "one");
  Slices slices = slice(s, s.traces[0]);
  REQUIRE(slices.size() == 1);
  CHECK(slices.begin()->second.size() == 1);
}

TEST_CASE("slicing partitions generated traces and preserves order") {
  auto flows = builtin_flows(Profile::large);
  for (std::uint64_t seed : {1ull, 7ull, 23ull}) {
    Generated gen = generate(flows, 5, seed, InterleaveMode::random_interleave);
    const Trace& t = gen.traces.traces[0];
    Slices slices = slice(gen.traces, t);

    std::size_t total = 0;
    std::set<Pos> seen;
    for (const auto& [iface, events] : slices) {
      total += events.size();
      Pos prev = 0;
      bool first = true;
      for (const auto& e : events) {
        CHECK(interface_of(gen.traces.table, e.msg) == iface);
        CHECK(seen.insert(e.pos).second);  // no event in two slices
        if (!first) CHECK(e.pos > prev);   // original order preserved
        prev = e.pos;
        first = false;
      }
    }
    CHECK(total == t.size());
  }
}

TEST_CASE("render/parse round-trip") {
  auto flows = builtin_flows(Profile::small);
  Generated gen = generate(flows, 4, 99, InterleaveMode::random_interleave);
  std::string text = render_trace(gen.traces, gen.traces.traces[0]);

  TraceSet reparsed;
  const Trace& t = reparsed.add_from_text(text, "rt");
  REQUIRE(t.size() == gen.traces.traces[0].size());
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(reparsed.table.message(t.events[i]) ==
          gen.traces.table.message(gen.traces.traces[0].events[i]));
  CHECK(render_trace(reparsed, t) == text);
}
