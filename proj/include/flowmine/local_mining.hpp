#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "flowmine/trace.hpp"

namespace flowmine {

struct PatternKey {
  MsgId src = 0;
  MsgId dst = 0;

  bool operator==(const PatternKey&) const = default;
};

struct PatternKeyHash {
  std::size_t operator()(const PatternKey& k) const {
    return (std::size_t(k.src) << 32) ^ k.dst;
  }
};

struct PosPair {
  Pos src_pos = 0;
  Pos dst_pos = 0;

  bool operator==(const PosPair&) const = default;
};

/// Result of FIFO one-to-one matching of pattern (A,B) over one scope
/// (an interface slice or a whole trace): each B occurrence consumes the
/// earliest unconsumed earlier A occurrence.
struct FifoScore {
  std::uint64_t freq_pair = 0;  // matched (A,B) pairs
  std::uint64_t freq_src = 0;   // occurrences of A in scope
  std::uint64_t freq_dst = 0;   // occurrences of B in scope
  std::vector<PosPair> pairs;   // original trace positions, src < dst

  double fc() const { return freq_src ? double(freq_pair) / double(freq_src) : 0.0; }
  double bc() const { return freq_dst ? double(freq_pair) / double(freq_dst) : 0.0; }
  double mean_dist() const;
};

FifoScore fifo_match(const std::vector<Pos>& src_pos, const std::vector<Pos>& dst_pos);

/// Causal relations of one slice: ordered pairs (A,B) of distinct message
/// types with A.dest = B.src whose occurrence order supports the direction
/// (the k-th A precedes the k-th B for at least one k). Deterministic order.
std::vector<PatternKey> extract_causal_relations(const MessageTable& table,
                                                 const std::vector<SliceEvent>& slice);

/// FIFO confidence scoring of one relation within one slice.
FifoScore score(const MessageTable& table, const std::vector<SliceEvent>& slice,
                PatternKey rel);

struct ScoredCandidate {
  PatternKey key;
  double fc = 0;
  double bc = 0;
  std::uint64_t freq_pair = 0;
  double mean_dist = 0;
};

struct CoverResult {
  std::vector<PatternKey> valid;
  std::vector<PatternKey> invalid;
  std::vector<MsgId> uncovered;  // slice types no candidate touches
};

/// Minimal high-confidence cover of the slice's message types: greedy by
/// (fc+bc) descending, then freq, then content order, adding a candidate only
/// when it covers an uncovered type; a backward pass then drops candidates
/// made redundant by later picks. Non-selected candidates are invalid.
CoverResult select_valid_patterns(const MessageTable& table,
                                  const std::vector<MsgId>& slice_types,
                                  const std::vector<ScoredCandidate>& scored);

/// FIFO instance matching for a valid pattern, in original trace positions.
FifoScore match_instances(const MessageTable& table, const std::vector<SliceEvent>& slice,
                          PatternKey p);

/// One mined binary pattern, aggregated across traces (confidences are
/// arithmetic means over the traces where the pattern was observed).
struct PatternStats {
  PatternKey key;
  double fc = 0;
  double bc = 0;
  std::uint64_t freq_pair = 0;   // total matched pairs across traces
  double mean_dist = 0;          // per-trace mean distance, averaged
  bool valid = false;
};

struct LocalMiningResult {
  std::vector<PatternStats> patterns;  // content order, valid and invalid
  std::vector<MsgId> uncovered;

  /// Per trace: valid-pattern key -> matched position pairs in that trace.
  std::vector<std::unordered_map<PatternKey, std::vector<PosPair>, PatternKeyHash>> matches;

  const PatternStats* find(PatternKey key) const;
  std::vector<PatternKey> valid_keys() const;
  std::vector<PatternKey> invalid_keys() const;

private:
  friend LocalMiningResult local_mine(const TraceSet&);
  std::unordered_map<PatternKey, std::size_t, PatternKeyHash> index_;
};

/// Slices every trace, extracts and scores causal relations per interface,
/// selects the valid cover per interface (one decision across all traces),
/// and records matched instances per trace. Throws DataError on empty input.
LocalMiningResult local_mine(const TraceSet& set);

}  // namespace flowmine
