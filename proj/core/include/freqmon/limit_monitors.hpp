#pragma once

// Constant-counter limit monitors for the mode and the median.
//
// Both split the stream into consecutive chunks of length 1, 2, 3, ...; the
// n'th chunk covers positions s(n)+1 .. s(n)+n with s(n) = n(n-1)/2. Inside
// a chunk only a fixed number of counters is maintained, and the candidate
// is revised at chunk boundaries.

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "freqmon/alphabet.hpp"

namespace freqmon {

/// s(n) = n(n-1)/2, the number of positions before chunk n (n >= 1).
constexpr std::uint64_t schedule_offset(std::uint64_t n) noexcept {
  return n * (n - 1) / 2;
}

/// Position of the next letter as (chunk length n, index i within chunk).
struct ChunkSchedule {
  std::uint64_t n = 1;
  std::uint64_t i = 1;

  /// Global 1-based position s(n) + i.
  constexpr std::uint64_t position() const noexcept {
    return schedule_offset(n) + i;
  }
  constexpr bool at_chunk_start() const noexcept { return i == 1; }
  constexpr void advance() noexcept {
    if (i == n) {
      ++n;
      i = 1;
    } else {
      ++i;
    }
  }
  friend constexpr bool operator==(const ChunkSchedule&,
                                   const ChunkSchedule&) = default;
};

// -- mode ---------------------------------------------------------------

/// x is the mode candidate, y its contender; c_x and c_y count them in the
/// current chunk. x and y live in the finite-state part of the monitor.
struct ModeMonitorState {
  static constexpr std::size_t kCounterRegisters = 4;
  static constexpr std::size_t kSymbolRegisters = 2;

  Symbol x{};
  Symbol y{};
  std::uint64_t c_x = 0;
  std::uint64_t c_y = 0;
  ChunkSchedule sched;

  std::array<std::uint64_t, kCounterRegisters> counters() const noexcept {
    return {c_x, c_y, sched.n, sched.i};
  }
  std::array<Symbol, kSymbolRegisters> symbol_registers() const noexcept {
    return {x, y};
  }
  friend bool operator==(const ModeMonitorState&,
                         const ModeMonitorState&) = default;
};

/// First letter. The first letter is not counted (c_x = c_y = 0).
std::pair<ModeMonitorState, Symbol> mode_init(Symbol first);
std::pair<ModeMonitorState, Symbol> mode_next(ModeMonitorState st, Symbol s);

// -- median -------------------------------------------------------------

/// c1: letters ≺ x, c2: letters ⪰ x, c3: letters ≻ x, c4: letters ⪯ x.
struct MedianMonitorState {
  static constexpr std::size_t kCounterRegisters = 6;
  static constexpr std::size_t kSymbolRegisters = 1;

  Symbol x{};
  std::uint64_t c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  ChunkSchedule sched;

  std::array<std::uint64_t, kCounterRegisters> counters() const noexcept {
    return {c1, c2, c3, c4, sched.n, sched.i};
  }
  friend bool operator==(const MedianMonitorState&,
                         const MedianMonitorState&) = default;
};

/// Throws ValidationError if the alphabet is not ordered.
std::pair<MedianMonitorState, Symbol> median_init(const Alphabet& alphabet,
                                                  Symbol first);
/// At a chunk start: x moves down if c1 >= c2, then up if c3 >= c4 (both
/// tests on the finished chunk's counters), saturating at the ends of the
/// order; counters reset. Then the letter is counted against the new x.
std::pair<MedianMonitorState, Symbol> median_next(const Alphabet& alphabet,
                                                  MedianMonitorState st,
                                                  Symbol s);

// -- streaming interface ------------------------------------------------

template <class M>
concept StreamingMonitor = requires(M m, const M cm, Symbol s) {
  m.push(s);
  { cm.started() } -> std::same_as<bool>;
  cm.output();
};

class ModeMonitor {
 public:
  void push(Symbol s);
  bool started() const noexcept { return state_.has_value(); }
  /// Requires started().
  Symbol output() const { return output_; }
  const std::optional<ModeMonitorState>& state() const noexcept { return state_; }

 private:
  std::optional<ModeMonitorState> state_;
  Symbol output_{};
};

class MedianMonitor {
 public:
  /// Throws ValidationError if the alphabet is not ordered.
  explicit MedianMonitor(AlphabetPtr alphabet);
  void push(Symbol s);
  bool started() const noexcept { return state_.has_value(); }
  Symbol output() const { return output_; }
  const std::optional<MedianMonitorState>& state() const noexcept {
    return state_;
  }

 private:
  AlphabetPtr alphabet_;
  std::optional<MedianMonitorState> state_;
  Symbol output_{};
};

static_assert(StreamingMonitor<ModeMonitor>);
static_assert(StreamingMonitor<MedianMonitor>);

enum class MonitorKind { kMode, kMedian };

/// outputs[i] is the verdict after w_{..i+1}. Requires |w| >= 1.
std::vector<Symbol> run_monitor(MonitorKind kind, const Word& w);

}  // namespace freqmon
