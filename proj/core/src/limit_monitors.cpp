#include "freqmon/limit_monitors.hpp"

#include "freqmon/error.hpp"

namespace freqmon {

std::pair<ModeMonitorState, Symbol> mode_init(Symbol first) {
  ModeMonitorState st;
  st.x = st.y = first;
  st.c_x = st.c_y = 0;
  st.sched = {2, 1};
  return {st, st.x};
}

std::pair<ModeMonitorState, Symbol> mode_next(ModeMonitorState st, Symbol s) {
  if (st.sched.at_chunk_start()) {
    if (st.c_x <= st.c_y) st.x = st.y;
    st.y = s;
    st.c_x = st.c_y = 0;
  }
  if (st.x == s) ++st.c_x;
  if (st.y == s) ++st.c_y;
  st.sched.advance();
  return {st, st.x};
}

namespace {

void require_ordered(const Alphabet& alphabet) {
  if (!alphabet.ordered()) {
    throw ValidationError("median monitor requires an ordered alphabet");
  }
}

Symbol pred(const Alphabet&, Symbol x) {
  return index_of(x) == 0 ? x : Symbol{index_of(x) - 1};
}

Symbol succ(const Alphabet& alphabet, Symbol x) {
  return x == alphabet.max() ? x : Symbol{index_of(x) + 1};
}

}  // namespace

std::pair<MedianMonitorState, Symbol> median_init(const Alphabet& alphabet,
                                                  Symbol first) {
  require_ordered(alphabet);
  MedianMonitorState st;
  st.x = first;
  st.sched = {2, 1};
  return {st, st.x};
}

std::pair<MedianMonitorState, Symbol> median_next(const Alphabet& alphabet,
                                                  MedianMonitorState st,
                                                  Symbol s) {
  if (st.sched.at_chunk_start()) {
    const bool down = st.c1 >= st.c2;
    const bool up = st.c3 >= st.c4;
    if (down) st.x = pred(alphabet, st.x);
    if (up) st.x = succ(alphabet, st.x);
    st.c1 = st.c2 = st.c3 = st.c4 = 0;
  }
  const auto v = index_of(s);
  const auto x = index_of(st.x);
  if (v < x) ++st.c1;
  if (v >= x) ++st.c2;
  if (v > x) ++st.c3;
  if (v <= x) ++st.c4;
  st.sched.advance();
  return {st, st.x};
}

void ModeMonitor::push(Symbol s) {
  auto [st, out] = state_ ? mode_next(*state_, s) : mode_init(s);
  state_ = st;
  output_ = out;
}

MedianMonitor::MedianMonitor(AlphabetPtr alphabet)
    : alphabet_(std::move(alphabet)) {
  require_ordered(*alphabet_);
}

void MedianMonitor::push(Symbol s) {
  auto [st, out] = state_ ? median_next(*alphabet_, *state_, s)
                          : median_init(*alphabet_, s);
  state_ = st;
  output_ = out;
}

namespace {

template <StreamingMonitor M>
std::vector<Symbol> drive(M monitor, const Word& w) {
  std::vector<Symbol> out;
  out.reserve(w.size());
  for (Symbol s : w.letters()) {
    monitor.push(s);
    out.push_back(monitor.output());
  }
  return out;
}

}  // namespace

std::vector<Symbol> run_monitor(MonitorKind kind, const Word& w) {
  if (w.empty()) throw ValidationError("run_monitor: empty word");
  switch (kind) {
    case MonitorKind::kMode:
      return drive(ModeMonitor{}, w);
    case MonitorKind::kMedian:
      return drive(MedianMonitor{w.alphabet_ptr()}, w);
  }
  throw InternalError("run_monitor: unknown monitor kind");
}

}  // namespace freqmon
