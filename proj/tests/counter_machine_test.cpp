#include <gtest/gtest.h>

#include "freqmon/counter_machine.hpp"
#include "freqmon/error.hpp"
#include "oracles.hpp"

namespace freqmon {
namespace {

CounterMonitor single_counter(AlphabetPtr al, Term update) {
  CounterMonitor::Definition def;
  def.input_alphabet = std::move(al);
  def.output_alphabet = {"out"};
  def.registers = {"r"};
  def.locations = {"q"};
  for (std::size_t s = 0; s < def.input_alphabet->size(); ++s) {
    Update u;
    if (s == 0) u.assignments = {{0, update}};
    def.edges.push_back({0, Symbol{static_cast<std::uint32_t>(s)}, {}, u, 0});
  }
  def.outputs = {OutputRule{}};
  return CounterMonitor(std::move(def));
}

CounterMonitor swap_machine() {
  CounterMonitor::Definition def;
  def.input_alphabet = Alphabet::create({"a"}, false);
  def.output_alphabet = {"out"};
  def.registers = {"r1", "r2"};
  def.locations = {"q"};
  def.edges.push_back({0, Symbol{0}, {}, Update{{{0, Term::of(1)}, {1, Term::of(0)}}}, 0});
  def.outputs = {OutputRule{}};
  return CounterMonitor(std::move(def));
}

TEST(CounterMachineTest, IncrementAndReset) {
  auto al = Alphabet::create({"a"}, false);
  const auto inc = single_counter(al, Term::of(0, 1));
  EXPECT_EQ(inc.step({0, {0}}, Symbol{0}).valuation, std::vector<std::uint64_t>{1});
  const auto reset = single_counter(al, Term::constant(0));
  EXPECT_EQ(reset.step({0, {5}}, Symbol{0}).valuation, std::vector<std::uint64_t>{0});
}

TEST(CounterMachineTest, UpdatesAreSimultaneous) {
  const auto m = swap_machine();
  const Configuration start{0, {2, 7}};
  const Configuration once = m.step(start, Symbol{0});
  // Sequential-copy oracle: tmp := r1; r1 := r2; r2 := tmp.
  std::vector<std::uint64_t> expect = start.valuation;
  const auto tmp = expect[0];
  expect[0] = expect[1];
  expect[1] = tmp;
  EXPECT_EQ(once.valuation, expect);
  EXPECT_EQ(m.step(once, Symbol{0}), start);
}

TEST(CounterMachineTest, DeterminismViolations) {
  auto al = Alphabet::create({"a"}, false);
  CounterMonitor::Definition def;
  def.input_alphabet = al;
  def.output_alphabet = {"o"};
  def.registers = {"r"};
  def.locations = {"q"};
  // r <= 2 and r > 1 overlap at r = 2. Dropping the second edge leaves a
  // gap above 2.
  def.edges.push_back({0, Symbol{0},
                       Guard{{{Term::of(0), Relation::kLessEq, Term::constant(2)}}},
                       Update{{{0, Term::of(0, 1)}}}, 0});
  def.edges.push_back({0, Symbol{0},
                       Guard{{{Term::of(0), Relation::kGreater, Term::constant(1)}}},
                       Update{}, 0});
  def.outputs = {OutputRule{}};
  const CounterMonitor overlap(def);
  EXPECT_NO_THROW(overlap.step({0, {0}}, Symbol{0}));
  try {
    overlap.step({0, {2}}, Symbol{0});
    FAIL() << "expected DeterminismError";
  } catch (const DeterminismError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("location 'q'"), std::string::npos);
    EXPECT_NE(what.find("event 'a'"), std::string::npos);
    EXPECT_NE(what.find("r=2"), std::string::npos);
  }

  def.edges.pop_back();
  const CounterMonitor gap(def);
  EXPECT_THROW(gap.step({0, {3}}, Symbol{0}), DeterminismError);
  EXPECT_THROW(run(gap, parse_word("a a a a", al)), DeterminismError);
}

TEST(CounterMachineTest, RunSemantics) {
  auto al = Alphabet::create({"a", "b"}, false);
  const auto m = single_counter(al, Term::of(0, 1));
  const RunResult empty = run(m, Word(al));
  EXPECT_TRUE(empty.outputs.empty());
  EXPECT_EQ(empty.final, m.initial_configuration());
  EXPECT_EQ(empty.final.valuation, std::vector<std::uint64_t>{0});

  const RunResult r = run(m, parse_word("a a b a", al));
  EXPECT_EQ(r.outputs.size(), 4u);
  EXPECT_EQ(r.final.valuation[0], 3u);
}

TEST(CounterMachineTest, RejectsMalformedDefinitions) {
  auto al = Alphabet::create({"a"}, false);
  CounterMonitor::Definition def;
  def.input_alphabet = al;
  def.output_alphabet = {"o"};
  def.registers = {"r"};
  def.locations = {"q"};
  def.outputs = {OutputRule{}};
  def.edges.push_back({0, Symbol{0}, {}, Update{{{3, Term::constant()}}}, 0});
  EXPECT_THROW(CounterMonitor{def}, ValidationError);
  def.edges = {{0, Symbol{0}, {}, {}, 4}};
  EXPECT_THROW(CounterMonitor{def}, ValidationError);
  def.edges = {};
  def.outputs = {};
  EXPECT_THROW(CounterMonitor{def}, ValidationError);
}

TEST(NaiveModeMachineTest, RegisterCount) {
  std::vector<std::string> letters;
  for (char c = 'a'; c <= 'z'; ++c) letters.emplace_back(1, c);
  EXPECT_EQ(register_count(naive_mode_machine(Alphabet::create(letters, false))), 26u);
  EXPECT_EQ(register_count(naive_mode_machine(Alphabet::create({"a", "b", "c"}, false))), 3u);

  CounterMonitor::Definition def;
  def.input_alphabet = Alphabet::create({"a"}, false);
  def.output_alphabet = {"o"};
  def.locations = {"q"};
  def.edges.push_back({0, Symbol{0}, {}, {}, 0});
  def.outputs = {OutputRule{}};
  EXPECT_EQ(register_count(CounterMonitor(def)), 0u);
}

TEST(NaiveModeMachineTest, FixedWordPerPrefix) {
  auto al = Alphabet::create({"a", "b", "c"}, false);
  const auto m = naive_mode_machine(al);
  const RunResult r = run(m, parse_word("c b b a b a c a a b c a c a a a", al));
  const std::vector<std::string> expected = {
      "c", "_bot_", "b", "b", "b", "b", "b", "_bot_",
      "a", "_bot_", "_bot_", "a", "a", "a", "a", "a"};
  EXPECT_EQ(r.outputs, expected);
  EXPECT_EQ(evaluate(m, Word(al)), "_bot_");
}

TEST(NaiveModeMachineTest, ShortWord) {
  auto al = Alphabet::create({"a", "b"}, false);
  const RunResult r = run(naive_mode_machine(al), parse_word("a b a", al));
  EXPECT_EQ(r.outputs, (std::vector<std::string>{"a", "_bot_", "a"}));
}

TEST(NaiveModeMachineTest, ExhaustiveAgainstModeOracle) {
  for (int k = 1; k <= 3; ++k) {
    std::vector<std::string> names;
    for (int s = 0; s < k; ++s) names.push_back(std::string(1, static_cast<char>('a' + s)));
    auto al = Alphabet::create(names, false);
    const auto m = naive_mode_machine(al);
    oracle::for_each_word(k, 8, [&](const oracle::Letters& w) {
      if (w.empty()) return;
      Configuration c = m.initial_configuration();
      oracle::Letters pre;
      for (int x : w) {
        c = m.step(c, Symbol{static_cast<std::uint32_t>(x)});
        pre.push_back(x);
        const int want = oracle::mode(pre, k);
        ASSERT_EQ(m.output(c), want < 0 ? std::string("_bot_") : names[want]);
      }
    });
  }
}

TEST(CounterMachineTest, RunIsDeterministic) {
  auto al = Alphabet::create({"a", "b", "c"}, false);
  const auto m = naive_mode_machine(al);
  const Word w = parse_word("a b c c a b b b a c", al);
  const RunResult r1 = run(m, w);
  const RunResult r2 = run(m, w);
  EXPECT_EQ(r1.outputs, r2.outputs);
  EXPECT_EQ(r1.final, r2.final);
}

// Random deterministic machines: each (location, event) gets a threshold
// split "r_j <= t" / "r_j > t", which is always exactly one enabled edge.
TEST(CounterMachineTest, FuzzedMachinesKeepNaturalValuations) {
  oracle::Lcg rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nloc = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t nreg = static_cast<std::size_t>(rng.uniform(1, 3));
    auto al = Alphabet::create({"a", "b"}, false);
    CounterMonitor::Definition def;
    def.input_alphabet = al;
    def.output_alphabet = {"lo", "hi"};
    for (std::size_t r = 0; r < nreg; ++r) def.registers.push_back("r" + std::to_string(r));
    for (std::size_t q = 0; q < nloc; ++q) def.locations.push_back("q" + std::to_string(q));
    auto random_update = [&] {
      Update u;
      for (std::size_t r = 0; r < nreg; ++r) {
        switch (rng.uniform(0, 3)) {
          case 0: break;
          case 1: u.assignments.emplace_back(r, Term::constant(0)); break;
          case 2: u.assignments.emplace_back(r, Term::of(static_cast<std::size_t>(rng.uniform(0, static_cast<int>(nreg) - 1)), static_cast<std::uint64_t>(rng.uniform(0, 2)))); break;
          default: u.assignments.emplace_back(r, Term::of(r, 1)); break;
        }
      }
      return u;
    };
    for (std::size_t q = 0; q < nloc; ++q) {
      for (std::uint32_t s = 0; s < 2; ++s) {
        const std::size_t reg = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(nreg) - 1));
        const auto t = static_cast<std::uint64_t>(rng.uniform(0, 4));
        def.edges.push_back({q, Symbol{s}, Guard{{{Term::of(reg), Relation::kLessEq, Term::constant(t)}}},
                             random_update(), static_cast<std::size_t>(rng.uniform(0, static_cast<int>(nloc) - 1))});
        def.edges.push_back({q, Symbol{s}, Guard{{{Term::of(reg), Relation::kGreater, Term::constant(t)}}},
                             random_update(), static_cast<std::size_t>(rng.uniform(0, static_cast<int>(nloc) - 1))});
      }
      OutputRule rule;
      rule.cases.push_back({Guard{{{Term::of(0), Relation::kGreater, Term::constant(3)}}}, 1});
      def.outputs.push_back(rule);
    }
    const CounterMonitor m(def);
    Word w(al);
    for (int i = 0; i < 40; ++i) w.push_back(Symbol{static_cast<std::uint32_t>(rng.uniform(0, 1))});
    const RunResult a = run(m, w);
    const RunResult b = run(m, w);
    ASSERT_EQ(a.outputs, b.outputs);
    ASSERT_EQ(a.final, b.final);
    ASSERT_EQ(a.final.valuation.size(), nreg);
    // Values are bounded by 2 * |w| + 2 since each step adds at most 2.
    for (auto v : a.final.valuation) ASSERT_LE(v, 2u * w.size() + 2u);
  }
}

TEST(CounterMachineJsonTest, RoundTrip) {
  auto al = Alphabet::create({"a", "b", "c"}, true);
  const auto m = naive_mode_machine(al);
  const std::string text = to_json(m);
  const CounterMonitor back = counter_monitor_from_json(text);
  EXPECT_TRUE(back == m);
  EXPECT_EQ(to_json(back), text);
  const Word w = parse_word("c b b a b a c a a", al);
  const Word w2 = parse_word("c b b a b a c a a", back.input_alphabet_ptr());
  EXPECT_EQ(run(m, w).outputs, run(back, w2).outputs);
}

TEST(CounterMachineJsonTest, Errors) {
  EXPECT_THROW(counter_monitor_from_json("{"), ValidationError);
  EXPECT_THROW(counter_monitor_from_json("{}"), ValidationError);
  auto al = Alphabet::create({"a"}, false);
  std::string text = to_json(naive_mode_machine(al));
  const auto pos = text.find("\"n_a\"", text.find("\"edges\""));
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 5, "\"zz\"");
  EXPECT_THROW(counter_monitor_from_json(text), ValidationError);
}

}  // namespace
}  // namespace freqmon
