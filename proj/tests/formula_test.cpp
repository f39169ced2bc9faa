#include <gtest/gtest.h>

#include <limits>

#include "freqmon/error.hpp"
#include "freqmon/formula.hpp"
#include "oracles.hpp"

namespace freqmon {
namespace {

AlphabetPtr ab() { return Alphabet::create({"a", "b"}, false); }
AlphabetPtr abc() { return Alphabet::create({"a", "b", "c"}, false); }

Word word_with_counts(const AlphabetPtr& al, const std::vector<std::size_t>& c) {
  Word w(al);
  for (std::size_t s = 0; s < c.size(); ++s) {
    for (std::size_t k = 0; k < c[s]; ++k) w.push_back(Symbol{static_cast<std::uint32_t>(s)});
  }
  return w;
}

TEST(FormulaParseTest, SimpleComparison) {
  const auto f = parse_formula("f(a) > f(b)", ab());
  ASSERT_EQ(f.root.kind, FormulaNode::Kind::kAtom);
  EXPECT_EQ(f.root.atom, (Atom{{1, -1}, 0}));
}

TEST(FormulaParseTest, LessThanIsNormalized) {
  const auto f = parse_formula("f(a) < 100*f(b)", ab());
  ASSERT_EQ(f.root.kind, FormulaNode::Kind::kAtom);
  EXPECT_EQ(f.root.atom, (Atom{{-1, 100}, 0}));
}

TEST(FormulaParseTest, ConjunctionOfAtoms) {
  const auto f = parse_formula("(f(a) > f(b)) & (f(a) > f(c))", abc());
  ASSERT_EQ(f.root.kind, FormulaNode::Kind::kAnd);
  ASSERT_EQ(f.root.children.size(), 2u);
  EXPECT_EQ(f.root.children[0].atom, (Atom{{1, -1, 0}, 0}));
  EXPECT_EQ(f.root.children[1].atom, (Atom{{1, 0, -1}, 0}));
}

TEST(FormulaParseTest, ConstantsFoldIntoRhs) {
  const auto f = parse_formula("2*f(a) + 3 > f(b) + 1 - 5", ab());
  // 2a + 3 > b - 4 gives 2a - b > -7.
  EXPECT_EQ(f.root.atom, (Atom{{2, -1}, -7}));
  const auto g = parse_formula("-f(a) > -1", ab());
  EXPECT_EQ(g.root.atom, (Atom{{-1, 0}, -1}));
}

TEST(FormulaParseTest, PrecedenceAndNegation) {
  const auto f = parse_formula("f(a) > 0 | f(b) > 0 & !f(c) > 0", abc());
  ASSERT_EQ(f.root.kind, FormulaNode::Kind::kOr);
  ASSERT_EQ(f.root.children[1].kind, FormulaNode::Kind::kAnd);
  EXPECT_EQ(f.root.children[1].children[1].kind, FormulaNode::Kind::kNot);
}

TEST(FormulaParseTest, SyntaxErrorsCarryLocation) {
  try {
    parse_formula("f(a) >\n  f(b) >", ab());
    FAIL();
  } catch (const FormulaSyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GE(e.column(), 8u);
  }
  try {
    parse_formula("f(a) # f(b)", ab());
    FAIL();
  } catch (const FormulaSyntaxError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 6u);
  }
  EXPECT_THROW(parse_formula("(f(a) > f(b)", ab()), FormulaSyntaxError);
  EXPECT_THROW(parse_formula("", ab()), FormulaSyntaxError);
  EXPECT_THROW(parse_formula("f(a > 1", ab()), FormulaSyntaxError);
}

TEST(FormulaParseTest, UnknownSymbol) {
  try {
    parse_formula("f(a) > f(zz)", ab());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
  }
}

TEST(FormulaParseTest, NonStrictComparatorsRejected) {
  for (const char* text : {"f(a) >= f(b)", "f(a) <= f(b)", "f(a) = f(b)", "f(a) == f(b)", "f(a) != f(b)"}) {
    try {
      parse_formula(text, ab());
      FAIL() << text;
    } catch (const FormulaSyntaxError& e) {
      EXPECT_NE(std::string(e.what()).find("strict"), std::string::npos) << e.what();
    }
  }
}

TEST(FormulaParseTest, Overflow) {
  EXPECT_THROW(parse_formula("99999999999999999999*f(a) > 0", ab()), FormulaSyntaxError);
  EXPECT_THROW(parse_formula("9223372036854775807*f(a) + 9223372036854775807*f(a) > 0", ab()),
               FormulaSyntaxError);
  EXPECT_NO_THROW(parse_formula("9223372036854775807*f(a) > 0", ab()));
}

TEST(FormulaParseTest, SymbolsInOrderOfAppearance) {
  EXPECT_EQ(formula_symbols("f(b) > f(a) & f(b) > 2*f(c)"),
            (std::vector<std::string>{"b", "a", "c"}));
}

// Random comparisons "L op R" checked against direct rational evaluation
// (scaled by len) of the original sides.
TEST(FormulaParseTest, NormalizationSoundness) {
  oracle::Lcg rng(3);
  auto al = abc();
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    std::int64_t side_coef[2][3] = {};
    std::int64_t side_const[2] = {};
    for (int side = 0; side < 2; ++side) {
      const int terms = rng.uniform(1, 4);
      for (int t = 0; t < terms; ++t) {
        const bool neg = rng.uniform(0, 1) == 1;
        if (t > 0) text += neg ? " - " : " + ";
        else if (neg) text += "-";
        const int sign = neg ? -1 : 1;
        const int v = rng.uniform(0, 20);
        if (rng.uniform(0, 2) == 0) {
          text += std::to_string(v);
          side_const[side] += sign * v;
        } else {
          const int s = rng.uniform(0, 2);
          const std::string sym(1, static_cast<char>('a' + s));
          if (rng.uniform(0, 1) == 0) {
            text += "f(" + sym + ")";
            side_coef[side][s] += sign;
          } else {
            text += std::to_string(v) + "*f(" + sym + ")";
            side_coef[side][s] += sign * v;
          }
        }
      }
      if (side == 0) text += rng.uniform(0, 1) ? " > " : " < ";
    }
    const bool greater = text.find(" > ") != std::string::npos;
    const auto f = parse_formula(text, al);
    ASSERT_EQ(f.root.kind, FormulaNode::Kind::kAtom) << text;
    for (int probe = 0; probe < 5; ++probe) {
      std::vector<std::size_t> c = {static_cast<std::size_t>(rng.uniform(0, 6)),
                                    static_cast<std::size_t>(rng.uniform(0, 6)),
                                    static_cast<std::size_t>(rng.uniform(0, 6))};
      const std::size_t len = c[0] + c[1] + c[2];
      if (len == 0) continue;
      std::int64_t scaled[2];
      for (int side = 0; side < 2; ++side) {
        scaled[side] = side_const[side] * static_cast<std::int64_t>(len);
        for (int s = 0; s < 3; ++s) scaled[side] += side_coef[side][s] * static_cast<std::int64_t>(c[s]);
      }
      const bool direct = greater ? scaled[0] > scaled[1] : scaled[0] < scaled[1];
      ASSERT_EQ(eval_atom_counts(f.root.atom, c, len), direct) << text;
    }
  }
}

FormulaNode random_node(oracle::Lcg& rng, int depth, std::size_t k) {
  const int kind = depth == 0 ? 0 : rng.uniform(0, 3);
  if (kind == 0) {
    Atom a;
    for (std::size_t s = 0; s < k; ++s) a.coefficients.push_back(rng.uniform(-5, 5));
    a.rhs = rng.uniform(-5, 5);
    return FormulaNode::make_atom(a);
  }
  if (kind == 1) return FormulaNode::make_not(random_node(rng, depth - 1, k));
  std::vector<FormulaNode> kids;
  const int n = rng.uniform(2, 3);
  for (int i = 0; i < n; ++i) kids.push_back(random_node(rng, depth - 1, k));
  return kind == 2 ? FormulaNode::make_and(std::move(kids)) : FormulaNode::make_or(std::move(kids));
}

TEST(FormulaPrintTest, RoundTrip) {
  oracle::Lcg rng(8);
  auto al = abc();
  for (int trial = 0; trial < 500; ++trial) {
    const FrequencyFormula f{al, random_node(rng, rng.uniform(0, 4), al->size())};
    const std::string text = print_formula(f);
    const FrequencyFormula back = parse_formula(text, al);
    ASSERT_EQ(back, f) << text;
    ASSERT_EQ(print_formula(back), text);
  }
  EXPECT_EQ(print_formula(parse_formula("f(a) > f(b)", ab())), "(1*f(a) - 1*f(b) > 0)");
}

TEST(LibraryFormulaTest, ModeExistence) {
  const auto f2 = mode_existence_formula(ab());
  ASSERT_EQ(f2.root.kind, FormulaNode::Kind::kOr);
  EXPECT_EQ(atoms(f2), (std::vector<Atom>{{{1, -1}, 0}, {{-1, 1}, 0}}));
  for (int k = 2; k <= 6; ++k) {
    std::vector<std::string> names;
    for (int s = 0; s < k; ++s) names.push_back(std::string(1, static_cast<char>('a' + s)));
    EXPECT_EQ(atoms(mode_existence_formula(Alphabet::create(names, false))).size(),
              static_cast<std::size_t>(k * (k - 1)));
  }
  EXPECT_THROW(mode_existence_formula(Alphabet::create({"a"}, false)), ValidationError);
}

TEST(LibraryFormulaTest, ModeExistenceMatchesModeOracle) {
  auto al = abc();
  const auto f = mode_existence_formula(al);
  EXPECT_TRUE(eval_formula(f, word_with_counts(al, {8, 4, 4})));
  EXPECT_TRUE(eval_formula(f, parse_word("c b b a b", al)));
  oracle::for_each_word(3, 6, [&](const oracle::Letters& w) {
    if (w.empty()) return;
    Word word(al);
    for (int x : w) word.push_back(Symbol{static_cast<std::uint32_t>(x)});
    ASSERT_EQ(eval_formula(f, word), oracle::mode(w, 3) >= 0);
  });
}

TEST(LibraryFormulaTest, Disproportion) {
  auto al = abc();
  const auto f = disproportion_formula(al);
  EXPECT_EQ(atoms(f).size(), 6u);
  EXPECT_FALSE(eval_formula(f, word_with_counts(al, {101, 1, 0})));
  const auto two = disproportion_formula(ab());
  EXPECT_FALSE(eval_formula(two, word_with_counts(ab(), {101, 1})));
  EXPECT_TRUE(eval_formula(two, word_with_counts(ab(), {99, 1})));
  EXPECT_FALSE(eval_formula(two, word_with_counts(ab(), {100, 1})));
}

TEST(EvalTest, AtomExamples) {
  const std::vector<std::size_t> c32 = {3, 2};
  EXPECT_TRUE(eval_atom_counts(Atom{{1, -1}, 0}, c32, 5));
  const std::vector<std::size_t> c991 = {99, 1};
  EXPECT_TRUE(eval_atom_counts(Atom{{-1, 100}, 0}, c991, 100));
  const std::vector<std::size_t> c11 = {1, 1};
  EXPECT_FALSE(eval_atom_counts(Atom{{2, 0}, 1}, c11, 2));
  EXPECT_THROW(eval_atom_counts(Atom{{1, 0}, 0}, c11, 0), ValidationError);
  EXPECT_THROW(eval_formula(parse_formula("f(a) > 0", ab()), Word(ab())), ValidationError);
}

TEST(EvalTest, ExtremeCoefficientsStayExact) {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  const std::vector<std::size_t> c = {1000000, 1000000};
  EXPECT_FALSE(eval_atom_counts(Atom{{big, -big}, 0}, c, 2000000));
  EXPECT_TRUE(eval_atom_counts(Atom{{big, -big}, -1}, c, 2000000));
}

TEST(EvalTest, NegationFlips) {
  oracle::Lcg rng(12);
  auto al = abc();
  for (int trial = 0; trial < 300; ++trial) {
    const FormulaNode n = random_node(rng, 3, 3);
    const FrequencyFormula f{al, n};
    const FrequencyFormula g{al, FormulaNode::make_not(n)};
    Word w(al);
    const int len = rng.uniform(1, 12);
    for (int i = 0; i < len; ++i) w.push_back(Symbol{static_cast<std::uint32_t>(rng.uniform(0, 2))});
    ASSERT_NE(eval_formula(f, w), eval_formula(g, w));
  }
}

TEST(AtomsTest, Order) {
  auto al = ab();
  const Atom a1{{1, 0}, 0}, a2{{0, 1}, 0}, a3{{1, 1}, 1};
  const FormulaNode tree = FormulaNode::make_and(
      {FormulaNode::make_atom(a1),
       FormulaNode::make_or({FormulaNode::make_atom(a2), FormulaNode::make_atom(a3)})});
  EXPECT_EQ(atoms(tree), (std::vector<Atom>{a1, a2, a3}));
  EXPECT_EQ(atoms(FormulaNode::make_not(FormulaNode::make_atom(a1))).size(), 1u);
  const auto dup = parse_formula("f(a) > 0 & f(a) > 0", al);
  EXPECT_EQ(atoms(dup).size(), 2u);
  EXPECT_TRUE(eval_with_atom_values(tree, {true, false, true}));
  EXPECT_FALSE(eval_with_atom_values(tree, {false, true, true}));
  EXPECT_THROW(FormulaNode::make_and({}), ValidationError);
}

}  // namespace
}  // namespace freqmon
