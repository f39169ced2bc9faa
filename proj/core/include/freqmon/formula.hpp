#pragma once

// Frequency formulas: Boolean combinations of strict linear inequalities
//   Σ_σ α_σ · f_σ > α        (integer α's)
// over the letter frequencies of a word.
//
// Concrete syntax:
//   formula := or
//   or      := and { "|" and }
//   and     := unary { "&" unary }
//   unary   := "!" unary | "(" formula ")" | atom
//   atom    := linexpr (">" | "<") linexpr
//   linexpr := ["-"] term { ("+" | "-") term }
//   term    := integer | integer "*" "f(" symbol ")" | "f(" symbol ")"
//
// Comparisons are normalized to ">" with all f-terms on the left and the
// constant on the right. Non-strict comparators are rejected.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "freqmon/alphabet.hpp"

namespace freqmon {

/// Σ coefficients[σ] · f_σ > rhs, with one coefficient per alphabet symbol.
struct Atom {
  std::vector<std::int64_t> coefficients;
  std::int64_t rhs = 0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct FormulaNode {
  enum class Kind { kAtom, kNot, kAnd, kOr };

  Kind kind = Kind::kAtom;
  Atom atom;                          // kAtom only
  std::vector<FormulaNode> children;  // 1 for kNot, >= 2 for kAnd / kOr

  static FormulaNode make_atom(Atom a);
  static FormulaNode make_not(FormulaNode child);
  /// A single child is returned unchanged; an empty list is rejected.
  static FormulaNode make_and(std::vector<FormulaNode> children);
  static FormulaNode make_or(std::vector<FormulaNode> children);

  friend bool operator==(const FormulaNode&, const FormulaNode&) = default;
};

struct FrequencyFormula {
  AlphabetPtr alphabet;
  FormulaNode root;

  friend bool operator==(const FrequencyFormula& a, const FrequencyFormula& b) {
    return a.alphabet == b.alphabet && a.root == b.root;
  }
};

/// Syntax error with a 1-based source location.
class FormulaSyntaxError : public std::runtime_error {
 public:
  FormulaSyntaxError(const std::string& what, std::size_t line,
                     std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Throws FormulaSyntaxError (which derives from std::runtime_error) for
/// lexical/syntax errors, non-strict comparators and integer overflow;
/// ValidationError for symbols outside the alphabet.
FrequencyFormula parse_formula(std::string_view text, AlphabetPtr alphabet);

/// Symbol names mentioned in f(...) terms, in order of first appearance.
/// Lexical errors are reported as in parse_formula.
std::vector<std::string> formula_symbols(std::string_view text);

/// Parenthesized canonical form; parse_formula(print_formula(φ)) == φ.
std::string print_formula(const FrequencyFormula& formula);

/// ∨_a ∧_{σ≠a} f_a > f_σ. Requires |Σ| >= 2.
FrequencyFormula mode_existence_formula(const AlphabetPtr& alphabet);
/// ∧_{a≠b} f_a < factor · f_b. Requires |Σ| >= 2.
FrequencyFormula disproportion_formula(const AlphabetPtr& alphabet,
                                       std::int64_t factor = 100);

/// Σ α_σ · counts[σ] > α · len, in exact integer arithmetic. len >= 1.
bool eval_atom_counts(const Atom& atom, std::span<const std::size_t> counts,
                      std::size_t len);

/// ⟦φ⟧(w) over the whole word. Requires |w| >= 1.
bool eval_formula(const FrequencyFormula& formula, const Word& w);

/// Evaluates the Boolean structure given one truth value per atom
/// occurrence, in atoms() order.
bool eval_with_atom_values(const FormulaNode& root,
                           const std::vector<bool>& values);

/// Atom occurrences in left-to-right order; duplicates kept.
std::vector<Atom> atoms(const FormulaNode& root);
inline std::vector<Atom> atoms(const FrequencyFormula& f) { return atoms(f.root); }

}  // namespace freqmon
