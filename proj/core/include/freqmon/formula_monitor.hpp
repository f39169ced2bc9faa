#pragma once

// Four-counter limit monitor for an arbitrary frequency formula.
//
// With k atom occurrences φ_1..φ_k, the stream is cut into consecutive
// infixes: level n consists of k infixes of length n, the j'th one used to
// evaluate φ_j; then level n+1 follows. Inside an infix each letter σ adds
// d = α_σ - α to c_pos (d > 0) or -d to c_neg. At the end of the infix the
// atom's truth is c_pos > c_neg; after the k'th infix of a level the whole
// formula is re-evaluated over the cached truths.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "freqmon/formula.hpp"

namespace freqmon {

struct FormulaMonitorState {
  static constexpr std::size_t kCounterRegisters = 4;

  // Unbounded counters.
  std::uint64_t c_pos = 0;
  std::uint64_t c_neg = 0;
  std::uint64_t n = 1;  // infix length of the current level
  std::uint64_t i = 1;  // position of the next letter within its infix

  // Finite-state component (bounded by the formula).
  std::size_t atom_index = 0;
  std::vector<bool> truth_cache;
  bool current_output = false;

  std::array<std::uint64_t, kCounterRegisters> counters() const noexcept {
    return {c_pos, c_neg, n, i};
  }
  friend bool operator==(const FormulaMonitorState&,
                         const FormulaMonitorState&) = default;
};

/// Reported when a letter completes an infix.
struct InfixVerdict {
  std::uint64_t level = 0;  // infix length n
  std::size_t atom = 0;     // 0-based atom occurrence
  bool truth = false;
};

struct FormulaStep {
  bool output = false;
  std::optional<InfixVerdict> completed;
};

class FormulaMonitor {
 public:
  /// Throws ValidationError if the formula has no atoms or an increment
  /// α_σ - α overflows.
  explicit FormulaMonitor(FrequencyFormula formula);

  FormulaStep next(Symbol s);
  /// False until the first level completes.
  bool output() const noexcept { return state_.current_output; }
  const FormulaMonitorState& state() const noexcept { return state_; }
  std::size_t atom_count() const noexcept { return atom_count_; }
  const FrequencyFormula& formula() const noexcept { return formula_; }

 private:
  FrequencyFormula formula_;
  std::size_t atom_count_ = 0;
  std::size_t alphabet_size_ = 0;
  // increments_[j * |Σ| + σ] = α_σ - α for atom j.
  std::vector<std::int64_t> increments_;
  FormulaMonitorState state_;
};

/// Batch driver: outputs[i] is the verdict after w_{..i+1}.
std::vector<bool> run_formula_monitor(const FrequencyFormula& formula,
                                      const Word& w);

}  // namespace freqmon
