#include "freqmon/formula_monitor.hpp"

#include <limits>

#include "freqmon/error.hpp"

namespace freqmon {

FormulaMonitor::FormulaMonitor(FrequencyFormula formula)
    : formula_(std::move(formula)) {
  const auto list = atoms(formula_.root);
  if (list.empty()) throw ValidationError("formula monitor: formula has no atoms");
  atom_count_ = list.size();
  alphabet_size_ = formula_.alphabet->size();
  increments_.reserve(atom_count_ * alphabet_size_);
  for (const auto& a : list) {
    for (std::int64_t coef : a.coefficients) {
      std::int64_t d;
      if (__builtin_sub_overflow(coef, a.rhs, &d) ||
          d == std::numeric_limits<std::int64_t>::min()) {
        throw ValidationError("formula monitor: per-letter increment overflows");
      }
      increments_.push_back(d);
    }
  }
  state_.truth_cache.assign(atom_count_, false);
}

FormulaStep FormulaMonitor::next(Symbol s) {
  if (index_of(s) >= alphabet_size_) {
    throw ValidationError("formula monitor: letter outside the alphabet");
  }
  auto& st = state_;
  const std::int64_t d = increments_[st.atom_index * alphabet_size_ + index_of(s)];
  if (d > 0) {
    st.c_pos += static_cast<std::uint64_t>(d);
  } else {
    st.c_neg += static_cast<std::uint64_t>(-d);
  }

  FormulaStep step;
  if (st.i < st.n) {
    ++st.i;
  } else {
    const bool truth = st.c_pos > st.c_neg;
    st.truth_cache[st.atom_index] = truth;
    step.completed = InfixVerdict{st.n, st.atom_index, truth};
    st.c_pos = st.c_neg = 0;
    st.i = 1;
    if (++st.atom_index == atom_count_) {
      st.current_output = eval_with_atom_values(formula_.root, st.truth_cache);
      st.atom_index = 0;
      ++st.n;
    }
  }
  step.output = st.current_output;
  return step;
}

std::vector<bool> run_formula_monitor(const FrequencyFormula& formula,
                                      const Word& w) {
  FormulaMonitor m(formula);
  std::vector<bool> out;
  out.reserve(w.size());
  for (Symbol s : w.letters()) out.push_back(m.next(s).output);
  return out;
}

}  // namespace freqmon
