#include "freqmon/alphabet.hpp"

#include <cassert>
#include <numeric>
#include <sstream>

#include "freqmon/error.hpp"

namespace freqmon {

Alphabet::Alphabet(std::vector<std::string> names, bool ordered)
    : names_(std::move(names)), ordered_(ordered) {
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    index_.emplace(names_[i], Symbol{static_cast<std::uint32_t>(i)});
  }
}

AlphabetPtr Alphabet::create(std::vector<std::string> symbols, bool ordered) {
  if (symbols.empty()) {
    throw ValidationError("alphabet must contain at least one symbol");
  }
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].empty()) {
      throw ValidationError("alphabet symbol " + std::to_string(i + 1) +
                            " has an empty name");
    }
    if (!seen.emplace(symbols[i], i).second) {
      throw ValidationError("duplicate alphabet symbol '" + symbols[i] + "'");
    }
  }
  return AlphabetPtr(new Alphabet(std::move(symbols), ordered));
}

const std::string& Alphabet::name(Symbol s) const {
  if (!contains(s)) {
    throw ValidationError("symbol index " + std::to_string(index_of(s)) +
                          " outside alphabet of size " +
                          std::to_string(size()));
  }
  return names_[index_of(s)];
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::at(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw ValidationError("unknown symbol '" + std::string(name) + "'");
}

Word::Word(AlphabetPtr alphabet, std::vector<Symbol> letters)
    : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (!alphabet_->contains(letters_[i])) {
      throw ValidationError("letter at position " + std::to_string(i + 1) +
                            " is outside the alphabet");
    }
  }
}

Symbol Word::at(std::size_t position) const {
  if (position < 1 || position > letters_.size()) {
    throw ValidationError("position " + std::to_string(position) +
                          " outside word of length " +
                          std::to_string(letters_.size()));
  }
  return letters_[position - 1];
}

void Word::push_back(Symbol s) {
  if (!alphabet_->contains(s)) {
    throw ValidationError("letter outside the alphabet");
  }
  letters_.push_back(s);
}

Word parse_word(std::string_view text, AlphabetPtr alphabet) {
  Word w(alphabet);
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) w.push_back(alphabet->at(token));
  return w;
}

std::string format_word(const Word& w) {
  std::string out;
  for (Symbol s : w.letters()) {
    if (!out.empty()) out.push_back(' ');
    out += w.alphabet().name(s);
  }
  return out;
}

std::string format_outcome(const Alphabet& alphabet, StatOutcome outcome) {
  if (!outcome) return std::string(kBottomText);
  return alphabet.name(*outcome);
}

std::size_t count(const Word& w, Symbol a) {
  if (!w.alphabet().contains(a)) {
    throw ValidationError("count: symbol outside the word's alphabet");
  }
  std::size_t n = 0;
  for (Symbol s : w.letters()) n += (s == a);
  return n;
}

std::size_t count(const Word& w, std::string_view a) {
  return count(w, w.alphabet().at(a));
}

std::vector<std::size_t> counts(const Word& w) {
  std::vector<std::size_t> c(w.alphabet().size(), 0);
  for (Symbol s : w.letters()) ++c[index_of(s)];
  return c;
}

Word infix(const Word& w, std::size_t i, std::size_t j) {
  if (i < 1 || i > j || j > w.size()) {
    throw ValidationError("infix [" + std::to_string(i) + ".." +
                          std::to_string(j) + "] invalid for word of length " +
                          std::to_string(w.size()));
  }
  auto letters = w.letters().subspan(i - 1, j - i + 1);
  return Word(w.alphabet_ptr(), {letters.begin(), letters.end()});
}

Word prefix(const Word& w, std::size_t i) {
  if (i == 0) return Word(w.alphabet_ptr());
  return infix(w, 1, i);
}

StatOutcome mode_of_counts(std::span<const std::size_t> counts) {
  StatOutcome best;
  std::size_t best_count = 0;
  bool tied = true;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!best || counts[i] > best_count) {
      best = Symbol{static_cast<std::uint32_t>(i)};
      best_count = counts[i];
      tied = false;
    } else if (counts[i] == best_count) {
      tied = true;
    }
  }
  // Over a one-letter alphabet the condition is vacuous, so even ε has a mode.
  if (tied) return std::nullopt;
  return best;
}

StatOutcome mode(const Word& w) { return mode_of_counts(counts(w)); }

StatOutcome median_of_counts(std::span<const std::size_t> counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(),
                                            std::size_t{0});
  StatOutcome result;
  std::size_t below = 0;  // Σ_{σ ≺ a}
  for (std::size_t a = 0; a < counts.size(); ++a) {
    const std::size_t at_or_below = below + counts[a];
    const std::size_t above = total - at_or_below;
    const std::size_t at_or_above = total - below;
    if (above < at_or_below && below < at_or_above) {
      assert(!result && "median must be unique");
      result = Symbol{static_cast<std::uint32_t>(a)};
    }
    below = at_or_below;
  }
  return result;
}

StatOutcome median(const Word& w) {
  if (!w.alphabet().ordered()) {
    throw ValidationError("median requires an ordered alphabet");
  }
  return median_of_counts(counts(w));
}

}  // namespace freqmon
