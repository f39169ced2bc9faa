#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace freqmon {

/// Dense index of a symbol inside its alphabet. Declaration order is the
/// total order used by the median.
enum class Symbol : std::uint32_t {};

constexpr std::uint32_t index_of(Symbol s) noexcept {
  return static_cast<std::uint32_t>(s);
}

/// Value of a statistic: a symbol, or bottom (std::nullopt) when undefined.
using StatOutcome = std::optional<Symbol>;

/// Textual rendering of bottom in every external format.
inline constexpr std::string_view kBottomText = "_bot_";

class Alphabet;
using AlphabetPtr = std::shared_ptr<const Alphabet>;

/// Finite set of named events. Names are interned to dense indices.
class Alphabet {
 public:
  /// Throws ValidationError on an empty list, empty names or duplicates.
  static AlphabetPtr create(std::vector<std::string> symbols, bool ordered);

  std::size_t size() const noexcept { return names_.size(); }
  bool ordered() const noexcept { return ordered_; }

  const std::string& name(Symbol s) const;
  std::optional<Symbol> find(std::string_view name) const;
  /// Like find(), but throws ValidationError naming the unknown symbol.
  Symbol at(std::string_view name) const;
  bool contains(Symbol s) const noexcept { return index_of(s) < names_.size(); }

  std::span<const std::string> names() const noexcept { return names_; }

  Symbol min() const noexcept { return Symbol{0}; }
  Symbol max() const noexcept {
    return Symbol{static_cast<std::uint32_t>(names_.size() - 1)};
  }

 private:
  Alphabet(std::vector<std::string> names, bool ordered);

  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
  bool ordered_;
};

/// Finite word over an alphabet. Positions are 1-based in the public API.
class Word {
 public:
  explicit Word(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}
  /// Throws ValidationError if any letter is outside the alphabet.
  Word(AlphabetPtr alphabet, std::vector<Symbol> letters);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  /// w_i for 1 <= i <= |w|.
  Symbol at(std::size_t position) const;
  std::span<const Symbol> letters() const noexcept { return letters_; }

  void push_back(Symbol s);

  friend bool operator==(const Word& a, const Word& b) {
    return a.alphabet_ == b.alphabet_ && a.letters_ == b.letters_;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Symbol> letters_;
};

/// Parses whitespace-separated symbol names.
Word parse_word(std::string_view text, AlphabetPtr alphabet);
/// Space-separated names, no trailing newline.
std::string format_word(const Word& w);
std::string format_outcome(const Alphabet& alphabet, StatOutcome outcome);

/// |w|_a.
std::size_t count(const Word& w, Symbol a);
std::size_t count(const Word& w, std::string_view a);
/// Occurrence count of every symbol, indexed by symbol.
std::vector<std::size_t> counts(const Word& w);

/// w_{i..j}, 1 <= i <= j <= |w|.
Word infix(const Word& w, std::size_t i, std::size_t j);
/// w_{..i}; prefix(w, 0) is the empty word.
Word prefix(const Word& w, std::size_t i);

/// The strictly most frequent symbol, or bottom.
StatOutcome mode(const Word& w);
StatOutcome mode_of_counts(std::span<const std::size_t> counts);

/// Median under the alphabet's declaration order. Requires an ordered
/// alphabet (ValidationError otherwise).
StatOutcome median(const Word& w);
StatOutcome median_of_counts(std::span<const std::size_t> counts);

}  // namespace freqmon
