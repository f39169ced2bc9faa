#pragma once

// Deterministic counter monitors over the signature <0, +1, <=>: finitely
// many locations, natural-valued registers, guarded edges, and an output
// emitted after every event.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freqmon/alphabet.hpp"

namespace freqmon {

/// `register + add`, or the constant `0 + add` when `reg` is empty.
struct Term {
  std::optional<std::size_t> reg;
  std::uint64_t add = 0;

  static Term constant(std::uint64_t k = 0) { return {std::nullopt, k}; }
  static Term of(std::size_t r, std::uint64_t k = 0) { return {r, k}; }

  std::uint64_t eval(std::span<const std::uint64_t> valuation) const {
    return (reg ? valuation[*reg] : 0) + add;
  }
  friend bool operator==(const Term&, const Term&) = default;
};

enum class Relation { kLessEq, kGreater };

struct Comparison {
  Term lhs;
  Relation rel = Relation::kLessEq;
  Term rhs;

  bool holds(std::span<const std::uint64_t> valuation) const {
    const bool le = lhs.eval(valuation) <= rhs.eval(valuation);
    return rel == Relation::kLessEq ? le : !le;
  }
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// Conjunction; no conjuncts means true.
struct Guard {
  std::vector<Comparison> conjuncts;

  bool holds(std::span<const std::uint64_t> valuation) const {
    for (const auto& c : conjuncts) {
      if (!c.holds(valuation)) return false;
    }
    return true;
  }
  friend bool operator==(const Guard&, const Guard&) = default;
};

/// Simultaneous assignment; registers not mentioned keep their value.
struct Update {
  std::vector<std::pair<std::size_t, Term>> assignments;
  friend bool operator==(const Update&, const Update&) = default;
};

struct Edge {
  std::size_t from = 0;
  Symbol event{};
  Guard guard;
  Update update;
  std::size_t to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Output of one location: the first case whose guard holds, else the
/// default. Values index into the output alphabet.
struct OutputRule {
  struct Case {
    Guard guard;
    std::size_t value = 0;
    friend bool operator==(const Case&, const Case&) = default;
  };
  std::size_t default_value = 0;
  std::vector<Case> cases;
  friend bool operator==(const OutputRule&, const OutputRule&) = default;
};

struct Configuration {
  std::size_t location = 0;
  std::vector<std::uint64_t> valuation;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

class CounterMonitor {
 public:
  struct Definition {
    AlphabetPtr input_alphabet;
    std::vector<std::string> output_alphabet;
    std::vector<std::string> registers;
    std::vector<std::string> locations;
    std::size_t initial = 0;
    std::vector<Edge> edges;
    /// One rule per location.
    std::vector<OutputRule> outputs;
  };

  /// Validates every index and name; throws ValidationError.
  explicit CounterMonitor(Definition def);

  const Alphabet& input_alphabet() const noexcept { return *def_.input_alphabet; }
  const AlphabetPtr& input_alphabet_ptr() const noexcept {
    return def_.input_alphabet;
  }
  const Definition& definition() const noexcept { return def_; }
  std::size_t register_count() const noexcept { return def_.registers.size(); }

  Configuration initial_configuration() const;
  /// The output value λ(q, v).
  const std::string& output(const Configuration& c) const;

  /// Takes the unique enabled edge. Throws DeterminismError when zero or
  /// more than one edge is enabled.
  Configuration step(const Configuration& c, Symbol event) const;

  friend bool operator==(const CounterMonitor& a, const CounterMonitor& b);

 private:
  Definition def_;
  // edges_by_[location * |Σ| + event] lists candidate edge indices.
  std::vector<std::vector<std::size_t>> edges_by_;
};

struct RunResult {
  /// outputs[i] is the output after consuming the first i+1 letters.
  std::vector<std::string> outputs;
  Configuration final;
};

RunResult run(const CounterMonitor& m, const Word& w);
/// ⟦m⟧(w): the output of the final configuration (defined on ε).
std::string evaluate(const CounterMonitor& m, const Word& w);

inline std::size_t register_count(const CounterMonitor& m) {
  return m.register_count();
}

/// Real-time mode monitor with one counter per letter. Outputs symbol names
/// or kBottomText.
CounterMonitor naive_mode_machine(const AlphabetPtr& alphabet);

std::string to_json(const CounterMonitor& m);
CounterMonitor counter_monitor_from_json(std::string_view text);

}  // namespace freqmon
