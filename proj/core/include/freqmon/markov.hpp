#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freqmon/alphabet.hpp"

namespace freqmon {

class Rng;

using StateId = std::uint32_t;

/// Finite, strongly connected, labeled Markov chain (Σ, Q, λ, π, p).
class MarkovChain {
 public:
  /// Checks row sums and the initial distribution (within 1e-9), label
  /// membership, and strong connectivity of the positive-probability graph.
  /// Throws ValidationError naming the offending element.
  MarkovChain(AlphabetPtr alphabet, std::vector<std::string> states,
              std::vector<Symbol> labels, std::vector<double> initial,
              std::vector<std::vector<double>> transition);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return states_.size(); }

  const std::string& state_name(StateId q) const { return states_.at(q); }
  std::span<const std::string> state_names() const noexcept { return states_; }
  std::optional<StateId> find_state(std::string_view name) const;
  /// Throws ValidationError for unknown names.
  StateId state(std::string_view name) const;

  Symbol label(StateId q) const { return labels_.at(q); }
  double initial(StateId q) const { return initial_.at(q); }
  double transition(StateId from, StateId to) const {
    return transition_.at(from).at(to);
  }
  const std::vector<std::vector<double>>& transition_matrix() const noexcept {
    return transition_;
  }

  StateId draw_initial(Rng& rng) const;
  StateId draw_next(StateId from, Rng& rng) const;

 private:
  AlphabetPtr alphabet_;
  std::vector<std::string> states_;
  std::vector<Symbol> labels_;
  std::vector<double> initial_;
  std::vector<std::vector<double>> transition_;
  std::vector<double> initial_cdf_;
  std::vector<std::vector<double>> transition_cdf_;
};

/// Chain JSON:
///   { "alphabet": [sym...], "ordered": bool,
///     "states": [{"name": s, "label": sym}...],
///     "initial": {s: prob...},
///     "transitions": [{"from": s, "to": s, "prob": number | "p/q"}...] }
/// Omitted transitions and initial entries are 0.
MarkovChain parse_chain(std::string_view text);

/// One state per symbol (named after it); every row equals `probs`.
/// All probabilities must be positive so the chain stays connected.
MarkovChain iid_chain(AlphabetPtr alphabet, std::span<const double> probs);

struct StationaryAnalysis {
  std::vector<double> state_frequency;   // f_q
  std::vector<double> return_time;       // m_q = 1 / f_q
  std::vector<double> letter_frequency;  // f_σ, indexed by symbol
};

/// Solves f·p = f, Σ f = 1 by Gaussian elimination with partial pivoting.
/// Throws InternalError if the residual exceeds 1e-10.
StationaryAnalysis stationary(const MarkovChain& chain);

struct SampleTrace {
  std::vector<StateId> states;
  Word word;
  std::uint64_t seed = 0;
};

/// X_1 ~ π, X_{i+1} ~ p(X_i, ·); a pure function of (chain, n, seed).
SampleTrace sample(const MarkovChain& chain, std::size_t n, std::uint64_t seed);

/// Builds a trace from explicit states, checking every step has positive
/// probability.
SampleTrace make_trace(const MarkovChain& chain, std::vector<StateId> states);

/// V_q(k) on the suffix after `offset`: #{1 <= i <= k : X_{offset+i} = q}.
std::size_t visits(const SampleTrace& trace, StateId q, std::size_t offset,
                   std::size_t k);

/// Least i >= 1 with X_{offset+i} = q, if q occurs after `offset`.
std::optional<std::size_t> first_visit(const SampleTrace& trace, StateId q,
                                       std::size_t offset);

}  // namespace freqmon
