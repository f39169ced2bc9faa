#pragma once

// Seeded experiments for the ergodic behaviour of prefix and infix letter
// frequencies, the triangular-array law of large numbers, first-visit times
// inside chunks, and the finite-length mode error rate of i.i.d. words.
// Every experiment is a pure function of its parameters and seed.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freqmon/alphabet.hpp"
#include "freqmon/markov.hpp"

namespace freqmon {

struct SeriesRow {
  std::uint64_t index = 0;
  double value = 0;
  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

struct Series {
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<SeriesRow> rows;
  /// Indices whose value is censored (see first_visit_ratio).
  std::vector<std::uint64_t> censored;

  friend bool operator==(const Series&, const Series&) = default;
};

/// Probability distribution over real values.
struct FiniteDistribution {
  std::vector<std::pair<double, double>> support;  // (value, probability)

  /// Throws ValidationError unless probabilities are >= 0 and sum to 1
  /// within 1e-12.
  void validate() const;
  double mean() const;
};

/// Parses "v1:p1,v2:p2,..." (probabilities may be "p/q" fractions).
FiniteDistribution parse_distribution(std::string_view text);

/// value[n] = |w_{..n}|_σ / n for n = 1..|w|.
Series prefix_convergence(const Word& w, Symbol sigma);
Series prefix_convergence(const MarkovChain& chain, Symbol sigma,
                          std::size_t steps, std::uint64_t seed);

/// value[n] = |w_{s(n)+1..s(n)+n}|_σ / n for every chunk n fully inside w.
Series infix_convergence(const Word& w, Symbol sigma);
Series infix_convergence(const MarkovChain& chain, Symbol sigma,
                         std::size_t levels, std::uint64_t seed);

/// value[n] = S_n / n where row n holds n fresh i.i.d. draws. Row n is
/// generated from mix_seed(seed, n), so rows are mutually independent and
/// any row can be recomputed alone.
Series triangular_lln(const FiniteDistribution& dist, std::size_t levels,
                      std::uint64_t seed);
double triangular_lln_row(const FiniteDistribution& dist, std::size_t n,
                          std::uint64_t seed);

/// value[n] = T_0^n / n, the first visit to q inside chunk n over n. When
/// q does not occur inside the chunk the row records n / n = 1 and its
/// index is listed in Series::censored.
Series first_visit_ratio(const SampleTrace& trace, StateId q);
Series first_visit_ratio(const MarkovChain& chain, StateId q,
                         std::size_t levels, std::uint64_t seed);

/// Mean of values with index in [lo, hi], censored rows excluded.
std::optional<double> mean_uncensored(const Series& s, std::uint64_t lo,
                                      std::uint64_t hi);

struct ModeRate {
  double empirical = 0;  // fraction of trials whose mode is a
  double bound = 0;      // 1 - ρ^⌊n/2⌋
  double rho = 0;        // 1 - (2 p(a) - 1)^2
  std::size_t successes = 0;
  std::size_t trials = 0;

  /// Binomial standard error sqrt(bound (1 - bound) / trials).
  double standard_error() const;
};

/// Lower bound on P(mode(w_{..n}) = a) for i.i.d. words over {a, b}.
double mode_rate_bound(double pa, std::size_t n);

/// Throws ValidationError unless 1/2 < p(a) <= 1. Ties count as failures.
ModeRate mode_error_rate(double pa, std::size_t n, std::size_t trials,
                         std::uint64_t seed);

/// "# key=value" preamble (experiment, seed, parameters, censored), then
/// "index,value" rows with 17 significant digits.
void emit_csv(const Series& series, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void emit_csv(const Series& series, const std::filesystem::path& path);
Series parse_series_csv(std::istream& in);

}  // namespace freqmon
