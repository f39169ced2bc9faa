#include "freqmon/markov.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "freqmon/error.hpp"
#include "freqmon/rng.hpp"
#include "freqmon/scc.hpp"

namespace freqmon {
namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kResidualTolerance = 1e-10;

std::vector<double> cdf(std::span<const double> probs) {
  std::vector<double> c(probs.size());
  std::partial_sum(probs.begin(), probs.end(), c.begin());
  return c;
}

}  // namespace

MarkovChain::MarkovChain(AlphabetPtr alphabet, std::vector<std::string> states,
                         std::vector<Symbol> labels, std::vector<double> initial,
                         std::vector<std::vector<double>> transition)
    : alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      labels_(std::move(labels)),
      initial_(std::move(initial)),
      transition_(std::move(transition)) {
  const std::size_t n = states_.size();
  if (n == 0) throw ValidationError("chain: no states");
  if (labels_.size() != n || initial_.size() != n || transition_.size() != n) {
    throw ValidationError("chain: inconsistent dimensions");
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (states_[q].empty()) throw ValidationError("chain: empty state name");
    if (std::find(states_.begin(), states_.begin() + q, states_[q]) !=
        states_.begin() + q) {
      throw ValidationError("chain: duplicate state '" + states_[q] + "'");
    }
    if (!alphabet_->contains(labels_[q])) {
      throw ValidationError("chain: label of state '" + states_[q] +
                            "' outside the alphabet");
    }
  }

  double init_sum = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (!(initial_[q] >= 0)) {
      throw ValidationError("chain: negative initial probability for state '" +
                            states_[q] + "'");
    }
    init_sum += initial_[q];
  }
  if (std::abs(init_sum - 1.0) > kSumTolerance) {
    throw ValidationError("chain: initial distribution sums to " +
                          std::to_string(init_sum) + ", expected 1");
  }

  Adjacency graph(n);
  for (std::size_t q = 0; q < n; ++q) {
    const auto& row = transition_[q];
    if (row.size() != n) throw ValidationError("chain: transition row size");
    double sum = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (!(row[r] >= 0 && row[r] <= 1)) {
        throw ValidationError("chain: transition " + states_[q] + " -> " +
                              states_[r] + " is not a probability");
      }
      sum += row[r];
      if (row[r] > 0) graph[q].push_back(r);
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw ValidationError("chain: transitions from state '" + states_[q] +
                            "' sum to " + std::to_string(sum) +
                            ", expected 1");
    }
  }
  if (!is_strongly_connected(graph)) {
    const auto comp = strongly_connected_components(graph);
    std::size_t other = 0;
    while (comp[other] == comp[0]) ++other;
    throw ValidationError("chain: not strongly connected (states '" +
                          states_[0] + "' and '" + states_[other] +
                          "' are in different components)");
  }

  initial_cdf_ = cdf(initial_);
  for (const auto& row : transition_) transition_cdf_.push_back(cdf(row));
}

std::optional<StateId> MarkovChain::find_state(std::string_view name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) return std::nullopt;
  return static_cast<StateId>(it - states_.begin());
}

StateId MarkovChain::state(std::string_view name) const {
  if (auto q = find_state(name)) return *q;
  throw ValidationError("chain: unknown state '" + std::string(name) + "'");
}

StateId MarkovChain::draw_initial(Rng& rng) const {
  return static_cast<StateId>(rng.categorical(initial_cdf_));
}

StateId MarkovChain::draw_next(StateId from, Rng& rng) const {
  return static_cast<StateId>(rng.categorical(transition_cdf_[from]));
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

double parse_probability(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) {
    throw ValidationError("chain: probability of " + where +
                          " must be a number or a \"p/q\" string");
  }
  const std::string s = v.get<std::string>();
  const auto slash = s.find('/');
  auto bad = [&] {
    return ValidationError("chain: malformed probability \"" + s + "\" for " +
                           where);
  };
  if (slash == std::string::npos) {
    std::size_t used = 0;
    double d = 0;
    try {
      d = std::stod(s, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != s.size()) throw bad();
    return d;
  }
  std::uint64_t num = 0, den = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto r1 = std::from_chars(b, b + slash, num);
  auto r2 = std::from_chars(b + slash + 1, e, den);
  if (r1.ec != std::errc{} || r1.ptr != b + slash || r2.ec != std::errc{} ||
      r2.ptr != e || den == 0) {
    throw bad();
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MarkovChain parse_chain(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("chain: malformed JSON: ") + e.what());
  }
  try {
    auto alphabet = Alphabet::create(
        j.at("alphabet").get<std::vector<std::string>>(), j.value("ordered", false));
    std::vector<std::string> names;
    std::vector<Symbol> labels;
    for (const auto& s : j.at("states")) {
      names.push_back(s.at("name").get<std::string>());
      const auto label = s.at("label").get<std::string>();
      auto sym = alphabet->find(label);
      if (!sym) {
        throw ValidationError("chain: state '" + names.back() +
                              "' has unknown label '" + label + "'");
      }
      labels.push_back(*sym);
    }
    const std::size_t n = names.size();
    auto index = [&](const std::string& name) -> std::size_t {
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) {
        throw ValidationError("chain: unknown state '" + name + "'");
      }
      return static_cast<std::size_t>(it - names.begin());
    };

    std::vector<double> initial(n, 0.0);
    for (const auto& [name, p] : j.at("initial").items()) {
      initial[index(name)] = parse_probability(p, "initial state '" + name + "'");
    }

    std::vector<std::vector<double>> transition(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    for (const auto& t : j.at("transitions")) {
      const auto from_name = t.at("from").get<std::string>();
      const auto to_name = t.at("to").get<std::string>();
      const std::size_t from = index(from_name);
      const std::size_t to = index(to_name);
      if (seen[from][to]) {
        throw ValidationError("chain: duplicate transition " + from_name +
                              " -> " + to_name);
      }
      seen[from][to] = true;
      transition[from][to] =
          parse_probability(t.at("prob"), "transition " + from_name + " -> " + to_name);
    }
    return MarkovChain(std::move(alphabet), std::move(names), std::move(labels),
                       std::move(initial), std::move(transition));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("chain: ") + e.what());
  }
}

MarkovChain iid_chain(AlphabetPtr alphabet, std::span<const double> probs) {
  if (probs.size() != alphabet->size()) {
    throw ValidationError("iid source: need one probability per symbol");
  }
  std::vector<std::string> names(alphabet->names().begin(),
                                 alphabet->names().end());
  std::vector<Symbol> labels;
  for (std::uint32_t i = 0; i < names.size(); ++i) labels.push_back(Symbol{i});
  std::vector<double> row(probs.begin(), probs.end());
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!(row[i] > 0)) {
      throw ValidationError("iid source: probability of '" + names[i] +
                            "' must be positive");
    }
  }
  std::vector<std::vector<double>> transition(names.size(), row);
  return MarkovChain(std::move(alphabet), std::move(names), std::move(labels),
                     row, std::move(transition));
}

StationaryAnalysis stationary(const MarkovChain& chain) {
  const std::size_t n = chain.size();
  const auto& p = chain.transition_matrix();
  // (pᵀ − I) f = 0 with the last equation replaced by Σ f = 1. Elimination
  // runs in extended precision and rounds once at the end.
  using Real = long double;
  std::vector<std::vector<Real>> a(n, std::vector<Real>(n + 1, 0.0L));
  for (std::size_t r = 0; r + 1 < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      a[r][c] = static_cast<Real>(p[c][r]) - (r == c ? 1.0L : 0.0L);
    }
  }
  for (std::size_t c = 0; c < n; ++c) a[n - 1][c] = 1.0L;
  a[n - 1][n] = 1.0L;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300L) {
      throw InternalError("stationary: singular system");
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real factor = a[r][col] / a[col][col];
      if (factor == 0.0L) continue;
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t r = n; r-- > 0;) {
    Real s = a[r][n];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  std::vector<double> f(x.begin(), x.end());

  for (std::size_t q = 0; q < n; ++q) {
    double fp = 0;
    for (std::size_t r = 0; r < n; ++r) fp += f[r] * p[r][q];
    if (std::abs(fp - f[q]) > kResidualTolerance || !(f[q] > 0)) {
      throw InternalError("stationary: residual check failed at state '" +
                          chain.state_name(static_cast<StateId>(q)) + "'");
    }
  }

  StationaryAnalysis out;
  out.state_frequency = f;
  std::vector<Real> letters(chain.alphabet().size(), 0.0L);
  for (std::size_t q = 0; q < n; ++q) {
    out.return_time.push_back(static_cast<double>(1.0L / x[q]));
    letters[index_of(chain.label(static_cast<StateId>(q)))] += x[q];
  }
  out.letter_frequency.assign(letters.begin(), letters.end());
  return out;
}

SampleTrace sample(const MarkovChain& chain, std::size_t n, std::uint64_t seed) {
  SampleTrace t{{}, Word(chain.alphabet_ptr()), seed};
  if (n == 0) return t;
  Rng rng(seed);
  t.states.reserve(n);
  std::vector<Symbol> letters;
  letters.reserve(n);
  StateId q = chain.draw_initial(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) q = chain.draw_next(q, rng);
    t.states.push_back(q);
    letters.push_back(chain.label(q));
  }
  t.word = Word(chain.alphabet_ptr(), std::move(letters));
  return t;
}

SampleTrace make_trace(const MarkovChain& chain, std::vector<StateId> states) {
  std::vector<Symbol> letters;
  letters.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] >= chain.size()) {
      throw ValidationError("trace: state index out of range");
    }
    if (i > 0 && !(chain.transition(states[i - 1], states[i]) > 0)) {
      throw ValidationError("trace: step " + std::to_string(i) + " -> " +
                            std::to_string(i + 1) + " (" +
                            chain.state_name(states[i - 1]) + " -> " +
                            chain.state_name(states[i]) +
                            ") has probability 0");
    }
    letters.push_back(chain.label(states[i]));
  }
  return {std::move(states), Word(chain.alphabet_ptr(), std::move(letters)), 0};
}

std::size_t visits(const SampleTrace& trace, StateId q, std::size_t offset,
                   std::size_t k) {
  if (offset > trace.states.size() || k > trace.states.size() - offset) {
    throw ValidationError("visits: range [" + std::to_string(offset + 1) +
                          ".." + std::to_string(offset + k) +
                          "] exceeds trace length " +
                          std::to_string(trace.states.size()));
  }
  const auto begin = trace.states.begin() + static_cast<std::ptrdiff_t>(offset);
  return static_cast<std::size_t>(
      std::count(begin, begin + static_cast<std::ptrdiff_t>(k), q));
}

std::optional<std::size_t> first_visit(const SampleTrace& trace, StateId q,
                                       std::size_t offset) {
  for (std::size_t i = offset; i < trace.states.size(); ++i) {
    if (trace.states[i] == q) return i - offset + 1;
  }
  return std::nullopt;
}

}  // namespace freqmon
