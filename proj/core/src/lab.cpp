#include "freqmon/lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "freqmon/error.hpp"
#include "freqmon/limit_monitors.hpp"
#include "freqmon/rng.hpp"

namespace freqmon {
namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_probability_text(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } else {
      const double num = std::stod(s.substr(0, slash), &used);
      if (used == slash) {
        const std::string den_text = s.substr(slash + 1);
        const double den = std::stod(den_text, &used);
        if (used == den_text.size() && den != 0) return num / den;
      }
    }
  } catch (const std::exception&) {
  }
  throw ValidationError("malformed probability '" + s + "'");
}

}  // namespace

void FiniteDistribution::validate() const {
  if (support.empty()) throw ValidationError("distribution: empty support");
  double sum = 0;
  for (const auto& [v, p] : support) {
    if (!(p >= 0)) throw ValidationError("distribution: negative probability");
    if (!std::isfinite(v)) throw ValidationError("distribution: non-finite value");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("distribution: probabilities sum to " +
                          format_double(sum) + ", expected 1");
  }
}

double FiniteDistribution::mean() const {
  double m = 0;
  for (const auto& [v, p] : support) m += v * p;
  return m;
}

FiniteDistribution parse_distribution(std::string_view text) {
  FiniteDistribution d;
  std::stringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("distribution: expected value:probability, got '" +
                            item + "'");
    }
    double value = 0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("distribution: malformed value in '" + item + "'");
    }
    d.support.emplace_back(value, parse_probability_text(item.substr(colon + 1)));
  }
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------

Series prefix_convergence(const Word& w, Symbol sigma) {
  Series s;
  s.experiment = "prefix";
  s.parameters = {{"sigma", w.alphabet().name(sigma)},
                  {"steps", std::to_string(w.size())}};
  std::size_t hits = 0;
  for (std::size_t n = 1; n <= w.size(); ++n) {
    hits += w.at(n) == sigma;
    s.rows.push_back({n, static_cast<double>(hits) / static_cast<double>(n)});
  }
  return s;
}

Series prefix_convergence(const MarkovChain& chain, Symbol sigma,
                          std::size_t steps, std::uint64_t seed) {
  Series s = prefix_convergence(sample(chain, steps, seed).word, sigma);
  s.seed = seed;
  return s;
}

Series infix_convergence(const Word& w, Symbol sigma) {
  Series s;
  s.experiment = "infix";
  std::size_t n = 1;
  for (; schedule_offset(n) + n <= w.size(); ++n) {
    const auto chunk = w.letters().subspan(schedule_offset(n), n);
    const auto hits = std::count(chunk.begin(), chunk.end(), sigma);
    s.rows.push_back({n, static_cast<double>(hits) / static_cast<double>(n)});
  }
  s.parameters = {{"sigma", w.alphabet().name(sigma)},
                  {"levels", std::to_string(n - 1)}};
  return s;
}

Series infix_convergence(const MarkovChain& chain, Symbol sigma,
                         std::size_t levels, std::uint64_t seed) {
  const auto len = schedule_offset(levels + 1);
  Series s = infix_convergence(sample(chain, len, seed).word, sigma);
  s.seed = seed;
  return s;
}

double triangular_lln_row(const FiniteDistribution& dist, std::size_t n,
                          std::uint64_t seed) {
  if (n == 0) throw ValidationError("triangular_lln: row index must be >= 1");
  std::vector<double> cdf(dist.support.size());
  double acc = 0;
  for (std::size_t k = 0; k < cdf.size(); ++k) {
    acc += dist.support[k].second;
    cdf[k] = acc;
  }
  Rng rng(mix_seed(seed, n));
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += dist.support[rng.categorical(cdf)].first;
  }
  return sum / static_cast<double>(n);
}

Series triangular_lln(const FiniteDistribution& dist, std::size_t levels,
                      std::uint64_t seed) {
  dist.validate();
  Series s;
  s.experiment = "lln";
  s.seed = seed;
  s.parameters = {{"levels", std::to_string(levels)},
                  {"mean", format_double(dist.mean())}};
  for (std::size_t n = 1; n <= levels; ++n) {
    s.rows.push_back({n, triangular_lln_row(dist, n, seed)});
  }
  if (!s.rows.empty()) {
    s.parameters.emplace_back(
        "final_abs_error", format_double(std::abs(s.rows.back().value - dist.mean())));
  }
  return s;
}

Series first_visit_ratio(const SampleTrace& trace, StateId q) {
  Series s;
  s.experiment = "first-visit";
  std::size_t n = 1;
  for (; schedule_offset(n) + n <= trace.states.size(); ++n) {
    const auto offset = schedule_offset(n);
    std::optional<std::size_t> hit;
    for (std::size_t i = 1; i <= n; ++i) {
      if (trace.states[offset + i - 1] == q) {
        hit = i;
        break;
      }
    }
    if (!hit) {
      s.censored.push_back(n);
      hit = n;
    }
    s.rows.push_back({n, static_cast<double>(*hit) / static_cast<double>(n)});
  }
  s.parameters = {{"levels", std::to_string(n - 1)}};
  return s;
}

Series first_visit_ratio(const MarkovChain& chain, StateId q,
                         std::size_t levels, std::uint64_t seed) {
  Series s = first_visit_ratio(sample(chain, schedule_offset(levels + 1), seed), q);
  s.seed = seed;
  s.parameters.insert(s.parameters.begin(), {"state", chain.state_name(q)});
  return s;
}

std::optional<double> mean_uncensored(const Series& s, std::uint64_t lo,
                                      std::uint64_t hi) {
  double sum = 0;
  std::size_t k = 0;
  for (const auto& row : s.rows) {
    if (row.index < lo || row.index > hi) continue;
    if (std::find(s.censored.begin(), s.censored.end(), row.index) !=
        s.censored.end()) {
      continue;
    }
    sum += row.value;
    ++k;
  }
  if (k == 0) return std::nullopt;
  return sum / static_cast<double>(k);
}

// ---------------------------------------------------------------------------

double ModeRate::standard_error() const {
  if (trials == 0) return 0;
  return std::sqrt(bound * (1 - bound) / static_cast<double>(trials));
}

double mode_rate_bound(double pa, std::size_t n) {
  const double rho = 1 - (2 * pa - 1) * (2 * pa - 1);
  return 1 - std::pow(rho, static_cast<double>(n / 2));
}

ModeRate mode_error_rate(double pa, std::size_t n, std::size_t trials,
                         std::uint64_t seed) {
  if (!(pa > 0.5 && pa <= 1.0)) {
    throw ValidationError("mode-rate: p(a) must satisfy 1/2 < p(a) <= 1");
  }
  ModeRate r;
  r.rho = 1 - (2 * pa - 1) * (2 * pa - 1);
  r.bound = mode_rate_bound(pa, n);
  r.trials = trials;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t a = 0;
    for (std::size_t i = 0; i < n; ++i) a += rng.bernoulli(pa);
    r.successes += (2 * a > n);  // strict: ties are not a mode
  }
  r.empirical = trials ? static_cast<double>(r.successes) /
                             static_cast<double>(trials)
                       : 0.0;
  return r;
}

// ---------------------------------------------------------------------------

void emit_csv(const Series& series, std::ostream& out) {
  out << "# experiment=" << series.experiment << '\n';
  if (series.seed) out << "# seed=" << *series.seed << '\n';
  for (const auto& [k, v] : series.parameters) out << "# " << k << '=' << v << '\n';
  if (!series.censored.empty()) {
    out << "# censored=";
    for (std::size_t i = 0; i < series.censored.size(); ++i) {
      if (i) out << ';';
      out << series.censored[i];
    }
    out << '\n';
  }
  out << "index,value\n";
  for (const auto& row : series.rows) {
    out << row.index << ',' << format_double(row.value) << '\n';
  }
}

void emit_csv(const Series& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  emit_csv(series, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace {

std::uint64_t parse_u64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError(std::string("series CSV: malformed ") + what + " '" +
                          std::string(s) + "'");
  }
  return v;
}

}  // namespace

Series parse_series_csv(std::istream& in) {
  Series s;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!header && line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "experiment") {
        s.experiment = value;
      } else if (key == "seed") {
        s.seed = parse_u64(value, "seed");
      } else if (key == "censored") {
        std::stringstream items(value);
        std::string item;
        while (std::getline(items, item, ';')) {
          s.censored.push_back(parse_u64(item, "censored index"));
        }
      } else {
        s.parameters.emplace_back(key, value);
      }
      continue;
    }
    if (!header) {
      if (line != "index,value") {
        throw ValidationError("series CSV: expected header 'index,value'");
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("series CSV: malformed row '" + line + "'");
    }
    SeriesRow row;
    row.index = parse_u64(std::string_view(line).substr(0, comma), "index");
    char* end = nullptr;
    const std::string value = line.substr(comma + 1);
    row.value = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) {
      throw ValidationError("series CSV: malformed value '" + value + "'");
    }
    s.rows.push_back(row);
  }
  if (!header) throw ValidationError("series CSV: missing header");
  return s;
}

}  // namespace freqmon
