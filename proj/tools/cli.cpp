#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "freqmon/alphabet.hpp"
#include "freqmon/counter_machine.hpp"
#include "freqmon/error.hpp"
#include "freqmon/formula.hpp"
#include "freqmon/formula_monitor.hpp"
#include "freqmon/lab.hpp"
#include "freqmon/limit_monitors.hpp"
#include "freqmon/markov.hpp"

namespace freqmon::cli {
namespace {

/// Raised for flag combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> read_tokens(const std::string& path, std::istream& in) {
  std::vector<std::string> tokens;
  std::string t;
  if (path == "-") {
    while (in >> t) tokens.push_back(t);
    return tokens;
  }
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  while (f >> t) tokens.push_back(t);
  return tokens;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// -- generate -------------------------------------------------------------

struct GenerateOptions {
  std::string chain;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  bool states = false;
};

void generate(const GenerateOptions& o, std::ostream& out) {
  const MarkovChain chain = parse_chain(read_file(o.chain));
  const SampleTrace t = sample(chain, o.steps, o.seed);
  if (o.states) {
    out << "step,state,symbol\n";
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      out << i + 1 << ',' << chain.state_name(t.states[i]) << ','
          << chain.alphabet().name(t.word.letters()[i]) << '\n';
    }
    return;
  }
  if (t.states.empty()) return;
  out << format_word(t.word) << '\n';
}

// -- monitor --------------------------------------------------------------

struct MonitorOptions {
  std::string algorithm;
  std::optional<std::string> formula;
  std::optional<std::string> formula_file;
  std::optional<std::string> order;
  std::string input = "-";
};

void monitor(const MonitorOptions& o, std::istream& in, std::ostream& out) {
  std::optional<std::string> formula_text = o.formula;
  if (o.formula_file) formula_text = read_file(*o.formula_file);
  if (o.algorithm == "formula" && !formula_text) {
    throw UsageError("--algorithm formula requires --formula or --formula-file");
  }
  if (o.algorithm != "formula" && formula_text) {
    throw UsageError("--formula is only valid with --algorithm formula");
  }
  if (o.algorithm == "median" && !o.order) {
    throw UsageError("--algorithm median requires --order");
  }

  const auto tokens = read_tokens(o.input, in);
  AlphabetPtr alphabet;
  if (o.order) {
    alphabet = Alphabet::create(split_commas(*o.order), true);
  } else {
    std::vector<std::string> names;
    auto add = [&](const std::string& s) {
      if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
    };
    for (const auto& t : tokens) add(t);
    if (formula_text) {
      for (const auto& s : formula_symbols(*formula_text)) add(s);
    }
    if (names.empty()) {
      out << "pos,input,output\n";
      return;
    }
    alphabet = Alphabet::create(std::move(names), false);
  }

  std::vector<Symbol> letters;
  letters.reserve(tokens.size());
  for (const auto& t : tokens) letters.push_back(alphabet->at(t));

  out << "pos,input,output\n";
  auto row = [&](std::size_t i, std::string_view verdict) {
    out << i + 1 << ',' << tokens[i] << ',' << verdict << '\n';
  };

  if (o.algorithm == "mode") {
    ModeMonitor m;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      m.push(letters[i]);
      row(i, alphabet->name(m.output()));
    }
  } else if (o.algorithm == "median") {
    MedianMonitor m(alphabet);
    for (std::size_t i = 0; i < letters.size(); ++i) {
      m.push(letters[i]);
      row(i, alphabet->name(m.output()));
    }
  } else if (o.algorithm == "naive-mode") {
    const CounterMonitor machine = naive_mode_machine(alphabet);
    Configuration c = machine.initial_configuration();
    for (std::size_t i = 0; i < letters.size(); ++i) {
      c = machine.step(c, letters[i]);
      row(i, machine.output(c));
    }
  } else if (o.algorithm == "formula") {
    FormulaMonitor m(parse_formula(*formula_text, alphabet));
    for (std::size_t i = 0; i < letters.size(); ++i) {
      row(i, m.next(letters[i]).output ? "true" : "false");
    }
  } else {
    throw InternalError("unhandled algorithm " + o.algorithm);
  }
}

// -- stationary -----------------------------------------------------------

void print_stationary(const std::string& chain_path, std::ostream& out) {
  const MarkovChain chain = parse_chain(read_file(chain_path));
  const StationaryAnalysis a = stationary(chain);
  out << "kind,name,value\n";
  for (StateId q = 0; q < chain.size(); ++q) {
    out << "state," << chain.state_name(q) << ',' << fmt17(a.state_frequency[q]) << '\n';
  }
  for (StateId q = 0; q < chain.size(); ++q) {
    out << "return," << chain.state_name(q) << ',' << fmt17(a.return_time[q]) << '\n';
  }
  for (std::size_t s = 0; s < a.letter_frequency.size(); ++s) {
    out << "letter," << chain.alphabet().name(Symbol{static_cast<std::uint32_t>(s)})
        << ',' << fmt17(a.letter_frequency[s]) << '\n';
  }
}

// -- lab ------------------------------------------------------------------

struct LabOptions {
  std::optional<std::string> chain;
  std::optional<std::string> word;
  std::optional<std::uint64_t> seed;
  std::string sigma;
  std::string state;
  std::size_t steps = 0;
  std::size_t levels = 0;
  std::string dist;
  double pa = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::string out = "-";
  std::istream* in = nullptr;
};

void write_series(const Series& s, const std::string& path, std::ostream& out) {
  if (path == "-") {
    emit_csv(s, out);
  } else {
    try {
      emit_csv(s, std::filesystem::path(path));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw ValidationError(e.what());
    }
  }
}

std::uint64_t require_seed(const LabOptions& o) {
  if (!o.seed) throw UsageError("--seed is required unless --word is given");
  return *o.seed;
}

/// The word to analyse: either read from --word, or sampled from --chain.
/// Word tokens are letters, or state names when `as_states`.
struct Source {
  std::optional<MarkovChain> chain;
  std::optional<SampleTrace> trace;
  std::optional<Word> word;
};

Source load_chain(const LabOptions& o) {
  Source src;
  if (o.chain) src.chain.emplace(parse_chain(read_file(*o.chain)));
  if (!o.word && !src.chain) throw UsageError("--chain or --word is required");
  return src;
}

Word word_from_tokens(const LabOptions& o, const Source& src,
                      const std::vector<std::string>& extra) {
  const auto tokens = read_tokens(*o.word, *o.in);
  AlphabetPtr alphabet;
  if (src.chain) {
    alphabet = src.chain->alphabet_ptr();
  } else {
    std::vector<std::string> names;
    auto add = [&](const std::string& s) {
      if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
    };
    for (const auto& t : tokens) add(t);
    for (const auto& t : extra) add(t);
    alphabet = Alphabet::create(std::move(names), false);
  }
  Word w(alphabet);
  for (const auto& t : tokens) w.push_back(alphabet->at(t));
  return w;
}

Series lab_prefix_or_infix(const LabOptions& o, bool infix) {
  const Source src = load_chain(o);
  if (o.word) {
    const Word w = word_from_tokens(o, src, {o.sigma});
    const Symbol sigma = w.alphabet().at(o.sigma);
    Series s = infix ? infix_convergence(w, sigma) : prefix_convergence(w, sigma);
    s.parameters.emplace_back("word", *o.word);
    return s;
  }
  const Symbol sigma = src.chain->alphabet().at(o.sigma);
  const std::uint64_t seed = require_seed(o);
  Series s = infix ? infix_convergence(*src.chain, sigma, o.levels, seed)
                   : prefix_convergence(*src.chain, sigma, o.steps, seed);
  s.parameters.emplace_back("chain", *o.chain);
  return s;
}

Series lab_first_visit(const LabOptions& o) {
  const Source src = load_chain(o);
  if (!src.chain) throw UsageError("first-visit requires --chain");
  const StateId q = src.chain->state(o.state);
  if (o.word) {
    std::vector<StateId> states;
    for (const auto& t : read_tokens(*o.word, *o.in)) {
      states.push_back(src.chain->state(t));
    }
    Series s = first_visit_ratio(make_trace(*src.chain, std::move(states)), q);
    s.parameters.insert(s.parameters.begin(), {"state", o.state});
    s.parameters.emplace_back("word", *o.word);
    return s;
  }
  Series s = first_visit_ratio(*src.chain, q, o.levels, require_seed(o));
  s.parameters.emplace_back("chain", *o.chain);
  return s;
}

Series lab_mode_rate(const LabOptions& o) {
  const std::uint64_t seed = require_seed(o);
  const ModeRate r = mode_error_rate(o.pa, o.n, o.trials, seed);
  Series s;
  s.experiment = "mode-rate";
  s.seed = seed;
  s.parameters = {{"pa", fmt17(o.pa)},
                  {"n", std::to_string(o.n)},
                  {"trials", std::to_string(o.trials)},
                  {"rho", fmt17(r.rho)},
                  {"bound", fmt17(r.bound)},
                  {"successes", std::to_string(r.successes)},
                  {"stderr", fmt17(r.standard_error())}};
  s.rows.push_back({o.n, r.empirical});
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit monitoring of frequency statistics over event streams",
               "freqmon"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  GenerateOptions gen;
  auto* generate_cmd = app.add_subcommand("generate", "Sample a word from a Markov chain");
  generate_cmd->add_option("--chain", gen.chain, "Chain JSON file")->required();
  generate_cmd->add_option("--steps", gen.steps, "Number of events")->required();
  generate_cmd->add_option("--seed", gen.seed, "64-bit seed")->required();
  generate_cmd->add_flag("--states", gen.states, "Emit CSV step,state,symbol");

  MonitorOptions mon;
  auto* monitor_cmd = app.add_subcommand("monitor", "Run a monitor over a symbol stream");
  monitor_cmd->add_option("--algorithm", mon.algorithm, "Monitor to run")
      ->required()
      ->check(CLI::IsMember({"mode", "median", "naive-mode", "formula"}));
  monitor_cmd->add_option("--formula", mon.formula, "Frequency formula text");
  monitor_cmd->add_option("--formula-file", mon.formula_file, "File holding the formula");
  monitor_cmd->add_option("--order", mon.order, "Comma-separated ordered alphabet");
  monitor_cmd->add_option("--input", mon.input, "Input file, '-' for stdin");

  std::string stationary_chain;
  auto* stationary_cmd = app.add_subcommand("stationary", "Exact stationary analysis of a chain");
  stationary_cmd->add_option("--chain", stationary_chain, "Chain JSON file")->required();

  LabOptions lab;
  auto* lab_cmd = app.add_subcommand("lab", "Seeded experiments emitting CSV series");
  lab_cmd->require_subcommand(1);
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", lab.out, "Output CSV path, '-' for stdout");
  };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", lab.seed, "64-bit seed"); };

  auto* prefix_cmd = lab_cmd->add_subcommand("prefix", "Prefix frequency of a letter");
  prefix_cmd->add_option("--chain", lab.chain, "Chain JSON file");
  prefix_cmd->add_option("--word", lab.word, "Use this word instead of sampling");
  prefix_cmd->add_option("--sigma", lab.sigma, "Letter")->required();
  prefix_cmd->add_option("--steps", lab.steps, "Prefix length");
  add_seed(prefix_cmd);
  add_out(prefix_cmd);

  auto* infix_cmd = lab_cmd->add_subcommand("infix", "Chunk frequency of a letter");
  infix_cmd->add_option("--chain", lab.chain, "Chain JSON file");
  infix_cmd->add_option("--word", lab.word, "Use this word instead of sampling");
  infix_cmd->add_option("--sigma", lab.sigma, "Letter")->required();
  infix_cmd->add_option("--levels", lab.levels, "Number of chunks");
  add_seed(infix_cmd);
  add_out(infix_cmd);

  auto* lln_cmd = lab_cmd->add_subcommand("lln", "Triangular-array law of large numbers");
  lln_cmd->add_option("--dist", lab.dist, "value:prob,... distribution")->required();
  lln_cmd->add_option("--levels", lab.levels, "Number of rows")->required();
  add_seed(lln_cmd);
  add_out(lln_cmd);

  auto* fv_cmd = lab_cmd->add_subcommand("first-visit", "First visit time inside chunks");
  fv_cmd->add_option("--chain", lab.chain, "Chain JSON file")->required();
  fv_cmd->add_option("--word", lab.word, "Use this state sequence instead of sampling");
  fv_cmd->add_option("--state", lab.state, "Target state")->required();
  fv_cmd->add_option("--levels", lab.levels, "Number of chunks");
  add_seed(fv_cmd);
  add_out(fv_cmd);

  auto* rate_cmd = lab_cmd->add_subcommand("mode-rate", "Mode correctness rate vs. bound");
  rate_cmd->add_option("--pa", lab.pa, "p(a), in (1/2, 1]")->required();
  rate_cmd->add_option("--n", lab.n, "Word length")->required();
  rate_cmd->add_option("--trials", lab.trials, "Number of words")->required();
  add_seed(rate_cmd);
  add_out(rate_cmd);

  lab.in = &in;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "freqmon: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (generate_cmd->parsed()) {
      generate(gen, out);
    } else if (monitor_cmd->parsed()) {
      monitor(mon, in, out);
    } else if (stationary_cmd->parsed()) {
      print_stationary(stationary_chain, out);
    } else if (prefix_cmd->parsed()) {
      if (!lab.word && !prefix_cmd->count("--steps")) throw UsageError("--steps is required");
      write_series(lab_prefix_or_infix(lab, false), lab.out, out);
    } else if (infix_cmd->parsed()) {
      if (!lab.word && !infix_cmd->count("--levels")) throw UsageError("--levels is required");
      write_series(lab_prefix_or_infix(lab, true), lab.out, out);
    } else if (lln_cmd->parsed()) {
      write_series(triangular_lln(parse_distribution(lab.dist), lab.levels,
                                  require_seed(lab)),
                   lab.out, out);
    } else if (fv_cmd->parsed()) {
      if (!lab.word && !fv_cmd->count("--levels")) throw UsageError("--levels is required");
      write_series(lab_first_visit(lab), lab.out, out);
    } else if (rate_cmd->parsed()) {
      write_series(lab_mode_rate(lab), lab.out, out);
    }
  } catch (const UsageError& e) {
    err << "freqmon: " << e.what() << '\n';
    return kUsage;
  } catch (const FormulaSyntaxError& e) {
    err << "freqmon: formula: " << e.what() << '\n';
    return kValidation;
  } catch (const ValidationError& e) {
    err << "freqmon: " << e.what() << '\n';
    return kValidation;
  } catch (const DeterminismError& e) {
    err << "freqmon: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "freqmon: internal error: " << e.what() << '\n';
    return kInternal;
  }
  out.flush();
  return kOk;
}

}  // namespace freqmon::cli
