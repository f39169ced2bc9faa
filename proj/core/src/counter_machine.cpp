#include "freqmon/counter_machine.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "freqmon/error.hpp"

namespace freqmon {
namespace {

using nlohmann::json;

void check_index(std::size_t idx, std::size_t bound, const char* what) {
  if (idx >= bound) {
    throw ValidationError(std::string("counter monitor: ") + what + " index " +
                          std::to_string(idx) + " out of range");
  }
}

void check_term(const Term& t, std::size_t registers) {
  if (t.reg) check_index(*t.reg, registers, "register");
}

void check_guard(const Guard& g, std::size_t registers) {
  for (const auto& c : g.conjuncts) {
    check_term(c.lhs, registers);
    check_term(c.rhs, registers);
  }
}

std::string describe(const CounterMonitor& m, const Configuration& c,
                     Symbol event) {
  const auto& def = m.definition();
  std::ostringstream os;
  os << "location '" << def.locations[c.location] << "', event '"
     << m.input_alphabet().name(event) << "', valuation {";
  for (std::size_t r = 0; r < c.valuation.size(); ++r) {
    if (r) os << ", ";
    os << def.registers[r] << '=' << c.valuation[r];
  }
  os << '}';
  return os.str();
}

}  // namespace

CounterMonitor::CounterMonitor(Definition def) : def_(std::move(def)) {
  if (!def_.input_alphabet) {
    throw ValidationError("counter monitor: missing input alphabet");
  }
  if (def_.locations.empty()) {
    throw ValidationError("counter monitor: no locations");
  }
  if (def_.output_alphabet.empty()) {
    throw ValidationError("counter monitor: empty output alphabet");
  }
  const std::size_t nreg = def_.registers.size();
  const std::size_t nloc = def_.locations.size();
  const std::size_t nsym = def_.input_alphabet->size();
  check_index(def_.initial, nloc, "initial location");
  if (def_.outputs.size() != nloc) {
    throw ValidationError("counter monitor: need one output rule per location");
  }
  for (const auto& rule : def_.outputs) {
    check_index(rule.default_value, def_.output_alphabet.size(), "output");
    for (const auto& c : rule.cases) {
      check_guard(c.guard, nreg);
      check_index(c.value, def_.output_alphabet.size(), "output");
    }
  }
  edges_by_.assign(nloc * nsym, {});
  for (std::size_t e = 0; e < def_.edges.size(); ++e) {
    const Edge& edge = def_.edges[e];
    check_index(edge.from, nloc, "edge source");
    check_index(edge.to, nloc, "edge target");
    check_index(index_of(edge.event), nsym, "edge event");
    check_guard(edge.guard, nreg);
    for (const auto& [r, t] : edge.update.assignments) {
      check_index(r, nreg, "update register");
      check_term(t, nreg);
    }
    edges_by_[edge.from * nsym + index_of(edge.event)].push_back(e);
  }
}

Configuration CounterMonitor::initial_configuration() const {
  return {def_.initial, std::vector<std::uint64_t>(def_.registers.size(), 0)};
}

const std::string& CounterMonitor::output(const Configuration& c) const {
  const OutputRule& rule = def_.outputs.at(c.location);
  for (const auto& kase : rule.cases) {
    if (kase.guard.holds(c.valuation)) return def_.output_alphabet[kase.value];
  }
  return def_.output_alphabet[rule.default_value];
}

Configuration CounterMonitor::step(const Configuration& c, Symbol event) const {
  if (!def_.input_alphabet->contains(event)) {
    throw ValidationError("counter monitor: event outside input alphabet");
  }
  const auto& candidates =
      edges_by_[c.location * def_.input_alphabet->size() + index_of(event)];
  const Edge* taken = nullptr;
  for (std::size_t e : candidates) {
    const Edge& edge = def_.edges[e];
    if (!edge.guard.holds(c.valuation)) continue;
    if (taken) {
      throw DeterminismError("several enabled edges at " +
                             describe(*this, c, event));
    }
    taken = &edge;
  }
  if (!taken) {
    throw DeterminismError("no enabled edge at " + describe(*this, c, event));
  }
  Configuration next{taken->to, c.valuation};
  for (const auto& [r, t] : taken->update.assignments) {
    next.valuation[r] = t.eval(c.valuation);  // reads the old valuation
  }
  return next;
}

bool operator==(const CounterMonitor& a, const CounterMonitor& b) {
  const auto& x = a.def_;
  const auto& y = b.def_;
  return std::ranges::equal(x.input_alphabet->names(),
                            y.input_alphabet->names()) &&
         x.input_alphabet->ordered() == y.input_alphabet->ordered() &&
         x.output_alphabet == y.output_alphabet && x.registers == y.registers &&
         x.locations == y.locations && x.initial == y.initial &&
         x.edges == y.edges && x.outputs == y.outputs;
}

RunResult run(const CounterMonitor& m, const Word& w) {
  RunResult result{{}, m.initial_configuration()};
  result.outputs.reserve(w.size());
  for (Symbol s : w.letters()) {
    result.final = m.step(result.final, s);
    result.outputs.push_back(m.output(result.final));
  }
  return result;
}

std::string evaluate(const CounterMonitor& m, const Word& w) {
  return m.output(run(m, w).final);
}

CounterMonitor naive_mode_machine(const AlphabetPtr& alphabet) {
  CounterMonitor::Definition def;
  def.input_alphabet = alphabet;
  const std::size_t k = alphabet->size();
  for (const auto& name : alphabet->names()) {
    def.output_alphabet.push_back(name);
    def.registers.push_back("n_" + name);
  }
  def.output_alphabet.emplace_back(kBottomText);
  def.locations = {"q"};
  def.initial = 0;
  for (std::size_t a = 0; a < k; ++a) {
    def.edges.push_back(Edge{0, Symbol{static_cast<std::uint32_t>(a)}, Guard{},
                             Update{{{a, Term::of(a, 1)}}}, 0});
  }
  OutputRule rule;
  rule.default_value = k;
  for (std::size_t a = 0; a < k; ++a) {
    Guard g;
    for (std::size_t b = 0; b < k; ++b) {
      if (b == a) continue;
      g.conjuncts.push_back({Term::of(a), Relation::kGreater, Term::of(b)});
    }
    rule.cases.push_back({std::move(g), a});
  }
  def.outputs = {std::move(rule)};
  return CounterMonitor(std::move(def));
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json term_to_json(const Term& t, const CounterMonitor::Definition& def) {
  json j;
  if (t.reg) j["reg"] = def.registers[*t.reg];
  j["add"] = t.add;
  return j;
}

json guard_to_json(const Guard& g, const CounterMonitor::Definition& def) {
  json arr = json::array();
  for (const auto& c : g.conjuncts) {
    arr.push_back({{"lhs", term_to_json(c.lhs, def)},
                   {"rel", c.rel == Relation::kLessEq ? "<=" : ">"},
                   {"rhs", term_to_json(c.rhs, def)}});
  }
  return arr;
}

std::size_t lookup(const std::vector<std::string>& names, const std::string& n,
                   const char* what) {
  auto it = std::find(names.begin(), names.end(), n);
  if (it == names.end()) {
    throw ValidationError(std::string("counter monitor: unknown ") + what +
                          " '" + n + "'");
  }
  return static_cast<std::size_t>(it - names.begin());
}

Term term_from_json(const json& j, const std::vector<std::string>& regs) {
  Term t;
  if (j.contains("reg")) t.reg = lookup(regs, j.at("reg").get<std::string>(), "register");
  t.add = j.value("add", std::uint64_t{0});
  return t;
}

Guard guard_from_json(const json& j, const std::vector<std::string>& regs) {
  Guard g;
  for (const auto& c : j) {
    const auto rel = c.at("rel").get<std::string>();
    if (rel != "<=" && rel != ">") {
      throw ValidationError("counter monitor: relation must be '<=' or '>'");
    }
    g.conjuncts.push_back({term_from_json(c.at("lhs"), regs),
                           rel == "<=" ? Relation::kLessEq : Relation::kGreater,
                           term_from_json(c.at("rhs"), regs)});
  }
  return g;
}

}  // namespace

std::string to_json(const CounterMonitor& m) {
  const auto& def = m.definition();
  json j;
  j["input_alphabet"] = std::vector<std::string>(
      def.input_alphabet->names().begin(), def.input_alphabet->names().end());
  j["ordered"] = def.input_alphabet->ordered();
  j["output_alphabet"] = def.output_alphabet;
  j["registers"] = def.registers;
  j["locations"] = def.locations;
  j["initial"] = def.locations[def.initial];
  json edges = json::array();
  for (const auto& e : def.edges) {
    json update = json::object();
    for (const auto& [r, t] : e.update.assignments) {
      update[def.registers[r]] = term_to_json(t, def);
    }
    edges.push_back({{"from", def.locations[e.from]},
                     {"event", def.input_alphabet->name(e.event)},
                     {"guard", guard_to_json(e.guard, def)},
                     {"update", update},
                     {"to", def.locations[e.to]}});
  }
  j["edges"] = edges;
  json outputs = json::object();
  for (std::size_t q = 0; q < def.outputs.size(); ++q) {
    json cases = json::array();
    for (const auto& c : def.outputs[q].cases) {
      cases.push_back({{"guard", guard_to_json(c.guard, def)},
                       {"value", def.output_alphabet[c.value]}});
    }
    outputs[def.locations[q]] = {
        {"default", def.output_alphabet[def.outputs[q].default_value]},
        {"cases", cases}};
  }
  j["output"] = outputs;
  return j.dump(2);
}

CounterMonitor counter_monitor_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("counter monitor: malformed JSON: ") +
                          e.what());
  }
  try {
    CounterMonitor::Definition def;
    def.input_alphabet =
        Alphabet::create(j.at("input_alphabet").get<std::vector<std::string>>(),
                         j.value("ordered", false));
    def.output_alphabet = j.at("output_alphabet").get<std::vector<std::string>>();
    def.registers = j.at("registers").get<std::vector<std::string>>();
    def.locations = j.at("locations").get<std::vector<std::string>>();
    def.initial = lookup(def.locations, j.at("initial").get<std::string>(),
                         "location");
    for (const auto& e : j.at("edges")) {
      Edge edge;
      edge.from = lookup(def.locations, e.at("from").get<std::string>(), "location");
      edge.to = lookup(def.locations, e.at("to").get<std::string>(), "location");
      edge.event = def.input_alphabet->at(e.at("event").get<std::string>());
      edge.guard = guard_from_json(e.value("guard", json::array()), def.registers);
      // Assignment order follows register declaration order.
      const json update = e.value("update", json::object());
      for (std::size_t r = 0; r < def.registers.size(); ++r) {
        if (update.contains(def.registers[r])) {
          edge.update.assignments.emplace_back(
              r, term_from_json(update.at(def.registers[r]), def.registers));
        }
      }
      for (const auto& [name, _] : update.items()) {
        lookup(def.registers, name, "register");
      }
      def.edges.push_back(std::move(edge));
    }
    def.outputs.resize(def.locations.size());
    const json& outputs = j.at("output");
    for (std::size_t q = 0; q < def.locations.size(); ++q) {
      const json& rule = outputs.at(def.locations[q]);
      def.outputs[q].default_value = lookup(
          def.output_alphabet, rule.at("default").get<std::string>(), "output");
      for (const auto& c : rule.value("cases", json::array())) {
        def.outputs[q].cases.push_back(
            {guard_from_json(c.at("guard"), def.registers),
             lookup(def.output_alphabet, c.at("value").get<std::string>(),
                    "output")});
      }
    }
    return CounterMonitor(std::move(def));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("counter monitor: ") + e.what());
  }
}

}  // namespace freqmon
