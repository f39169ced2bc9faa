#include "freqmon/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "freqmon/error.hpp"

namespace freqmon {

FormulaSyntaxError::FormulaSyntaxError(const std::string& what,
                                       std::size_t line, std::size_t column)
    : std::runtime_error(what + " at line " + std::to_string(line) +
                         ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

FormulaNode FormulaNode::make_atom(Atom a) {
  FormulaNode n;
  n.kind = Kind::kAtom;
  n.atom = std::move(a);
  return n;
}

FormulaNode FormulaNode::make_not(FormulaNode child) {
  FormulaNode n;
  n.kind = Kind::kNot;
  n.children.push_back(std::move(child));
  return n;
}

namespace {

FormulaNode make_nary(FormulaNode::Kind kind, std::vector<FormulaNode> children) {
  if (children.empty()) {
    throw ValidationError("empty conjunction or disjunction");
  }
  if (children.size() == 1) return std::move(children.front());
  FormulaNode n;
  n.kind = kind;
  n.children = std::move(children);
  return n;
}

}  // namespace

FormulaNode FormulaNode::make_and(std::vector<FormulaNode> children) {
  return make_nary(Kind::kAnd, std::move(children));
}

FormulaNode FormulaNode::make_or(std::vector<FormulaNode> children) {
  return make_nary(Kind::kOr, std::move(children));
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  kLParen, kRParen, kNot, kAnd, kOr, kGt, kLt, kNonStrict,
  kPlus, kMinus, kStar, kInt, kFreq, kEnd
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;       // operator spelling, literal digits, or symbol name
  std::int64_t value = 0;  // kInt
  std::size_t line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      bump();
      return t;
    };
    switch (c) {
      case '(': return single(Tok::kLParen);
      case ')': return single(Tok::kRParen);
      case '&': return single(Tok::kAnd);
      case '|': return single(Tok::kOr);
      case '+': return single(Tok::kPlus);
      case '-': return single(Tok::kMinus);
      case '*': return single(Tok::kStar);
      case '=':
        t.kind = Tok::kNonStrict;
        t.text = peek(1) == '=' ? "==" : "=";
        for (std::size_t k = 0; k < t.text.size(); ++k) bump();
        return t;
      case '>':
      case '<':
      case '!':
        if (peek(1) == '=') {
          t.kind = Tok::kNonStrict;
          t.text = std::string{c, '='};
          bump();
          bump();
          return t;
        }
        return single(c == '>' ? Tok::kGt : c == '<' ? Tok::kLt : Tok::kNot);
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        bump();
      }
      t.kind = Tok::kInt;
      t.text = std::string(src_.substr(start, pos_ - start));
      auto [ptr, ec] =
          std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
      if (ec != std::errc{}) {
        throw FormulaSyntaxError("integer literal " + t.text + " overflows",
                                 t.line, t.column);
      }
      return t;
    }
    if (c == 'f') {
      bump();
      skip_space();
      if (pos_ >= src_.size() || src_[pos_] != '(') {
        throw FormulaSyntaxError("expected '(' after 'f'", line_, col_);
      }
      bump();
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] != ')' &&
             !std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        bump();
      }
      t.text = std::string(src_.substr(start, pos_ - start));
      skip_space();
      if (pos_ >= src_.size() || src_[pos_] != ')') {
        throw FormulaSyntaxError("expected ')' to close f(", line_, col_);
      }
      if (t.text.empty()) {
        throw FormulaSyntaxError("empty symbol in f()", t.line, t.column);
      }
      bump();
      t.kind = Tok::kFreq;
      return t;
    }
    throw FormulaSyntaxError(std::string("unexpected character '") + c + "'",
                             line_, col_);
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      bump();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b, const Token& at) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw FormulaSyntaxError("integer overflow in coefficients", at.line,
                             at.column);
  }
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const Token& at) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw FormulaSyntaxError("integer overflow in coefficients", at.line,
                             at.column);
  }
  return r;
}

std::int64_t checked_neg(std::int64_t a, const Token& at) {
  return checked_mul(a, -1, at);
}

// ---------------------------------------------------------------------------
// Parser

struct LinExpr {
  std::vector<std::int64_t> coefficients;
  std::int64_t constant = 0;
};

class Parser {
 public:
  Parser(std::string_view src, AlphabetPtr alphabet)
      : lex_(src), alphabet_(std::move(alphabet)) {
    cur_ = lex_.next();
  }

  FormulaNode parse() {
    FormulaNode f = parse_or();
    if (cur_.kind != Tok::kEnd) fail("unexpected '" + cur_.text + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormulaSyntaxError(msg, cur_.line, cur_.column);
  }

  Token take() {
    Token t = cur_;
    cur_ = lex_.next();
    return t;
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) {
      fail(std::string("expected ") + what +
           (cur_.kind == Tok::kEnd ? " but reached end of input"
                                   : ", found '" + cur_.text + "'"));
    }
    take();
  }

  FormulaNode parse_or() {
    std::vector<FormulaNode> parts{parse_and()};
    while (cur_.kind == Tok::kOr) {
      take();
      parts.push_back(parse_and());
    }
    return FormulaNode::make_or(std::move(parts));
  }

  FormulaNode parse_and() {
    std::vector<FormulaNode> parts{parse_unary()};
    while (cur_.kind == Tok::kAnd) {
      take();
      parts.push_back(parse_unary());
    }
    return FormulaNode::make_and(std::move(parts));
  }

  FormulaNode parse_unary() {
    if (cur_.kind == Tok::kNot) {
      take();
      return FormulaNode::make_not(parse_unary());
    }
    if (cur_.kind == Tok::kLParen) {
      take();
      FormulaNode inner = parse_or();
      expect(Tok::kRParen, "')'");
      return inner;
    }
    return parse_atom();
  }

  FormulaNode parse_atom() {
    LinExpr lhs = parse_linexpr();
    const Token op = cur_;
    if (op.kind == Tok::kNonStrict) {
      fail("non-strict comparator '" + op.text +
           "' rejected: only strict inequalities ('>' or '<') stabilize "
           "under limit monitoring");
    }
    if (op.kind != Tok::kGt && op.kind != Tok::kLt) {
      fail(cur_.kind == Tok::kEnd ? "expected '>' or '<' but reached end of input"
                                  : "expected '>' or '<', found '" + cur_.text + "'");
    }
    take();
    LinExpr rhs = parse_linexpr();
    // lhs > rhs  <=>  (lhs - rhs) > 0 ; lhs < rhs  <=>  (rhs - lhs) > 0.
    const LinExpr& big = op.kind == Tok::kGt ? lhs : rhs;
    const LinExpr& small = op.kind == Tok::kGt ? rhs : lhs;
    Atom atom;
    atom.coefficients.resize(alphabet_->size());
    for (std::size_t s = 0; s < atom.coefficients.size(); ++s) {
      atom.coefficients[s] = checked_add(big.coefficients[s],
                                         checked_neg(small.coefficients[s], op), op);
    }
    atom.rhs = checked_add(small.constant, checked_neg(big.constant, op), op);
    return FormulaNode::make_atom(std::move(atom));
  }

  LinExpr parse_linexpr() {
    LinExpr e;
    e.coefficients.assign(alphabet_->size(), 0);
    bool negative = false;
    if (cur_.kind == Tok::kMinus) {
      take();
      negative = true;
    }
    parse_term(e, negative);
    while (cur_.kind == Tok::kPlus || cur_.kind == Tok::kMinus) {
      negative = take().kind == Tok::kMinus;
      parse_term(e, negative);
    }
    return e;
  }

  void parse_term(LinExpr& e, bool negative) {
    const Token start = cur_;
    std::int64_t factor = 1;
    if (cur_.kind == Tok::kInt) {
      factor = take().value;
      if (cur_.kind != Tok::kStar) {
        const std::int64_t v = negative ? checked_neg(factor, start) : factor;
        e.constant = checked_add(e.constant, v, start);
        return;
      }
      take();
      if (cur_.kind != Tok::kFreq) fail("expected f(symbol) after '*'");
    }
    if (cur_.kind != Tok::kFreq) {
      fail(cur_.kind == Tok::kEnd ? "expected a term but reached end of input"
                                  : "expected a term, found '" + cur_.text + "'");
    }
    const Token freq = take();
    auto sym = alphabet_->find(freq.text);
    if (!sym) {
      throw ValidationError("unknown symbol '" + freq.text + "' at line " +
                            std::to_string(freq.line) + ", column " +
                            std::to_string(freq.column));
    }
    const std::int64_t v = negative ? checked_neg(factor, start) : factor;
    auto& slot = e.coefficients[index_of(*sym)];
    slot = checked_add(slot, v, start);
  }

  Lexer lex_;
  AlphabetPtr alphabet_;
  Token cur_;
};

}  // namespace

FrequencyFormula parse_formula(std::string_view text, AlphabetPtr alphabet) {
  Parser p(text, alphabet);
  return {alphabet, p.parse()};
}

std::vector<std::string> formula_symbols(std::string_view text) {
  Lexer lex(text);
  std::vector<std::string> out;
  for (Token t = lex.next(); t.kind != Tok::kEnd; t = lex.next()) {
    if (t.kind == Tok::kFreq &&
        std::find(out.begin(), out.end(), t.text) == out.end()) {
      out.push_back(t.text);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string magnitude(std::int64_t v) {
  // Works for INT64_MIN too.
  const auto m = v < 0 ? std::uint64_t(0) - static_cast<std::uint64_t>(v)
                       : static_cast<std::uint64_t>(v);
  return std::to_string(m);
}

void print_atom(const Atom& a, const Alphabet& alphabet, std::string& out) {
  out += '(';
  bool first = true;
  for (std::size_t s = 0; s < a.coefficients.size(); ++s) {
    const std::int64_t c = a.coefficients[s];
    if (c == 0) continue;
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    out += magnitude(c) + "*f(" +
           alphabet.name(Symbol{static_cast<std::uint32_t>(s)}) + ")";
    first = false;
  }
  if (first) out += '0';
  out += " > ";
  if (a.rhs < 0) out += '-';
  out += magnitude(a.rhs);
  out += ')';
}

void print_node(const FormulaNode& n, const Alphabet& alphabet, std::string& out) {
  switch (n.kind) {
    case FormulaNode::Kind::kAtom:
      print_atom(n.atom, alphabet, out);
      return;
    case FormulaNode::Kind::kNot:
      out += '!';
      print_node(n.children.front(), alphabet, out);
      return;
    case FormulaNode::Kind::kAnd:
    case FormulaNode::Kind::kOr: {
      const char* sep = n.kind == FormulaNode::Kind::kAnd ? " & " : " | ";
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += sep;
        print_node(n.children[i], alphabet, out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string print_formula(const FrequencyFormula& formula) {
  std::string out;
  print_node(formula.root, *formula.alphabet, out);
  return out;
}

// ---------------------------------------------------------------------------
// Library formulas

namespace {

Atom difference_atom(std::size_t size, std::size_t plus, std::int64_t plus_coef,
                     std::size_t minus) {
  Atom a;
  a.coefficients.assign(size, 0);
  a.coefficients[plus] = plus_coef;
  a.coefficients[minus] = -1;
  return a;
}

void require_two_symbols(const Alphabet& alphabet, const char* what) {
  if (alphabet.size() < 2) {
    throw ValidationError(std::string(what) +
                          " needs an alphabet with at least two symbols");
  }
}

}  // namespace

FrequencyFormula mode_existence_formula(const AlphabetPtr& alphabet) {
  require_two_symbols(*alphabet, "mode-existence formula");
  const std::size_t k = alphabet->size();
  std::vector<FormulaNode> disjuncts;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<FormulaNode> conjuncts;
    for (std::size_t s = 0; s < k; ++s) {
      if (s != a) {
        conjuncts.push_back(FormulaNode::make_atom(difference_atom(k, a, 1, s)));
      }
    }
    disjuncts.push_back(FormulaNode::make_and(std::move(conjuncts)));
  }
  return {alphabet, FormulaNode::make_or(std::move(disjuncts))};
}

FrequencyFormula disproportion_formula(const AlphabetPtr& alphabet,
                                       std::int64_t factor) {
  require_two_symbols(*alphabet, "disproportion formula");
  const std::size_t k = alphabet->size();
  std::vector<FormulaNode> conjuncts;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      // f_a < factor * f_b  <=>  factor * f_b - f_a > 0
      if (a != b) {
        conjuncts.push_back(
            FormulaNode::make_atom(difference_atom(k, b, factor, a)));
      }
    }
  }
  return {alphabet, FormulaNode::make_and(std::move(conjuncts))};
}

// ---------------------------------------------------------------------------
// Semantics

__extension__ using Int128 = __int128;

bool eval_atom_counts(const Atom& atom, std::span<const std::size_t> counts,
                      std::size_t len) {
  if (len == 0) {
    throw ValidationError("atom evaluation needs a non-empty word (len >= 1)");
  }
  if (counts.size() != atom.coefficients.size()) {
    throw ValidationError("atom evaluation: count vector does not match alphabet");
  }
  Int128 lhs = 0;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    lhs += static_cast<Int128>(atom.coefficients[s]) *
           static_cast<Int128>(counts[s]);
  }
  return lhs > static_cast<Int128>(atom.rhs) * static_cast<Int128>(len);
}

namespace {

bool eval_node(const FormulaNode& n, const std::vector<bool>& values,
               std::size_t& next) {
  switch (n.kind) {
    case FormulaNode::Kind::kAtom:
      return values.at(next++);
    case FormulaNode::Kind::kNot:
      return !eval_node(n.children.front(), values, next);
    case FormulaNode::Kind::kAnd: {
      // No short-circuit: every atom occurrence must consume its slot.
      bool r = true;
      for (const auto& c : n.children) r = eval_node(c, values, next) && r;
      return r;
    }
    case FormulaNode::Kind::kOr: {
      bool r = false;
      for (const auto& c : n.children) r = eval_node(c, values, next) || r;
      return r;
    }
  }
  return false;
}

void collect_atoms(const FormulaNode& n, std::vector<Atom>& out) {
  if (n.kind == FormulaNode::Kind::kAtom) {
    out.push_back(n.atom);
    return;
  }
  for (const auto& c : n.children) collect_atoms(c, out);
}

}  // namespace

bool eval_with_atom_values(const FormulaNode& root,
                           const std::vector<bool>& values) {
  std::size_t next = 0;
  const bool r = eval_node(root, values, next);
  if (next != values.size()) {
    throw ValidationError("atom value count does not match the formula");
  }
  return r;
}

std::vector<Atom> atoms(const FormulaNode& root) {
  std::vector<Atom> out;
  collect_atoms(root, out);
  return out;
}

bool eval_formula(const FrequencyFormula& formula, const Word& w) {
  if (w.empty()) {
    throw ValidationError("formula evaluation needs a non-empty word");
  }
  const auto c = counts(w);
  std::vector<bool> values;
  for (const auto& a : atoms(formula.root)) {
    values.push_back(eval_atom_counts(a, c, w.size()));
  }
  return eval_with_atom_values(formula.root, values);
}

}  // namespace freqmon
