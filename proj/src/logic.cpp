#include "stonean/logic.hpp"

#include <algorithm>
#include <cctype>

#include "stonean/error.hpp"

namespace stonean::logic {

void Signature::validate() const {
  for (const auto& [r, k] : relations) {
    if (k < 1) throw InputError("relation " + r + " must have positive arity");
    if (constants.count(r)) throw InputError("symbol " + r + " is both a relation and a constant");
    if (r == "=") throw InputError("'=' is reserved");
  }
  if (constants.count("=")) throw InputError("'=' is reserved");
}

namespace {

Formula make(Op op, std::string symbol, std::vector<Term> terms, std::vector<Formula> kids) {
  return std::make_shared<const Node>(Node{op, std::move(symbol), std::move(terms), std::move(kids)});
}

}  // namespace

Formula rel(std::string r, std::vector<Term> ts) { return make(Op::Rel, std::move(r), std::move(ts), {}); }
Formula eq(Term a, Term b) { return make(Op::Eq, "", {std::move(a), std::move(b)}, {}); }
Formula neg(Formula f) { return make(Op::Not, "", {}, {std::move(f)}); }
Formula conj(Formula a, Formula b) { return make(Op::And, "", {}, {std::move(a), std::move(b)}); }
Formula disj(Formula a, Formula b) { return make(Op::Or, "", {}, {std::move(a), std::move(b)}); }
Formula implies(Formula a, Formula b) { return make(Op::Implies, "", {}, {std::move(a), std::move(b)}); }
Formula exists(std::string v, Formula body) { return make(Op::Exists, std::move(v), {}, {std::move(body)}); }
Formula forall(std::string v, Formula body) { return make(Op::Forall, std::move(v), {}, {std::move(body)}); }

bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->op != b->op || a->symbol != b->symbol || a->terms != b->terms || a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Tilde, Amp, Bar, Arrow, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_char(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, s.substr(start, i - start), start});
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", i++}); break;
      case ')': out.push_back({Tok::RParen, ")", i++}); break;
      case ',': out.push_back({Tok::Comma, ",", i++}); break;
      case '.': out.push_back({Tok::Dot, ".", i++}); break;
      case '~': out.push_back({Tok::Tilde, "~", i++}); break;
      case '&': out.push_back({Tok::Amp, "&", i++}); break;
      case '|': out.push_back({Tok::Bar, "|", i++}); break;
      case '=': out.push_back({Tok::Equals, "=", i++}); break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", i});
          i += 2;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError(ParseErrorKind::Syntax, i, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(const Signature& sig, const std::string& text) : sig_(sig), toks_(tokenize(text)) {}

  Formula run() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after formula");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(const std::string& msg, ParseErrorKind kind = ParseErrorKind::Syntax) const {
    throw ParseError(kind, peek().pos, msg);
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what + (peek().kind == Tok::End ? " before end of input" : ", found '" + peek().text + "'"));
    next();
  }

  Formula formula() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Tilde:
        next();
        return neg(formula());
      case Tok::LParen:
        return group();
      case Tok::Ident:
        if ((t.text == "E" || t.text == "A") && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Dot) {
          const bool ex = t.text == "E";
          next();
          const std::size_t at = peek().pos;
          std::string v = next().text;
          if (sig_.constants.count(v) || v.rfind(kElementPrefix, 0) == 0)
            throw ParseError(ParseErrorKind::Syntax, at, "cannot quantify over constant " + v);
          if (sig_.relations.count(v)) throw ParseError(ParseErrorKind::Syntax, at, "cannot quantify over relation symbol " + v);
          next();
          Formula body = formula();
          return ex ? exists(v, body) : forall(v, body);
        }
        if ((t.text == "E" || t.text == "A") && peek(1).kind == Tok::Ident && peek(2).kind != Tok::LParen &&
            peek(2).kind != Tok::Equals)
          throw ParseError(ParseErrorKind::Syntax, peek(2).pos, "expected '.' after quantified variable");
        if (peek(1).kind == Tok::LParen) return relation();
        return equation();
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  Formula group() {
    expect(Tok::LParen, "'('");
    Formula acc = formula();
    if (peek().kind == Tok::RParen) {
      next();
      return acc;
    }
    const Tok op = peek().kind;
    if (op != Tok::Amp && op != Tok::Bar && op != Tok::Arrow) fail("expected '&', '|', '->' or ')'");
    while (peek().kind == op) {
      next();
      Formula rhs = formula();
      acc = op == Tok::Amp ? conj(acc, rhs) : op == Tok::Bar ? disj(acc, rhs) : implies(acc, rhs);
      if (op == Tok::Arrow) break;
    }
    if (peek().kind == Tok::Amp || peek().kind == Tok::Bar || peek().kind == Tok::Arrow)
      fail("mixed or chained connectives need their own parentheses");
    expect(Tok::RParen, "')'");
    return acc;
  }

  Term term() {
    if (peek().kind != Tok::Ident) fail("expected a term");
    const Token& t = next();
    if (sig_.relations.count(t.text)) {
      --i_;
      fail("relation symbol " + t.text + " used as a term");
    }
    if (sig_.constants.count(t.text) || t.text.rfind(kElementPrefix, 0) == 0) return Term::constant(t.text);
    return Term::var(t.text);
  }

  Formula relation() {
    const Token& name = next();
    auto it = sig_.relations.find(name.text);
    if (it == sig_.relations.end()) {
      --i_;
      fail("unknown relation symbol " + name.text, ParseErrorKind::UnknownSymbol);
    }
    const std::size_t at = name.pos;
    expect(Tok::LParen, "'('");
    std::vector<Term> ts{term()};
    while (peek().kind == Tok::Comma) {
      next();
      ts.push_back(term());
    }
    expect(Tok::RParen, "')'");
    if (static_cast<int>(ts.size()) != it->second)
      throw ParseError(ParseErrorKind::ArityMismatch, at,
                       name.text + " expects " + std::to_string(it->second) + " arguments, got " + std::to_string(ts.size()));
    return rel(name.text, ts);
  }

  Formula equation() {
    Term a = term();
    expect(Tok::Equals, "'='");
    Term b = term();
    return eq(a, b);
  }

  const Signature& sig_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

void print_to(const Formula& f, std::string& out) {
  switch (f->op) {
    case Op::Rel:
      out += f->symbol + "(";
      for (std::size_t i = 0; i < f->terms.size(); ++i) out += (i ? ", " : "") + f->terms[i].name;
      out += ")";
      return;
    case Op::Eq:
      out += f->terms[0].name + " = " + f->terms[1].name;
      return;
    case Op::Not:
      out += "~";
      print_to(f->kids[0], out);
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      out += "(";
      print_to(f->kids[0], out);
      out += f->op == Op::And ? " & " : f->op == Op::Or ? " | " : " -> ";
      print_to(f->kids[1], out);
      out += ")";
      return;
    case Op::Exists:
    case Op::Forall:
      out += (f->op == Op::Exists ? "E " : "A ") + f->symbol + ". ";
      print_to(f->kids[0], out);
      return;
  }
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  auto note = [&](const Term& t) {
    if (t.is_var() && std::find(bound.begin(), bound.end(), t.name) == bound.end() &&
        std::find(out.begin(), out.end(), t.name) == out.end())
      out.push_back(t.name);
  };
  for (const auto& t : f->terms) note(t);
  if (f->op == Op::Exists || f->op == Op::Forall) {
    bound.push_back(f->symbol);
    collect_free(f->kids[0], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& k : f->kids) collect_free(k, bound, out);
}

}  // namespace

Formula parse(const Signature& sig, const std::string& text) { return Parser(sig, text).run(); }

std::string print(const Formula& f) {
  std::string out;
  print_to(f, out);
  return out;
}

std::vector<std::string> free_vars_ordered(const Formula& f) {
  std::vector<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  auto v = free_vars_ordered(f);
  return {v.begin(), v.end()};
}

Formula substitute(const Formula& f, const std::string& v, const std::string& c) {
  switch (f->op) {
    case Op::Rel:
    case Op::Eq: {
      std::vector<Term> ts = f->terms;
      bool changed = false;
      for (auto& t : ts)
        if (t.is_var() && t.name == v) t = Term::constant(c), changed = true;
      return changed ? make(f->op, f->symbol, ts, {}) : f;
    }
    case Op::Exists:
    case Op::Forall:
      if (f->symbol == v) return f;
      [[fallthrough]];
    default: {
      std::vector<Formula> kids;
      bool changed = false;
      for (const auto& k : f->kids) {
        kids.push_back(substitute(k, v, c));
        changed = changed || kids.back() != k;
      }
      return changed ? make(f->op, f->symbol, {}, kids) : f;
    }
  }
}

std::set<std::string> element_constants(const Formula& f, const Signature& sig) {
  std::set<std::string> out;
  for (const auto& t : f->terms)
    if (!t.is_var() && !sig.constants.count(t.name)) out.insert(t.name);
  for (const auto& k : f->kids) {
    auto sub = element_constants(k, sig);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

int quantifier_depth(const Formula& f) {
  int d = 0;
  for (const auto& k : f->kids) d = std::max(d, quantifier_depth(k));
  return d + ((f->op == Op::Exists || f->op == Op::Forall) ? 1 : 0);
}

int size(const Formula& f) {
  int n = 1;
  for (const auto& k : f->kids) n += size(k);
  return n;
}

std::vector<Formula> generate_formulas(const Signature& sig, const std::vector<std::string>& vars, int depth,
                                       std::size_t limit) {
  std::vector<Term> terms;
  for (const auto& v : vars) terms.push_back(Term::var(v));
  for (const auto& c : sig.constants) terms.push_back(Term::constant(c));

  std::vector<Formula> all;
  std::set<std::string> seen;
  auto add = [&](Formula f, std::vector<Formula>& layer) {
    if (limit && all.size() + layer.size() >= limit) return;
    if (seen.insert(print(f)).second) layer.push_back(std::move(f));
  };

  std::vector<Formula> layer;
  for (const auto& [r, k] : sig.relations) {
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      std::vector<Term> ts;
      for (auto i : idx) ts.push_back(terms[i]);
      add(rel(r, ts), layer);
      int p = k - 1;
      while (p >= 0 && ++idx[p] == terms.size()) idx[p--] = 0;
      if (p < 0) break;
    }
  }
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j) add(eq(terms[i], terms[j]), layer);
  all = layer;

  std::size_t last_begin = 0;
  for (int d = 1; d <= depth; ++d) {
    std::vector<Formula> fresh;
    const std::size_t n = all.size();
    for (std::size_t i = last_begin; i < n; ++i) {
      if (all[i]->op != Op::Not) add(neg(all[i]), fresh);
      for (const auto& v : free_vars_ordered(all[i])) add(exists(v, all[i]), fresh);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = std::max(i + 1, last_begin); j < n; ++j) add(conj(all[i], all[j]), fresh);
    last_begin = n;
    all.insert(all.end(), fresh.begin(), fresh.end());
  }
  return all;
}

Formula random_formula(const Signature& sig, int depth, std::mt19937_64& rng) {
  static const std::vector<std::string> pool{"x", "y", "z"};
  std::vector<std::string> consts(sig.constants.begin(), sig.constants.end());
  consts.push_back("c_s");
  consts.push_back("c_t");
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto term = [&]() {
    if (pick(3) == 0) return Term::constant(consts[pick(consts.size())]);
    return Term::var(pool[pick(pool.size())]);
  };
  std::vector<std::pair<std::string, int>> rels(sig.relations.begin(), sig.relations.end());
  auto atom = [&]() {
    if (rels.empty() || pick(4) == 0) return eq(term(), term());
    const auto& [r, k] = rels[pick(rels.size())];
    std::vector<Term> ts;
    for (int i = 0; i < k; ++i) ts.push_back(term());
    return rel(r, ts);
  };
  if (depth <= 0 || pick(4) == 0) return atom();
  switch (pick(7)) {
    case 0: return neg(random_formula(sig, depth - 1, rng));
    case 1: return conj(random_formula(sig, depth - 1, rng), random_formula(sig, depth - 1, rng));
    case 2: return disj(random_formula(sig, depth - 1, rng), random_formula(sig, depth - 1, rng));
    case 3: return implies(random_formula(sig, depth - 1, rng), random_formula(sig, depth - 1, rng));
    case 4: return exists(pool[pick(pool.size())], random_formula(sig, depth - 1, rng));
    case 5: return forall(pool[pick(pool.size())], random_formula(sig, depth - 1, rng));
    default: return atom();
  }
}

}  // namespace stonean::logic
