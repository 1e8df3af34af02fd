#include <doctest.h>

#include <random>

#include "stonean/error.hpp"
#include "stonean/logic.hpp"
#include "stonean/sample.hpp"

using namespace stonean;
using namespace stonean::logic;

namespace {

Signature rq() { return Signature{{{"R", 2}, {"Q", 2}, {"P", 1}}, {}}; }

ParseErrorKind kind_of(const Signature& sig, const std::string& text, std::size_t* pos = nullptr) {
  try {
    parse(sig, text);
  } catch (const ParseError& e) {
    if (pos) *pos = e.position();
    return e.kind();
  }
  FAIL("parsed malformed input: " << text);
  return ParseErrorKind::Syntax;
}

}  // namespace

TEST_CASE("parse examples") {
  const Signature sig = rq();
  const Formula a = parse(sig, "E x. R(x, c_tau)");
  CHECK(equal(a, exists("x", rel("R", {Term::var("x"), Term::constant("c_tau")}))));

  const Formula b = parse(Signature{{{"R", 1}}, {}}, "(R(c_s) & ~(c_s = c_t))");
  REQUIRE(b->op == Op::And);
  CHECK(b->kids[0]->op == Op::Rel);
  CHECK(b->kids[1]->op == Op::Not);
  CHECK(b->kids[1]->kids[0]->op == Op::Eq);

  const Formula c = parse(Signature{{{"R", 1}, {"Q", 2}}, {}}, "E x. (R(x) | Q(x,x))");
  CHECK(c->op == Op::Exists);
  CHECK(c->kids[0]->op == Op::Or);
  CHECK(free_vars(c).empty());

  // Quantifier scope runs as far right as possible.
  const Formula d = parse(sig, "A x. (P(x) -> E y. R(x, y))");
  CHECK(print(d) == "A x. (P(x) -> E y. R(x, y))");
  // Chains of one connective associate to the left.
  const Formula e = parse(sig, "(P(a) & P(b) & P(c))");
  CHECK(equal(e, conj(conj(parse(sig, "P(a)"), parse(sig, "P(b)")), parse(sig, "P(c)"))));
  CHECK(equal(parse(sig, "  E   x.R( x ,c_tau ) "), a));
}

TEST_CASE("free variables and substitution") {
  const Signature sig = rq();
  CHECK(free_vars(parse(sig, "E x. R(x,y)")) == std::set<std::string>{"y"});
  CHECK(free_vars_ordered(parse(sig, "(R(y,x) & P(z))")) == std::vector<std::string>{"y", "x", "z"});
  CHECK(print(substitute(parse(sig, "P(x)"), "x", "c_s")) == "P(c_s)");
  const Formula closed = parse(sig, "E x. P(x)");
  CHECK(substitute(closed, "x", "c_s") == closed);
  // Bound occurrences stay put.
  CHECK(print(substitute(parse(sig, "(P(x) & E x. P(x))"), "x", "c_s")) == "(P(c_s) & E x. P(x))");
  CHECK(quantifier_depth(parse(sig, "E x. A y. R(x,y)")) == 2);
  CHECK(element_constants(parse(sig, "R(c_s, c_t)"), sig) == std::set<std::string>{"c_s", "c_t"});
}

TEST_CASE("print then parse is the identity on random trees") {
  Signature sig = rq();
  sig.constants = {"k"};
  std::mt19937_64 rng(sample::kDefaultSeed);
  int checked = 0;
  for (int i = 0; i < 1500; ++i) {
    const Formula f = random_formula(sig, 1 + i % 5, rng);
    const Formula g = parse(sig, print(f));
    CHECK_MESSAGE(equal(f, g), print(f));
    ++checked;
  }
  CHECK(checked >= 1000);
}

TEST_CASE("malformed inputs give positioned errors of the right kind") {
  const Signature sig = rq();
  struct Case {
    const char* text;
    ParseErrorKind kind;
    std::size_t pos;
  };
  const std::vector<Case> corpus{
      {"", ParseErrorKind::Syntax, 0},
      {"P(x", ParseErrorKind::Syntax, 3},
      {"P(x))", ParseErrorKind::Syntax, 4},
      {"(P(x) & P(y)", ParseErrorKind::Syntax, 12},
      {"P(x) & P(y)", ParseErrorKind::Syntax, 5},
      {"(P(x) & P(y) | P(z))", ParseErrorKind::Syntax, 13},
      {"(P(x) -> P(y) -> P(z))", ParseErrorKind::Syntax, 14},
      {"E x P(x)", ParseErrorKind::Syntax, 4},
      {"E x.", ParseErrorKind::Syntax, 4},
      {"~", ParseErrorKind::Syntax, 1},
      {"x =", ParseErrorKind::Syntax, 3},
      {"x = = y", ParseErrorKind::Syntax, 4},
      {"P(x,)", ParseErrorKind::Syntax, 4},
      {"P()", ParseErrorKind::Syntax, 2},
      {"P(x) #", ParseErrorKind::Syntax, 5},
      {"(P(x))  )", ParseErrorKind::Syntax, 8},
      {"x - y", ParseErrorKind::Syntax, 2},
      {"S(x)", ParseErrorKind::UnknownSymbol, 0},
      {"E y. T(y, y)", ParseErrorKind::UnknownSymbol, 5},
      {"P(x, y)", ParseErrorKind::ArityMismatch, 0},
      {"(P(x) & R(x))", ParseErrorKind::ArityMismatch, 8},
      {"E x. Q(x, x, x)", ParseErrorKind::ArityMismatch, 5},
      {"E P. P(x)", ParseErrorKind::Syntax, 2},
      {"P(R)", ParseErrorKind::Syntax, 2},
  };
  for (const Case& c : corpus) {
    std::size_t pos = 999;
    const ParseErrorKind k = kind_of(sig, c.text, &pos);
    CHECK_MESSAGE(k == c.kind, std::string(c.text));
    CHECK_MESSAGE(pos == c.pos, std::string(c.text));
  }
  try {
    parse(sig, "P(x");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("position 3") != std::string::npos);
  }
}

TEST_CASE("signature validation") {
  CHECK_THROWS_AS((Signature{{{"R", 0}}, {}}.validate()), InputError);
  CHECK_THROWS_AS((Signature{{{"R", 1}}, {"R"}}.validate()), InputError);
  CHECK_NOTHROW(rq().validate());
}

TEST_CASE("generated formulas are distinct and within depth") {
  const Signature sig{{{"R", 1}}, {}};
  const auto fs = generate_formulas(sig, {"x", "y"}, 2);
  std::set<std::string> seen;
  for (const auto& f : fs) {
    CHECK(seen.insert(print(f)).second);
    CHECK(quantifier_depth(f) <= 2);
    for (const auto& v : free_vars(f)) CHECK((v == "x" || v == "y"));
  }
  CHECK(generate_formulas(sig, {"x", "y"}, 2, 10).size() == 10);
}
